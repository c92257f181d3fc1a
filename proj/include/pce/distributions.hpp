#pragma once

#include "pce/common.hpp"
#include "pce/rng.hpp"

#include <utility>
#include <vector>

namespace pce {

inline constexpr double kEulerMascheroni = 0.5772156649015328606;

/// One-dimensional marginal distribution.
struct MarginalSpec {
  enum class Kind { Uniform, Normal, Lognormal, Gumbel };

  Kind kind = Kind::Uniform;
  double p1 = 0.0;  // uniform: a, normal/lognormal: mean, gumbel: alpha
  double p2 = 1.0;  // uniform: b, normal/lognormal: sd,   gumbel: beta

  static MarginalSpec uniform(double a, double b);
  static MarginalSpec normal(double mean, double sd);
  /// Parameterized by the mean and standard deviation of the lognormal
  /// variable itself, not of the underlying normal.
  static MarginalSpec lognormal(double mean, double sd);
  static MarginalSpec gumbel(double alpha, double beta);

  void validate() const;  // throws ParameterError
};

/// Single draw from a marginal; the spec must already be valid.
double draw_marginal(const MarginalSpec& spec, SplitMix64& rng);

/// I.i.d. draws from a marginal.
Vector sample_marginal(const MarginalSpec& spec, Index count, SplitMix64& rng);

/// Gumbel location/scale from the distribution mean and standard deviation:
/// beta = sqrt(6) sd / pi, alpha = mean - gamma beta.
std::pair<double, double> gumbel_params_from_moments(double mean, double sd);

/// Quantile of the Gumbel distribution, x = alpha - beta log(-log(u)).
double gumbel_quantile(double alpha, double beta, double u);

/// Standard normal CDF.
double normal_cdf(double x);

/// Symmetric positive semi-definite covariance.
struct GaussianCovariance {
  Matrix sigma;
  explicit GaussianCovariance(Matrix s);  // throws CovarianceError / ShapeError
  Index dim() const { return sigma.rows(); }
};

/// Rows are i.i.d. N(mean, sigma). Throws CovarianceError if the
/// factorization detects a negative eigenvalue.
Matrix sample_mvn(const GaussianCovariance& cov, const Vector& mean, Index count,
                  SplitMix64& rng);

/// Bivariate Gumbel-Hougaard copula; theta = 1 is independence and
/// Kendall's tau = 1 - 1/theta.
struct GumbelHougaardCopula {
  double theta = 1.0;
  explicit GumbelHougaardCopula(double t);
};

/// C(u, v) = exp(-((-log u)^theta + (-log v)^theta)^(1/theta)).
double gh_copula_cdf(const GumbelHougaardCopula& c, double u, double v);

/// h(v | u) = dC/du, the conditional CDF of V given U = u.
double gh_h(const GumbelHougaardCopula& c, double v, double u_cond);

/// v such that h(v | u_cond) = w; h is strictly increasing in v.
double gh_h_inverse(const GumbelHougaardCopula& c, double w, double u_cond);

/// C-vine with all pair copulas attached to the first (root) variable.
struct CVineSpec {
  Index dim = 2;
  std::vector<GumbelHougaardCopula> pairs;  // c_{1j}, j = 2..dim
  CVineSpec(Index d, std::vector<GumbelHougaardCopula> p);
  static CVineSpec uniform_theta(Index d, double theta);
};

/// count x dim matrix of uniforms: u1 ~ U(0,1), u_j = h^{-1}(w_j | u1).
Matrix sample_cvine(const CVineSpec& spec, Index count, SplitMix64& rng);

/// One C-vine row written into out[0..dim).
void sample_cvine_row(const CVineSpec& spec, SplitMix64& rng, double* out);

/// Bivariate uniforms through a Gaussian copula whose correlation
/// rho_g = 2 sin(pi rho /6) reproduces the requested Pearson correlation
/// of the uniforms exactly.
Matrix sample_correlated_uniforms(double pearson_target, Index count, SplitMix64& rng);

}  // namespace pce
