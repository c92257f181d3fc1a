#include "pce/distributions.hpp"

#include <algorithm>
#include <cmath>

namespace pce {

MarginalSpec MarginalSpec::uniform(double a, double b) { return {Kind::Uniform, a, b}; }
MarginalSpec MarginalSpec::normal(double mean, double sd) { return {Kind::Normal, mean, sd}; }
MarginalSpec MarginalSpec::lognormal(double mean, double sd) { return {Kind::Lognormal, mean, sd}; }
MarginalSpec MarginalSpec::gumbel(double alpha, double beta) { return {Kind::Gumbel, alpha, beta}; }

void MarginalSpec::validate() const {
  switch (kind) {
    case Kind::Uniform:
      if (!(p1 < p2)) throw ParameterError("uniform marginal requires a < b");
      break;
    case Kind::Normal:
      if (!(p2 > 0.0)) throw ParameterError("normal marginal requires sd > 0");
      break;
    case Kind::Lognormal:
      if (!(p1 > 0.0)) throw ParameterError("lognormal marginal requires mean > 0");
      if (!(p2 > 0.0)) throw ParameterError("lognormal marginal requires sd > 0");
      break;
    case Kind::Gumbel:
      if (!(p2 > 0.0)) throw ParameterError("gumbel marginal requires beta > 0");
      break;
  }
}

double draw_marginal(const MarginalSpec& spec, SplitMix64& rng) {
  switch (spec.kind) {
    case MarginalSpec::Kind::Uniform:
      return spec.p1 + (spec.p2 - spec.p1) * rng.uniform01();
    case MarginalSpec::Kind::Normal:
      return spec.p1 + spec.p2 * rng.normal();
    case MarginalSpec::Kind::Lognormal: {
      // Convert the lognormal's own moments to underlying-normal parameters.
      const double sigma2 = std::log1p((spec.p2 / spec.p1) * (spec.p2 / spec.p1));
      const double mu = std::log(spec.p1) - 0.5 * sigma2;
      return std::exp(mu + std::sqrt(sigma2) * rng.normal());
    }
    case MarginalSpec::Kind::Gumbel:
      return gumbel_quantile(spec.p1, spec.p2, rng.uniform01());
  }
  throw ParameterError("unknown marginal kind");
}

Vector sample_marginal(const MarginalSpec& spec, Index count, SplitMix64& rng) {
  spec.validate();
  if (count < 1) throw ParameterError("sample count must be >= 1");
  Vector out(count);
  for (Index i = 0; i < count; ++i) out[i] = draw_marginal(spec, rng);
  return out;
}

std::pair<double, double> gumbel_params_from_moments(double mean, double sd) {
  if (!(sd > 0.0)) throw ParameterError("gumbel moments require sd > 0");
  const double beta = std::sqrt(6.0) * sd / std::numbers::pi;
  const double alpha = mean - kEulerMascheroni * beta;
  return {alpha, beta};
}

double gumbel_quantile(double alpha, double beta, double u) {
  return alpha - beta * std::log(-std::log(u));
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0); }

GaussianCovariance::GaussianCovariance(Matrix s) : sigma(std::move(s)) {
  if (sigma.rows() != sigma.cols()) throw ShapeError("covariance must be square");
  if (sigma.rows() < 1) throw ShapeError("covariance must be at least 1x1");
  const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw CovarianceError("covariance is not symmetric");
}

namespace {

struct MvnTransform {
  Matrix a;  // a * z has covariance sigma for z ~ N(0, I)
};

MvnTransform factor_covariance(const Matrix& sigma) {
  Eigen::LDLT<Matrix> ldlt(sigma);
  if (ldlt.info() != Eigen::Success)
    throw CovarianceError("covariance factorization failed");
  Vector d = ldlt.vectorD();
  const double dmax = std::max(1.0, d.cwiseAbs().maxCoeff());
  for (Index i = 0; i < d.size(); ++i) {
    if (d[i] < -1e-10 * dmax)
      throw CovarianceError("covariance is not positive semi-definite");
    d[i] = std::max(d[i], 0.0);
  }
  Matrix l = ldlt.matrixL();
  Matrix a = ldlt.transpositionsP().transpose() * Matrix(l * d.cwiseSqrt().asDiagonal());
  return {std::move(a)};
}

}  // namespace

Matrix sample_mvn(const GaussianCovariance& cov, const Vector& mean, Index count,
                  SplitMix64& rng) {
  if (mean.size() != cov.dim()) throw ShapeError("mean dimension does not match covariance");
  if (count < 1) throw ParameterError("sample count must be >= 1");
  const MvnTransform t = factor_covariance(cov.sigma);
  const Index n = cov.dim();
  Matrix z(count, n);
  for (Index i = 0; i < count; ++i)
    for (Index j = 0; j < n; ++j) z(i, j) = rng.normal();
  Matrix out = z * t.a.transpose();
  out.rowwise() += mean.transpose();
  return out;
}

GumbelHougaardCopula::GumbelHougaardCopula(double t) : theta(t) {
  if (!(theta >= 1.0)) throw ParameterError("Gumbel-Hougaard copula requires theta >= 1");
}

namespace {

void check_unit_interval(double u, const char* name) {
  if (!(u > 0.0) || !(u < 1.0))
    throw ParameterError(std::string(name) + " must lie strictly inside (0,1)");
}

// t = (x^theta + y^theta)^(1/theta) computed without overflow.
double stable_theta_norm(double x, double y, double theta) {
  const double hi = std::max(x, y);
  const double lo = std::min(x, y);
  if (hi <= 0.0) return 0.0;
  const double q = std::exp(theta * std::log(lo / hi));  // (lo/hi)^theta in [0,1]
  return hi * std::exp(std::log1p(q) / theta);
}

}  // namespace

double gh_copula_cdf(const GumbelHougaardCopula& c, double u, double v) {
  check_unit_interval(u, "u");
  check_unit_interval(v, "v");
  const double x = -std::log(u);
  const double y = -std::log(v);
  return std::exp(-stable_theta_norm(x, y, c.theta));
}

double gh_h(const GumbelHougaardCopula& c, double v, double u_cond) {
  check_unit_interval(v, "v");
  check_unit_interval(u_cond, "u_cond");
  if (c.theta == 1.0) return v;
  const double x = -std::log(u_cond);
  const double y = -std::log(v);
  const double t = stable_theta_norm(x, y, c.theta);
  // h = exp(-t) t^(1-theta) x^(theta-1) / u
  const double log_h = -t + (1.0 - c.theta) * std::log(t) + (c.theta - 1.0) * std::log(x) + x;
  return std::min(1.0, std::exp(log_h));
}

double gh_h_inverse(const GumbelHougaardCopula& c, double w, double u_cond) {
  check_unit_interval(w, "w");
  check_unit_interval(u_cond, "u_cond");
  if (c.theta == 1.0) return w;

  const double theta = c.theta;
  const double x = -std::log(u_cond);
  // Solve G(t) = -t + (1-theta) log t = c0 for t >= x, where
  // c0 = log w - (theta-1) log x - x; G is strictly decreasing.
  const double c0 = std::log(w) - (theta - 1.0) * std::log(x) - x;
  auto g = [&](double t) { return -t + (1.0 - theta) * std::log(t); };

  double lo = x;               // g(lo) = c0 - log w > c0
  double hi = x - std::log(w); // theta = 1 solution; grow until g(hi) < c0
  while (g(hi) > c0) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw NumericError("gh_h_inverse failed to bracket the root");
  }

  double t = hi;
  for (int it = 0; it < 200; ++it) {
    const double gt = g(t);
    if (gt > c0) lo = t; else hi = t;
    const double deriv = -1.0 - (theta - 1.0) / t;  // g'(t) < 0
    double step = (c0 - gt) / deriv;
    double next = t + step;
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);  // bisection safeguard
    const double delta = std::abs(next - t);
    t = next;
    if (delta <= 1e-14 * std::max(1.0, t)) break;
  }

  // y = (t^theta - x^theta)^(1/theta) = t (1 - (x/t)^theta)^(1/theta)
  double v;
  if (t <= x) {
    v = 1.0;
  } else {
    const double q = std::exp(theta * std::log(x / t));
    const double y = t * std::exp(std::log1p(-q) / theta);
    v = std::exp(-y);
  }
  return std::clamp(v, 1e-15, 1.0 - 1e-15);
}

CVineSpec::CVineSpec(Index d, std::vector<GumbelHougaardCopula> p) : dim(d), pairs(std::move(p)) {
  if (dim < 1) throw ParameterError("C-vine dimension must be >= 1");
  if (static_cast<Index>(pairs.size()) != dim - 1)
    throw ParameterError("C-vine needs one pair copula per non-root variable");
}

CVineSpec CVineSpec::uniform_theta(Index d, double theta) {
  std::vector<GumbelHougaardCopula> p;
  for (Index j = 1; j < d; ++j) p.emplace_back(theta);
  return CVineSpec(d, std::move(p));
}

void sample_cvine_row(const CVineSpec& spec, SplitMix64& rng, double* out) {
  const double u1 = rng.uniform01();
  out[0] = u1;
  for (Index j = 1; j < spec.dim; ++j) {
    const double w = rng.uniform01();
    out[j] = gh_h_inverse(spec.pairs[static_cast<std::size_t>(j - 1)], w, u1);
  }
}

Matrix sample_cvine(const CVineSpec& spec, Index count, SplitMix64& rng) {
  if (count < 1) throw ParameterError("sample count must be >= 1");
  Matrix out(count, spec.dim);
  std::vector<double> row(static_cast<std::size_t>(spec.dim));
  for (Index i = 0; i < count; ++i) {
    sample_cvine_row(spec, rng, row.data());
    for (Index j = 0; j < spec.dim; ++j) out(i, j) = row[static_cast<std::size_t>(j)];
  }
  return out;
}

Matrix sample_correlated_uniforms(double pearson_target, Index count, SplitMix64& rng) {
  if (!(std::abs(pearson_target) < 1.0))
    throw ParameterError("uniform Pearson target must satisfy |rho| < 1");
  if (count < 1) throw ParameterError("sample count must be >= 1");
  const double rho_g = 2.0 * std::sin(std::numbers::pi * pearson_target / 6.0);
  const double tail = std::sqrt(1.0 - rho_g * rho_g);
  Matrix out(count, 2);
  for (Index i = 0; i < count; ++i) {
    const double z1 = rng.normal();
    const double z2 = rho_g * z1 + tail * rng.normal();
    out(i, 0) = normal_cdf(z1);
    out(i, 1) = normal_cdf(z2);
  }
  return out;
}

}  // namespace pce
