#pragma once

#include "pce/common.hpp"

#include <vector>

namespace pce {

/// Exponent vector of a monomial, one entry per input.
using MultiIndex = std::vector<int>;

int total_degree(const MultiIndex& mi);

/// All multi-indices of total degree <= p in n variables, graded order:
/// ascending total degree, lexicographically descending within a degree.
/// The list has C(n+p, n) entries and starts with the constant (0,...,0).
std::vector<MultiIndex> total_degree_indices(int n, int p);

/// Input/output observations; the empirical measure behind all inner products.
struct Dataset {
  Matrix inputs;   // m x n
  Vector outputs;  // m

  Index size() const { return inputs.rows(); }
  Index dim() const { return inputs.cols(); }
  void validate() const;  // throws ShapeError / ParameterError
};

/// Empirical inner product <a, b> = (1/m) sum_j a_j b_j.
template <class A, class B>
double empirical_inner(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  if (a.size() != b.size()) throw ShapeError("empirical inner product requires equal lengths");
  return a.dot(b) / static_cast<double>(a.size());
}

template <class A>
double empirical_norm(const Eigen::MatrixBase<A>& a) {
  return a.norm() / std::sqrt(static_cast<double>(a.size()));
}

/// Per-column affine map x -> scale * x + offset sending the training
/// min/max to [-1, 1]; stored so test data goes through the same map.
struct RescaleMap {
  Vector scale;
  Vector offset;

  static RescaleMap fit(const Matrix& x);
  static RescaleMap identity(Index n);
  Matrix apply(const Matrix& x) const;
};

/// Column t holds prod_k x(:,k)^indices[t][k].
Matrix evaluate_monomials(const std::vector<MultiIndex>& indices, const Matrix& x);

/// Ordered empirically-orthonormal polynomials. Each member is carried both
/// as a coefficient vector over the candidate monomial set (for evaluation on
/// new data) and as its values on the training set (for inner products).
struct OrthonormalBasis {
  std::vector<MultiIndex> monomials;  // coefficient domain, graded order
  RescaleMap rescale;
  Matrix coeffs;            // |monomials| x size
  Matrix values;            // m x size
  std::vector<int> source;  // candidate monomial index each member came from

  Index size() const { return values.cols(); }
  Index train_size() const { return values.rows(); }

  /// Member values at new points (k x size).
  Matrix evaluate(const Matrix& x_raw) const;

  /// Gram matrix under the empirical inner product.
  Matrix gram() const;
  /// max |gram - I|.
  double gram_deviation() const;

  void append(const Vector& member_values, const Vector& member_coeffs, int source_index);
};

struct GramSchmidtOptions {
  double dependence_tol = 1e-10;  // relative to the candidate's initial norm
  bool drop_dependent = false;    // drop flagged candidates instead of throwing
};

struct GramSchmidtResult {
  OrthonormalBasis basis;
  std::vector<int> dropped;  // candidate indices removed as dependent
};

/// Modified Gram-Schmidt over arbitrary initial vectors (columns of
/// `values`) whose monomial representations are the columns of `coeffs`.
/// Projections are removed sequentially under the empirical inner product;
/// a candidate whose norm falls below dependence_tol times its initial norm
/// is dependent: dropped or reported via DependenceError per options.
GramSchmidtResult modified_gram_schmidt(Matrix values, Matrix coeffs,
                                        std::vector<MultiIndex> monomials,
                                        RescaleMap rescale,
                                        const GramSchmidtOptions& opts = {});

/// Full orthonormal basis of all degree-<= p monomials on the dataset
/// (inputs rescaled to [-1,1] first). Requires m >= C(n+p, n) unless
/// opts.drop_dependent is set.
GramSchmidtResult build_monomial_basis(const Dataset& data, int order,
                                       const GramSchmidtOptions& opts = {});

struct OrthoStep {
  double residual_ratio;  // pre-normalization residual norm / initial norm
  bool dependent;
};

/// Orthogonalizes (values, coeffs) against the basis in place and normalizes.
/// Returns the residual ratio; when it falls under dependence_tol the
/// candidate is flagged dependent and left unnormalized.
OrthoStep orthogonalize_against(const OrthonormalBasis& basis, Vector& values,
                                Vector& coeffs, double dependence_tol = 1e-10);

}  // namespace pce
