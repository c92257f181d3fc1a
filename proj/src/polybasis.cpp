#include "pce/polybasis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pce {

int total_degree(const MultiIndex& mi) {
  int d = 0;
  for (int e : mi) d += e;
  return d;
}

namespace {

void emit_compositions(int remaining, int pos, MultiIndex& current,
                       std::vector<MultiIndex>& out) {
  const int n = static_cast<int>(current.size());
  if (pos == n - 1) {
    current[static_cast<std::size_t>(pos)] = remaining;
    out.push_back(current);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    current[static_cast<std::size_t>(pos)] = e;
    emit_compositions(remaining - e, pos + 1, current, out);
  }
}

}  // namespace

std::vector<MultiIndex> total_degree_indices(int n, int p) {
  if (n < 1) throw ParameterError("total_degree_indices requires n >= 1");
  if (p < 0) throw ParameterError("total_degree_indices requires p >= 0");
  std::vector<MultiIndex> out;
  MultiIndex current(static_cast<std::size_t>(n), 0);
  for (int d = 0; d <= p; ++d) emit_compositions(d, 0, current, out);
  return out;
}

void Dataset::validate() const {
  if (inputs.rows() < 1 || inputs.cols() < 1)
    throw ShapeError("dataset requires m >= 1 observations and n >= 1 inputs");
  if (outputs.size() != inputs.rows())
    throw ShapeError("dataset outputs must match the number of observations");
  if (!inputs.allFinite() || !outputs.allFinite())
    throw ParameterError("dataset contains non-finite entries");
}

RescaleMap RescaleMap::fit(const Matrix& x) {
  const Index n = x.cols();
  RescaleMap map;
  map.scale = Vector(n);
  map.offset = Vector(n);
  for (Index j = 0; j < n; ++j) {
    const double lo = x.col(j).minCoeff();
    const double hi = x.col(j).maxCoeff();
    if (hi > lo) {
      map.scale[j] = 2.0 / (hi - lo);
      map.offset[j] = -(hi + lo) / (hi - lo);
    } else {
      // Degenerate column: send it to zero; monomials touching it vanish.
      map.scale[j] = 1.0;
      map.offset[j] = -lo;
    }
  }
  return map;
}

RescaleMap RescaleMap::identity(Index n) {
  RescaleMap map;
  map.scale = Vector::Ones(n);
  map.offset = Vector::Zero(n);
  return map;
}

Matrix RescaleMap::apply(const Matrix& x) const {
  if (x.cols() != scale.size()) throw ShapeError("rescale map dimension mismatch");
  return (x * scale.asDiagonal()).rowwise() + offset.transpose();
}

Matrix evaluate_monomials(const std::vector<MultiIndex>& indices, const Matrix& x) {
  const Index m = x.rows();
  const Index n = x.cols();
  int max_deg = 0;
  for (const auto& mi : indices) {
    if (static_cast<Index>(mi.size()) != n)
      throw ShapeError("multi-index dimension does not match input dimension");
    for (int e : mi) max_deg = std::max(max_deg, e);
  }

  // Per-variable power table: powers[j].col(e) = x(:,j)^e.
  std::vector<Matrix> powers(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) {
    Matrix& p = powers[static_cast<std::size_t>(j)];
    p.resize(m, max_deg + 1);
    p.col(0).setOnes();
    for (int e = 1; e <= max_deg; ++e)
      p.col(e) = p.col(e - 1).cwiseProduct(x.col(j));
  }

  Matrix out(m, static_cast<Index>(indices.size()));
  for (std::size_t t = 0; t < indices.size(); ++t) {
    Vector col = Vector::Ones(m);
    for (Index j = 0; j < n; ++j) {
      const int e = indices[t][static_cast<std::size_t>(j)];
      if (e > 0) col = col.cwiseProduct(powers[static_cast<std::size_t>(j)].col(e));
    }
    out.col(static_cast<Index>(t)) = col;
  }
  return out;
}

Matrix OrthonormalBasis::evaluate(const Matrix& x_raw) const {
  if (x_raw.cols() != rescale.scale.size())
    throw ShapeError("input dimension does not match basis");
  return evaluate_monomials(monomials, rescale.apply(x_raw)) * coeffs;
}

Matrix OrthonormalBasis::gram() const {
  return values.transpose() * values / static_cast<double>(values.rows());
}

double OrthonormalBasis::gram_deviation() const {
  Matrix g = gram();
  g.diagonal().array() -= 1.0;
  return g.cwiseAbs().maxCoeff();
}

void OrthonormalBasis::append(const Vector& member_values, const Vector& member_coeffs,
                              int source_index) {
  values.conservativeResize(member_values.size(), values.cols() + 1);
  values.col(values.cols() - 1) = member_values;
  coeffs.conservativeResize(member_coeffs.size(), coeffs.cols() + 1);
  coeffs.col(coeffs.cols() - 1) = member_coeffs;
  source.push_back(source_index);
}

OrthoStep orthogonalize_against(const OrthonormalBasis& basis, Vector& values,
                                Vector& coeffs, double dependence_tol) {
  const double m = static_cast<double>(values.size());
  const double initial_norm = values.norm();
  if (initial_norm == 0.0) return {0.0, true};

  // Algorithm steps: sequentially remove the projection onto each member,
  // recomputing the inner product from the updated candidate.
  for (Index k = 0; k < basis.size(); ++k) {
    const double r = values.dot(basis.values.col(k)) / m;
    values.noalias() -= r * basis.values.col(k);
    coeffs.noalias() -= r * basis.coeffs.col(k);
  }

  const double ratio = values.norm() / initial_norm;
  if (ratio < dependence_tol) return {ratio, true};

  const double norm = empirical_norm(values);
  values /= norm;
  coeffs /= norm;
  return {ratio, false};
}

GramSchmidtResult modified_gram_schmidt(Matrix values, Matrix coeffs,
                                        std::vector<MultiIndex> monomials,
                                        RescaleMap rescale,
                                        const GramSchmidtOptions& opts) {
  if (values.cols() != coeffs.cols())
    throw ShapeError("gram-schmidt values/coefficients column mismatch");
  const Index q = values.cols();
  const Index m = values.rows();

  GramSchmidtResult result;
  OrthonormalBasis& basis = result.basis;
  basis.monomials = std::move(monomials);
  basis.rescale = std::move(rescale);
  basis.values.resize(m, 0);
  basis.coeffs.resize(coeffs.rows(), 0);

  for (Index i = 0; i < q; ++i) {
    Vector v = values.col(i);
    Vector c = coeffs.col(i);
    const OrthoStep step = orthogonalize_against(basis, v, c, opts.dependence_tol);
    if (step.dependent) {
      if (!opts.drop_dependent)
        throw DependenceError(
            "candidate " + std::to_string(i) + " is numerically dependent on the basis",
            static_cast<int>(i));
      result.dropped.push_back(static_cast<int>(i));
      continue;
    }
    basis.append(v, c, static_cast<int>(i));
  }
  return result;
}

GramSchmidtResult build_monomial_basis(const Dataset& data, int order,
                                       const GramSchmidtOptions& opts) {
  data.validate();
  auto indices = total_degree_indices(static_cast<int>(data.dim()), order);
  RescaleMap map = RescaleMap::fit(data.inputs);
  Matrix mono = evaluate_monomials(indices, map.apply(data.inputs));
  Matrix coeffs = Matrix::Identity(static_cast<Index>(indices.size()),
                                   static_cast<Index>(indices.size()));
  if (!opts.drop_dependent && data.size() < static_cast<Index>(indices.size()))
    throw ParameterError("need at least as many observations as basis polynomials");
  return modified_gram_schmidt(std::move(mono), std::move(coeffs), std::move(indices),
                               std::move(map), opts);
}

}  // namespace pce
