#include "pce/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pce {

void BenchmarkConfig::validate() const {
  if (order < 0) throw ParameterError("polynomial order must be >= 0");
  if (cv_folds < 2) throw ParameterError("cross-validation needs K >= 2");
}

namespace {

struct PathEval {
  std::vector<double> sse_by_size;  // held-out SSE for path lengths 0..len
};

// Fits the full pipeline on `train`, then records held-out SSE for every
// path length. Coefficients are orthonormal projections of the training
// response; predictions go through the monomial representation.
PathEval evaluate_fold(const Dataset& train, const Matrix& test_inputs,
                       const Vector& test_outputs, const BenchmarkConfig& config) {
  GramSchmidtOptions gs;
  gs.dependence_tol = config.dependence_tolerance;
  gs.drop_dependent = true;
  const GramSchmidtResult gsr = build_monomial_basis(train, config.order, gs);
  const OrthonormalBasis& basis = gsr.basis;

  PathEval eval;
  const double m = static_cast<double>(train.size());
  const double theta0 = train.outputs.mean();
  Vector pred = Vector::Constant(test_outputs.size(), theta0);
  eval.sse_by_size.push_back((pred - test_outputs).squaredNorm());
  if (basis.size() <= 1) return eval;

  const LarPath path = lar_path(basis.values.rightCols(basis.size() - 1), train.outputs);
  const Matrix member_values = basis.evaluate(test_inputs);
  for (int entered : path.order) {
    const Index member = static_cast<Index>(entered) + 1;  // skip the constant
    const double theta = basis.values.col(member).dot(train.outputs) / m;
    pred += theta * member_values.col(member);
    eval.sse_by_size.push_back((pred - test_outputs).squaredNorm());
  }
  return eval;
}

}  // namespace

BenchmarkFit fit_benchmark_sparse_pce(const Dataset& data, const BenchmarkConfig& config) {
  data.validate();
  config.validate();

  BenchmarkFit fit;
  const auto full_size =
      static_cast<Index>(total_degree_indices(static_cast<int>(data.dim()), config.order).size());
  if (data.size() < full_size)
    fit.warnings.push_back("under-sampled: m=" + std::to_string(data.size()) +
                           " < P+1=" + std::to_string(full_size));

  // Path length chosen by K-fold cross-validation, bases refit per fold.
  const auto folds = kfold_assignments(data.size(), config.cv_folds, config.cv_seed);
  std::vector<PathEval> evals;
  evals.reserve(folds.size());
  std::size_t max_len = 0;
  for (const auto& test_rows : folds) {
    std::vector<char> is_test(static_cast<std::size_t>(data.size()), 0);
    for (Index r : test_rows) is_test[static_cast<std::size_t>(r)] = 1;
    const Index m_test = static_cast<Index>(test_rows.size());
    Dataset train{Matrix(data.size() - m_test, data.dim()), Vector(data.size() - m_test)};
    Matrix test_inputs(m_test, data.dim());
    Vector test_outputs(m_test);
    Index a = 0, b = 0;
    for (Index r = 0; r < data.size(); ++r) {
      if (is_test[static_cast<std::size_t>(r)]) {
        test_inputs.row(b) = data.inputs.row(r);
        test_outputs[b++] = data.outputs[r];
      } else {
        train.inputs.row(a) = data.inputs.row(r);
        train.outputs[a++] = data.outputs[r];
      }
    }
    evals.push_back(evaluate_fold(train, test_inputs, test_outputs, config));
    max_len = std::max(max_len, evals.back().sse_by_size.size() - 1);
  }

  int best_k = 0;
  double best_err = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k <= max_len; ++k) {
    double err = 0.0;
    for (const auto& e : evals)
      err += e.sse_by_size[std::min(k, e.sse_by_size.size() - 1)];
    if (err < best_err) {
      best_err = err;
      best_k = static_cast<int>(k);
    }
  }
  fit.selected_steps = best_k;

  // Final fit on the full data.
  GramSchmidtOptions gs;
  gs.dependence_tol = config.dependence_tolerance;
  gs.drop_dependent = true;
  GramSchmidtResult gsr = build_monomial_basis(data, config.order, gs);
  if (!gsr.dropped.empty())
    fit.warnings.push_back("dropped " + std::to_string(gsr.dropped.size()) +
                           " dependent candidates");
  OrthonormalBasis& full = gsr.basis;

  std::vector<Index> keep = {0};
  if (full.size() > 1) {
    const LarPath path = lar_path(full.values.rightCols(full.size() - 1), data.outputs);
    const int steps = std::min<int>(best_k, static_cast<int>(path.order.size()));
    Vector residual = data.outputs.array() - data.outputs.mean();
    for (int s = 0; s < steps; ++s) {
      const Index member = static_cast<Index>(path.order[static_cast<std::size_t>(s)]) + 1;
      keep.push_back(member);
      const double score =
          std::abs(pearson_correlation(full.values.col(member), residual));
      const double proj =
          full.values.col(member).dot(residual) / static_cast<double>(data.size());
      residual.noalias() -= proj * full.values.col(member);
      fit.trace.push_back({s + 1,
                           full.monomials[static_cast<std::size_t>(
                               full.source[static_cast<std::size_t>(member)])],
                           score, static_cast<int>(full.size() - 1) - (s + 1),
                           residual.squaredNorm()});
    }
  }

  OrthonormalBasis selected;
  selected.monomials = full.monomials;
  selected.rescale = full.rescale;
  selected.values.resize(full.train_size(), static_cast<Index>(keep.size()));
  selected.coeffs.resize(full.coeffs.rows(), static_cast<Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    selected.values.col(static_cast<Index>(i)) = full.values.col(keep[i]);
    selected.coeffs.col(static_cast<Index>(i)) = full.coeffs.col(keep[i]);
    selected.source.push_back(full.source[static_cast<std::size_t>(keep[i])]);
  }

  fit.model = least_squares_fit(std::move(selected), data.outputs);
  return fit;
}

}  // namespace pce
