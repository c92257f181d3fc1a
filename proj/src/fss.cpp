#include "pce/fss.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

namespace pce {

double pearson_correlation(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw ShapeError("pearson_correlation requires equal lengths");
  if (a.size() < 2) throw ParameterError("pearson_correlation requires m >= 2");
  const double am = a.mean();
  const double bm = b.mean();
  const Vector ac = a.array() - am;
  const Vector bc = b.array() - bm;
  const double na = ac.norm();
  const double nb = bc.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(ac.dot(bc) / (na * nb), -1.0, 1.0);
}

std::vector<std::vector<Index>> kfold_assignments(Index m, int folds, std::uint64_t seed) {
  if (folds < 2) throw ParameterError("cross-validation requires at least 2 folds");
  if (m < folds) throw ParameterError("cross-validation requires m >= folds");
  std::vector<Index> perm(static_cast<std::size_t>(m));
  std::iota(perm.begin(), perm.end(), Index{0});
  SplitMix64 rng(seed);
  for (Index i = m - 1; i > 0; --i) {
    const Index j = static_cast<Index>(rng() % static_cast<std::uint64_t>(i + 1));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  std::vector<std::vector<Index>> out(static_cast<std::size_t>(folds));
  for (Index i = 0; i < m; ++i)
    out[static_cast<std::size_t>(i % folds)].push_back(perm[static_cast<std::size_t>(i)]);
  return out;
}

std::vector<double> default_threshold_grid() {
  std::vector<double> grid(40);
  const double lo = 0.01, hi = 0.8;
  for (int i = 0; i < 40; ++i)
    grid[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, static_cast<double>(i) / 39.0);
  return grid;
}

void FssConfig::validate(Index m) const {
  if (order < 0) throw ParameterError("polynomial order must be >= 0");
  if (!epsilon_auto && !(epsilon > 0.0 && epsilon < 1.0))
    throw ParameterError("threshold must lie strictly inside (0,1)");
  if (epsilon_auto) {
    if (cv_folds < 2) throw ParameterError("cross-validation needs K >= 2");
    if (m >= 0 && m < cv_folds) throw ParameterError("cross-validation needs K <= m");
    for (double e : (threshold_grid.empty() ? default_threshold_grid() : threshold_grid))
      if (!(e > 0.0 && e < 1.0))
        throw ParameterError("threshold grid values must lie strictly inside (0,1)");
  }
}

FssProblem FssProblem::build(Dataset data, int order) {
  data.validate();
  FssProblem p;
  p.indices = total_degree_indices(static_cast<int>(data.dim()), order);
  p.rescale = RescaleMap::fit(data.inputs);
  p.mono = evaluate_monomials(p.indices, p.rescale.apply(data.inputs));
  const Index t = p.mono.cols();
  p.cand_norm = Matrix::Zero(p.mono.rows(), t);
  p.zero_variance.assign(static_cast<std::size_t>(t), 0);
  p.zero_variance[0] = 1;  // the constant candidate is never scored
  for (Index j = 1; j < t; ++j) {
    Vector c = p.mono.col(j).array() - p.mono.col(j).mean();
    const double norm = c.norm();
    if (norm <= 1e-300 ||
        norm <= 1e-14 * p.mono.col(j).norm()) {
      p.zero_variance[static_cast<std::size_t>(j)] = 1;
      continue;
    }
    p.cand_norm.col(j) = c / norm;
  }
  p.data = std::move(data);
  return p;
}

namespace {

OrthonormalBasis constant_basis(const FssProblem& p) {
  OrthonormalBasis basis;
  basis.monomials = p.indices;
  basis.rescale = p.rescale;
  const Index m = p.data.size();
  basis.values = Matrix::Ones(m, 1);
  basis.coeffs = Matrix::Zero(static_cast<Index>(p.indices.size()), 1);
  basis.coeffs(0, 0) = 1.0;
  basis.source = {0};
  return basis;
}

}  // namespace

FssFit fit_fss_pce(const FssProblem& p, const FssConfig& config) {
  config.validate(p.data.size());
  if (config.epsilon_auto)
    throw ParameterError("fit_fss_pce needs a fixed threshold; run cross_validate_threshold first");
  const double eps = config.epsilon;
  const Index m = p.data.size();
  const Index t = static_cast<Index>(p.indices.size());
  const Vector& y = p.data.outputs;

  FssFit fit;
  OrthonormalBasis basis = constant_basis(p);

  Vector residual = y.array() - y.mean();
  double rss = residual.squaredNorm();
  const double rss_floor = 1e-24 * std::max(rss, 1e-300);

  std::vector<Index> survivors;
  for (Index j = 1; j < t; ++j)
    if (!p.zero_variance[static_cast<std::size_t>(j)]) survivors.push_back(j);

  // Fixed scoring direction in raw mode.
  Vector raw_dir;
  if (config.score_target == ScoreTarget::Raw) {
    raw_dir = residual;
    const double n = raw_dir.norm();
    if (n > 0.0) raw_dir /= n;
  }
  bool raw_pruned = false;

  int iteration = 0;
  while (basis.size() < m && !survivors.empty()) {
    if (rss <= rss_floor) break;  // residual is numerically exhausted

    Vector dir;
    if (config.score_target == ScoreTarget::Residual) {
      dir = residual.array() - residual.mean();
      const double n = dir.norm();
      if (n <= 0.0) break;
      dir /= n;
    } else {
      if (raw_dir.size() == 0) break;
      dir = raw_dir;
    }
    const Vector scores_all = (p.cand_norm.transpose() * dir).cwiseAbs();

    // Screening: permanently remove candidates under the threshold.
    // In raw mode the scores never change, so one pass suffices.
    if (config.score_target == ScoreTarget::Residual || !raw_pruned) {
      std::vector<Index> kept;
      kept.reserve(survivors.size());
      for (Index j : survivors)
        if (scores_all[j] >= eps) kept.push_back(j);
      survivors.swap(kept);
      raw_pruned = true;
    }
    if (survivors.empty()) break;  // stopping rule: every score fell below the threshold

    // Greedy selection; ties resolved by graded candidate order.
    Index best = survivors.front();
    double best_score = scores_all[best];
    for (Index j : survivors) {
      if (scores_all[j] > best_score) {
        best_score = scores_all[j];
        best = j;
      }
    }
    survivors.erase(std::find(survivors.begin(), survivors.end(), best));

    Vector v = p.mono.col(best);
    Vector c = Vector::Zero(t);
    c[best] = 1.0;
    const OrthoStep step = orthogonalize_against(basis, v, c, config.dependence_tolerance);
    if (step.dependent) {
      fit.warnings.push_back("dropped dependent candidate " + std::to_string(best));
      continue;
    }
    basis.append(v, c, static_cast<int>(best));

    const double proj = residual.dot(v) / static_cast<double>(m);
    residual.noalias() -= proj * v;
    rss = residual.squaredNorm();

    ++iteration;
    fit.trace.push_back({iteration, p.indices[static_cast<std::size_t>(best)], best_score,
                         static_cast<int>(survivors.size()), rss});
  }

  if (basis.size() == 1)
    fit.warnings.push_back("no candidate exceeded the threshold; constant-only model");

  fit.model = least_squares_fit(std::move(basis), y);
  fit.epsilon_used = eps;
  return fit;
}

FssFit fit_fss_pce(const Dataset& data, const FssConfig& config) {
  return fit_fss_pce(FssProblem::build(data, config.order), config);
}

ThresholdChoice cross_validate_threshold(const Dataset& data, const FssConfig& config) {
  data.validate();
  FssConfig probe = config;
  probe.epsilon_auto = true;
  probe.validate(data.size());

  const std::vector<double> grid =
      config.threshold_grid.empty() ? default_threshold_grid() : config.threshold_grid;
  const auto folds = kfold_assignments(data.size(), config.cv_folds, config.cv_seed);

  // Per-fold problems are built once and shared across the grid.
  struct Fold {
    FssProblem problem;
    Matrix test_inputs;
    Vector test_outputs;
  };
  std::vector<Fold> prepared;
  prepared.reserve(folds.size());
  for (const auto& test_rows : folds) {
    std::vector<char> is_test(static_cast<std::size_t>(data.size()), 0);
    for (Index r : test_rows) is_test[static_cast<std::size_t>(r)] = 1;
    const Index m_test = static_cast<Index>(test_rows.size());
    const Index m_train = data.size() - m_test;
    Dataset train{Matrix(m_train, data.dim()), Vector(m_train)};
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
    prepared.push_back({FssProblem::build(std::move(train), config.order),
                        std::move(test_inputs), std::move(test_outputs)});
  }

  ThresholdChoice choice;
  choice.curve.reserve(grid.size());
  double energy = 0.0;
  for (const auto& f : prepared) energy += f.test_outputs.squaredNorm();
  const double tie_tol = 1e-10 * std::max(energy, 1e-300);

  double best_err = std::numeric_limits<double>::infinity();
  double best_eps = grid.back();
  for (double eps : grid) {
    FssConfig fold_cfg = config;
    fold_cfg.epsilon = eps;
    fold_cfg.epsilon_auto = false;
    double err = 0.0;
    for (const auto& f : prepared) {
      const FssFit fit = fit_fss_pce(f.problem, fold_cfg);
      const Vector pred = fit.model.predict(f.test_inputs);
      err += (pred - f.test_outputs).squaredNorm();
    }
    choice.curve.push_back({eps, err});
    // Strictly better, or tied within tolerance and sparser (larger epsilon).
    if (err < best_err - tie_tol || (err <= best_err + tie_tol && eps > best_eps)) {
      best_err = std::min(err, best_err);
      best_eps = eps;
    }
  }
  choice.epsilon = best_eps;
  return choice;
}

void write_trace_csv(const std::string& path, const std::vector<SelectionStep>& trace) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "iteration,multi_index,score,surviving_count,residual_rss\n";
  char buf[64];
  for (const auto& s : trace) {
    out << s.iteration << ",\"";
    for (std::size_t k = 0; k < s.index.size(); ++k) {
      if (k) out << ' ';
      out << s.index[k];
    }
    out << "\",";
    std::snprintf(buf, sizeof(buf), "%.17g", s.score);
    out << buf << ',' << s.surviving << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", s.residual_rss);
    out << buf << '\n';
  }
}

}  // namespace pce
