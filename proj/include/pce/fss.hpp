#pragma once

#include "pce/regression.hpp"
#include "pce/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pce {

/// Empirical Pearson correlation; 0 when either vector has zero variance.
double pearson_correlation(const Vector& a, const Vector& b);

/// Seeded fold assignments; sizes differ by at most one.
std::vector<std::vector<Index>> kfold_assignments(Index m, int folds, std::uint64_t seed);

enum class ScoreTarget {
  Residual,  // score candidates against the current residual
  Raw,       // score against Y itself (one-shot filter reading)
};

struct FssConfig {
  int order = 2;
  double epsilon = 0.1;        // used when epsilon_auto is false
  bool epsilon_auto = false;   // choose epsilon by K-fold cross-validation
  int cv_folds = 5;
  std::vector<double> threshold_grid;  // empty -> default_threshold_grid()
  double dependence_tolerance = 1e-10;
  ScoreTarget score_target = ScoreTarget::Residual;
  std::uint64_t cv_seed = 0;   // fold permutation seed

  void validate(Index m) const;
};

/// 40 geometrically spaced thresholds in [0.01, 0.8].
std::vector<double> default_threshold_grid();

struct SelectionStep {
  int iteration;
  MultiIndex index;
  double score;
  int surviving;       // candidate count after this iteration
  double residual_rss;
};

struct FssFit {
  PceModel model;
  std::vector<SelectionStep> trace;
  std::vector<std::string> warnings;
  double epsilon_used = 0.0;
};

/// Precomputed per-dataset quantities shared across threshold fits.
struct FssProblem {
  Dataset data;
  std::vector<MultiIndex> indices;  // graded, [0] constant
  RescaleMap rescale;
  Matrix mono;        // m x |indices| monomial values on rescaled inputs
  Matrix cand_norm;   // centered, unit-norm candidate columns (0 where degenerate)
  std::vector<char> zero_variance;

  static FssProblem build(Dataset data, int order);
};

/// Forward-selection sparse PCE at a fixed threshold.
FssFit fit_fss_pce(const FssProblem& problem, const FssConfig& config);
FssFit fit_fss_pce(const Dataset& data, const FssConfig& config);

struct ThresholdCurvePoint {
  double epsilon;
  double cv_error;
};

struct ThresholdChoice {
  double epsilon;
  std::vector<ThresholdCurvePoint> curve;
};

/// K-fold cross-validation of the threshold: for each grid value, total
/// held-out squared prediction error across folds; minimizer wins, ties go
/// to the largest (sparsest) threshold.
ThresholdChoice cross_validate_threshold(const Dataset& data, const FssConfig& config);

/// Trace CSV with columns iteration, multi_index, score, surviving_count,
/// residual_rss.
void write_trace_csv(const std::string& path, const std::vector<SelectionStep>& trace);

}  // namespace pce
