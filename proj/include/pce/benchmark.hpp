#pragma once

#include "pce/fss.hpp"
#include "pce/regression.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pce {

struct BenchmarkConfig {
  int order = 2;
  int cv_folds = 5;
  double dependence_tolerance = 1e-10;
  std::uint64_t cv_seed = 0;

  void validate() const;
};

struct BenchmarkFit {
  PceModel model;
  std::vector<SelectionStep> trace;   // LAR entry order over basis members
  std::vector<std::string> warnings;  // under-sampling, dependence drops
  int selected_steps = 0;             // CV-chosen LAR path length
};

/// Comparison method: orthonormalize every monomial of degree <= order with
/// the modified Gram-Schmidt algorithm (dropping dependent candidates), run
/// least-angle regression on the members, pick the path length by K-fold
/// cross-validation, and refit the selected members by least squares.
/// Runs with m < C(n+p, n) + 1 proceed and are flagged, not rejected.
BenchmarkFit fit_benchmark_sparse_pce(const Dataset& data, const BenchmarkConfig& config);

}  // namespace pce
