#pragma once

#include "pce/common.hpp"

#include <vector>

namespace pce {

/// |reference - estimate| / reference.
double relative_error(double reference_sd, double estimate_sd);

/// Nearest-neighbor estimate of KL(true || model) for one-dimensional
/// samples: mean of log(nu_k / rho_k) plus log(M / (N-1)), where rho_k is
/// the k-th neighbor distance within the true sample and nu_k the k-th
/// neighbor distance into the model sample. Returns +infinity when the
/// model sample is degenerate (zero variance or non-finite values) or when
/// some nu_k vanishes while rho_k does not. Finite-sample bias can make the
/// estimate slightly negative.
double kl_divergence_knn(const Vector& true_samples, const Vector& model_samples, int k = 1);

struct RunAggregate {
  bool infinite = false;
  double mean = 0.0;
  double standard_error = 0.0;
};

/// Mean and standard error (sd/sqrt(count)); any infinite value makes the
/// aggregate infinite, matching the reporting convention for diverged runs.
RunAggregate summarize_runs(const std::vector<double>& values);

}  // namespace pce
