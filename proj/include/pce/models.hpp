#pragma once

#include "pce/polybasis.hpp"
#include "pce/rng.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <utility>

namespace pce {

/// An experiment generator: input sampler, deterministic response, and the
/// reference output standard deviation used for relative errors.
struct TestModel {
  std::string name;
  int dim = 0;
  double reference_sd = 0.0;
  std::string reference_source;  // analytic | paper | monte-carlo
  std::function<Dataset(Index count, std::uint64_t seed)> sample;
};

double ishigami(double x1, double x2, double x3);

Dataset ishigami_sample(Index count, std::uint64_t seed);
Dataset example2_sample(Index count, std::uint64_t seed);
Dataset truss_sample(Index count, std::uint64_t seed);
Dataset hiv_sample(Index count, std::uint64_t seed);

/// Known test models by name: ishigami, example2, truss, hiv.
TestModel get_model(const std::string& name);

/// sqrt of the analytic Ishigami variance a^2/8 + b pi^4/5 + b^2 pi^8/18 + 1/2
/// with a = 7, b = 0.1.
double ishigami_reference_sd();

/// Truss response surface at the standardized inputs (order: E1', E2', A1',
/// A2', P1'..P6').
double truss_response_standardized(const Eigen::Ref<const Vector>& z);

/// HIV basic reproduction number for the inputs in table order:
/// Q0, beta0, gamma, beta1, beta2, n1, n2, theta_d, alpha, kappa.
double hiv_r0(const Eigen::Ref<const Vector>& x);

/// Per-run sample standard deviations aggregated over independent runs.
std::pair<double, double> monte_carlo_reference(const TestModel& model, int runs,
                                                Index samples_per_run, std::uint64_t seed,
                                                int jobs = 1);

}  // namespace pce
