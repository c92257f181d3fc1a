#pragma once

#include "pce/benchmark.hpp"
#include "pce/fss.hpp"
#include "pce/models.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pce {

enum class Method { Fss, Benchmark };

std::string method_name(Method m);

struct ExperimentConfig {
  std::string example = "ishigami";  // ishigami | example2 | truss | hiv | csv:<path>
  bool both_methods = false;
  Method method = Method::Fss;
  int order = 2;
  Index samples = 100;
  int runs = 1;
  std::uint64_t seed = 0;
  double epsilon = 0.0;      // <= 0 means "auto" (cross-validated)
  int cv_folds = 5;
  int jobs = 1;
  bool timing = false;       // real wall times in reports; off keeps reports byte-stable
  Index eval_size = 10000;   // fresh sample size for the KL estimate
  std::optional<double> reference_sd;  // overrides the example's reference

  bool epsilon_auto() const { return epsilon <= 0.0; }
  void validate() const;
};

struct RunResult {
  int run = 0;
  double sd = 0.0;
  std::optional<double> re;
  std::optional<double> kl;  // unset when no generator is available
  double time_s = 0.0;
  double epsilon_used = 0.0;
  std::vector<std::string> warnings;
  std::vector<SelectionStep> trace;
};

struct MethodReport {
  std::vector<RunResult> runs;
  double sd_mean = 0.0;
  double sd_se = 0.0;
  std::optional<double> re_mean;  // relative error of the mean estimate
  bool kl_infinite = false;
  std::optional<double> kl_mean;
  std::optional<double> kl_se;
  double time_mean_s = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::optional<double> reference_sd;
  std::map<Method, MethodReport> methods;
};

/// Runs the configured experiment: per run, draw a training sample, fit,
/// read sigma off the coefficients, score RE against the reference and KL
/// against a fresh evaluation sample. Wall time covers fitting only.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Spec'd report JSON for one method (field names are stable).
std::string report_to_json(const ExperimentReport& report, Method method);

struct SweepRow {
  double axis_value = 0.0;
  Method method = Method::Fss;
  double re_mean = 0.0;  // mean of per-run relative errors
  double re_se = 0.0;
  bool kl_infinite = false;
  double kl_mean = 0.0;
  double time_mean = 0.0;
};

enum class SweepAxis { Order, Samples };

/// One experiment per axis value; rows are plot-ready.
std::vector<SweepRow> run_sweep(const ExperimentConfig& base, SweepAxis axis,
                                const std::vector<double>& values);

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);

}  // namespace pce
