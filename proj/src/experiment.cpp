#include "pce/experiment.hpp"

#include "pce/csv.hpp"
#include "pce/metrics.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <thread>

namespace pce {

std::string method_name(Method m) { return m == Method::Fss ? "fss" : "benchmark"; }

void ExperimentConfig::validate() const {
  if (runs < 1) throw ParameterError("runs must be >= 1");
  if (samples < 2) throw ParameterError("samples must be >= 2");
  if (order < 0) throw ParameterError("order must be >= 0");
  if (cv_folds < 2) throw ParameterError("cv-folds must be >= 2");
  if (jobs < 1) throw ParameterError("jobs must be >= 1");
  if (epsilon > 0.0 && !(epsilon < 1.0))
    throw ParameterError("epsilon must lie in (0,1) or be auto");
}

namespace {

constexpr std::uint64_t kTrainStream = 0;
constexpr std::uint64_t kTrueEvalStream = 1;
constexpr std::uint64_t kModelEvalStream = 2;

struct Problem {
  bool has_generator = false;
  TestModel model;       // valid when has_generator
  Dataset fixed;         // valid when !has_generator (csv data)
  std::optional<double> reference_sd;
};

Problem resolve_problem(const ExperimentConfig& cfg) {
  Problem p;
  if (cfg.example.rfind("csv:", 0) == 0) {
    p.fixed = read_dataset_csv(cfg.example.substr(4));
    p.reference_sd = cfg.reference_sd;
    return p;
  }
  p.has_generator = true;
  p.model = get_model(cfg.example);
  p.reference_sd = cfg.reference_sd ? cfg.reference_sd
                                    : std::optional<double>(p.model.reference_sd);
  return p;
}

RunResult execute_run(const Problem& problem, const ExperimentConfig& cfg, Method method,
                      int run) {
  RunResult out;
  out.run = run;
  const std::uint64_t run_seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(run));

  Dataset train;
  if (problem.has_generator) {
    train = problem.model.sample(cfg.samples, derive_stream(run_seed, kTrainStream));
  } else {
    train = problem.fixed;
    if (cfg.runs > 1 && run == 0)
      out.warnings.push_back("csv data: every run refits the same observations");
  }

  const auto t0 = std::chrono::steady_clock::now();
  PceModel model;
  if (method == Method::Fss) {
    FssConfig fc;
    fc.order = cfg.order;
    fc.cv_folds = cfg.cv_folds;
    fc.cv_seed = run_seed;
    if (cfg.epsilon_auto()) {
      fc.epsilon_auto = true;
      const ThresholdChoice choice = cross_validate_threshold(train, fc);
      fc.epsilon = choice.epsilon;
    } else {
      fc.epsilon = cfg.epsilon;
    }
    fc.epsilon_auto = false;
    FssFit fit = fit_fss_pce(train, fc);
    out.epsilon_used = fit.epsilon_used;
    out.warnings.insert(out.warnings.end(), fit.warnings.begin(), fit.warnings.end());
    out.trace = std::move(fit.trace);
    model = std::move(fit.model);
  } else {
    BenchmarkConfig bc;
    bc.order = cfg.order;
    bc.cv_folds = cfg.cv_folds;
    bc.cv_seed = run_seed;
    BenchmarkFit fit = fit_benchmark_sparse_pce(train, bc);
    out.warnings.insert(out.warnings.end(), fit.warnings.begin(), fit.warnings.end());
    out.trace = std::move(fit.trace);
    model = std::move(fit.model);
  }
  out.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const auto [mean, variance] = moments_from_coefficients(model);
  (void)mean;
  out.sd = std::sqrt(std::max(variance, 0.0));
  if (problem.reference_sd) out.re = relative_error(*problem.reference_sd, out.sd);

  if (problem.has_generator) {
    // Two independent fresh input samples: the estimator compares the output
    // distribution with the distribution of model predictions, so coupling
    // them through shared inputs would collapse distances for exact fits.
    const Dataset eval_true =
        problem.model.sample(cfg.eval_size, derive_stream(run_seed, kTrueEvalStream));
    const Dataset eval_model =
        problem.model.sample(cfg.eval_size, derive_stream(run_seed, kModelEvalStream));
    const Vector pred = model.predict(eval_model.inputs);
    out.kl = kl_divergence_knn(eval_true.outputs, pred, 1);
  }
  return out;
}

MethodReport aggregate(std::vector<RunResult> runs, std::optional<double> reference_sd) {
  MethodReport rep;
  std::vector<double> sds, kls, times;
  bool any_kl = false;
  for (const auto& r : runs) {
    sds.push_back(r.sd);
    times.push_back(r.time_s);
    if (r.kl) {
      kls.push_back(*r.kl);
      any_kl = true;
    }
  }
  const RunAggregate sd_agg = summarize_runs(sds);
  rep.sd_mean = sd_agg.mean;
  rep.sd_se = sd_agg.standard_error;
  if (reference_sd) rep.re_mean = relative_error(*reference_sd, rep.sd_mean);
  if (any_kl) {
    const RunAggregate kl_agg = summarize_runs(kls);
    rep.kl_infinite = kl_agg.infinite;
    if (!kl_agg.infinite) {
      rep.kl_mean = kl_agg.mean;
      rep.kl_se = kl_agg.standard_error;
    }
  }
  const RunAggregate t_agg = summarize_runs(times);
  rep.time_mean_s = t_agg.mean;
  rep.runs = std::move(runs);
  return rep;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const Problem problem = resolve_problem(cfg);

  ExperimentReport report;
  report.config = cfg;
  report.reference_sd = problem.reference_sd;

  std::vector<Method> methods;
  if (cfg.both_methods) {
    methods = {Method::Fss, Method::Benchmark};
  } else {
    methods = {cfg.method};
  }

  for (Method method : methods) {
    std::vector<RunResult> results(static_cast<std::size_t>(cfg.runs));
    if (cfg.jobs <= 1 || cfg.runs == 1) {
      for (int r = 0; r < cfg.runs; ++r)
        results[static_cast<std::size_t>(r)] = execute_run(problem, cfg, method, r);
    } else {
      std::atomic<int> next{0};
      std::vector<std::thread> pool;
      const int workers = std::min(cfg.jobs, cfg.runs);
      for (int t = 0; t < workers; ++t)
        pool.emplace_back([&] {
          for (int r = next.fetch_add(1); r < cfg.runs; r = next.fetch_add(1))
            results[static_cast<std::size_t>(r)] = execute_run(problem, cfg, method, r);
        });
      for (auto& th : pool) th.join();
    }
    if (!cfg.timing)
      for (auto& r : results) r.time_s = 0.0;
    report.methods[method] = aggregate(std::move(results), problem.reference_sd);
  }
  if (!cfg.timing)
    for (auto& [m, rep] : report.methods) rep.time_mean_s = 0.0;
  return report;
}

namespace {

nlohmann::ordered_json optional_number(const std::optional<double>& v) {
  if (!v) return nullptr;
  if (std::isinf(*v)) return "inf";
  return *v;
}

}  // namespace

std::string report_to_json(const ExperimentReport& report, Method method) {
  const MethodReport& rep = report.methods.at(method);
  const ExperimentConfig& cfg = report.config;
  nlohmann::ordered_json j;
  j["config"] = {
      {"example", cfg.example},
      {"method", method_name(method)},
      {"order", cfg.order},
      {"samples", cfg.samples},
      {"runs", cfg.runs},
      {"seed", cfg.seed},
      {"epsilon", cfg.epsilon_auto() ? nlohmann::ordered_json("auto")
                                     : nlohmann::ordered_json(cfg.epsilon)},
      {"cv_folds", cfg.cv_folds},
      {"eval_size", cfg.eval_size},
      {"reference_sd", report.reference_sd ? nlohmann::ordered_json(*report.reference_sd)
                                           : nlohmann::ordered_json(nullptr)},
      {"timing", cfg.timing},
      {"seed_derivation",
       "run_seed = splitmix64_mix(seed + (run+1)*0x9E3779B97F4A7C15); "
       "streams: train = run_seed + 0, eval = run_seed + 1"},
  };
  j["runs"] = nlohmann::ordered_json::array();
  for (const auto& r : rep.runs) {
    nlohmann::ordered_json row;
    row["run"] = r.run;
    row["sd"] = r.sd;
    row["re"] = optional_number(r.re);
    row["kl"] = optional_number(r.kl);
    row["time_s"] = r.time_s;
    row["epsilon_used"] = r.epsilon_used;
    row["warnings"] = r.warnings;
    j["runs"].push_back(std::move(row));
  }
  j["aggregate"] = {
      {"sd_mean", rep.sd_mean},
      {"sd_se", rep.sd_se},
      {"re_mean", optional_number(rep.re_mean)},
      {"kl_mean", optional_number(rep.kl_mean)},
      {"kl_se", optional_number(rep.kl_se)},
      {"kl_infinite", rep.kl_infinite},
      {"time_mean_s", rep.time_mean_s},
  };
  return j.dump(2) + "\n";
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& base, SweepAxis axis,
                                const std::vector<double>& values) {
  if (values.empty()) throw ParameterError("sweep needs at least one axis value");
  std::vector<SweepRow> rows;
  for (double v : values) {
    ExperimentConfig cfg = base;
    cfg.timing = true;
    if (axis == SweepAxis::Order)
      cfg.order = static_cast<int>(v);
    else
      cfg.samples = static_cast<Index>(v);
    const ExperimentReport report = run_experiment(cfg);
    for (const auto& [method, rep] : report.methods) {
      SweepRow row;
      row.axis_value = v;
      row.method = method;
      std::vector<double> res, kls;
      for (const auto& r : rep.runs) {
        if (r.re) res.push_back(*r.re);
        if (r.kl) kls.push_back(*r.kl);
      }
      if (!res.empty()) {
        const RunAggregate re_agg = summarize_runs(res);
        row.re_mean = re_agg.mean;
        row.re_se = re_agg.standard_error;
      }
      if (!kls.empty()) {
        const RunAggregate kl_agg = summarize_runs(kls);
        row.kl_infinite = kl_agg.infinite;
        row.kl_mean = kl_agg.infinite ? std::numeric_limits<double>::infinity() : kl_agg.mean;
      }
      row.time_mean = rep.time_mean_s;
      rows.push_back(row);
    }
  }
  return rows;
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "axis_value,method,re_mean,re_se,kl_mean,time_mean\n";
  char buf[40];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.17g", r.axis_value);
    out << buf << ',' << method_name(r.method) << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", r.re_mean);
    out << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", r.re_se);
    out << buf << ',';
    if (r.kl_infinite)
      out << "inf";
    else {
      std::snprintf(buf, sizeof(buf), "%.17g", r.kl_mean);
      out << buf;
    }
    out << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", r.time_mean);
    out << buf << '\n';
  }
}

}  // namespace pce
