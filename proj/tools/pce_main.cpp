#include "pce/csv.hpp"
#include "pce/experiment.hpp"
#include "pce/models.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>

namespace {

int parse_jobs(int cli_jobs) {
  if (const char* env = std::getenv("PCE_JOBS")) {
    const int j = std::atoi(env);
    if (j >= 1) return j;
  }
  return cli_jobs;
}

double parse_epsilon(const std::string& text) {
  if (text == "auto") return 0.0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0')
    throw pce::ParameterError("--epsilon expects a number in (0,1) or 'auto'");
  return v;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw pce::IoError("cannot open " + path + " for writing");
  out << text;
}

std::string method_suffix_path(const std::string& out, pce::Method m, bool both) {
  if (!both) return out;
  const std::string tag = "." + pce::method_name(m) + ".json";
  const auto pos = out.rfind(".json");
  if (pos != std::string::npos && pos == out.size() - 5)
    return out.substr(0, pos) + tag;
  return out + tag;
}

void print_summary(const pce::ExperimentReport& report) {
  for (const auto& [method, rep] : report.methods) {
    std::printf("%-9s sd = %.6g +- %.3g", pce::method_name(method).c_str(), rep.sd_mean,
                rep.sd_se);
    if (rep.re_mean) std::printf("  re = %.4g%%", 100.0 * *rep.re_mean);
    if (rep.kl_infinite)
      std::printf("  kl = inf");
    else if (rep.kl_mean)
      std::printf("  kl = %.4g +- %.3g", *rep.kl_mean, rep.kl_se.value_or(0.0));
    if (report.config.timing) std::printf("  time = %.3gs", rep.time_mean_s);
    std::printf("\n");
  }
}

void emit_report(const pce::ExperimentReport& report, const std::string& out,
                 const std::string& format) {
  for (const auto& [method, rep] : report.methods) {
    (void)rep;
    const std::string text = pce::report_to_json(report, method);
    if (!out.empty())
      write_text(method_suffix_path(out, method, report.methods.size() > 1), text);
    else if (format == "json")
      std::fputs(text.c_str(), stdout);
  }
  if (!out.empty() || format != "json") print_summary(report);
}

void write_traces(const pce::ExperimentReport& report, const std::string& trace_dir) {
  if (trace_dir.empty()) return;
  for (const auto& [method, rep] : report.methods) {
    for (const auto& run : rep.runs) {
      char name[64];
      std::snprintf(name, sizeof(name), "/trace_%s_run%03d.csv",
                    pce::method_name(method).c_str(), run.run);
      pce::write_trace_csv(trace_dir + name, run.trace);
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse polynomial chaos expansion toolkit"};
  app.require_subcommand(1);

  pce::ExperimentConfig cfg;
  std::string method = "fss";
  std::string epsilon = "auto";
  std::string out, format = "json", trace_dir;
  int jobs = 1;

  auto add_common = [&](CLI::App* cmd, bool with_method) {
    cmd->add_option("--example", cfg.example,
                    "ishigami | example2 | truss | hiv | csv:<path>");
    if (with_method)
      cmd->add_option("--method", method, "fss | benchmark | both")
          ->check(CLI::IsMember({"fss", "benchmark", "both"}));
    cmd->add_option("--order", cfg.order, "polynomial order p");
    cmd->add_option("--samples", cfg.samples, "observations per run");
    cmd->add_option("--runs", cfg.runs, "independent runs");
    cmd->add_option("--seed", cfg.seed, "base seed");
    cmd->add_option("--epsilon", epsilon, "threshold in (0,1) or 'auto'");
    cmd->add_option("--cv-folds", cfg.cv_folds, "cross-validation folds");
    cmd->add_option("--eval-size", cfg.eval_size, "fresh sample size for KL");
    cmd->add_option("--jobs", jobs, "parallel runs (env PCE_JOBS overrides)");
    cmd->add_flag("--timing", cfg.timing, "report real wall times (reports stop being byte-stable)");
    cmd->add_option("--reference-sd", [&](const std::vector<std::string>& vals) {
      cfg.reference_sd = std::stod(vals.at(0));
      return true;
    }, "reference output sd override (required for RE on csv data)");
    cmd->add_option("--out", out, "output file");
    cmd->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--trace-dir", trace_dir, "write per-run selection traces here");
  };

  auto* run_cmd = app.add_subcommand("run", "run one experiment and report estimates");
  add_common(run_cmd, true);

  auto* sweep_cmd = app.add_subcommand("sweep", "repeat an experiment along an axis");
  add_common(sweep_cmd, true);
  std::string axis = "order";
  std::vector<double> axis_values;
  sweep_cmd->add_option("--axis", axis, "order | samples")
      ->check(CLI::IsMember({"order", "samples"}));
  sweep_cmd->add_option("--values", axis_values, "axis values")->required();

  auto* sample_cmd = app.add_subcommand("sample", "export a generated dataset as CSV");
  sample_cmd->add_option("--example", cfg.example, "generator name");
  sample_cmd->add_option("--samples", cfg.samples, "observations");
  sample_cmd->add_option("--seed", cfg.seed, "seed");
  sample_cmd->add_option("--out", out, "CSV path")->required();

  auto* fit_cmd = app.add_subcommand("fit", "fit a model to CSV data");
  std::string data_path, model_out;
  fit_cmd->add_option("--data", data_path, "CSV with header x1..xn,y")->required();
  fit_cmd->add_option("--method", method, "fss | benchmark")
      ->check(CLI::IsMember({"fss", "benchmark"}));
  fit_cmd->add_option("--order", cfg.order, "polynomial order p");
  fit_cmd->add_option("--epsilon", epsilon, "threshold in (0,1) or 'auto'");
  fit_cmd->add_option("--cv-folds", cfg.cv_folds, "cross-validation folds");
  fit_cmd->add_option("--seed", cfg.seed, "seed for fold assignment");
  fit_cmd->add_option("--reference-sd", [&](const std::vector<std::string>& vals) {
    cfg.reference_sd = std::stod(vals.at(0));
    return true;
  }, "reference output sd for RE");
  fit_cmd->add_option("--model-out", model_out, "write the fitted model JSON here");
  fit_cmd->add_option("--out", out, "report path");
  fit_cmd->add_option("--trace-dir", trace_dir, "write the selection trace here");

  auto* ref_cmd = app.add_subcommand("reference", "Monte Carlo reference output sd");
  int ref_runs = 100;
  pce::Index ref_samples = 100000;
  ref_cmd->add_option("--example", cfg.example, "generator name");
  ref_cmd->add_option("--runs", ref_runs, "Monte Carlo runs");
  ref_cmd->add_option("--samples-per-run", ref_samples, "observations per run");
  ref_cmd->add_option("--seed", cfg.seed, "seed");
  ref_cmd->add_option("--jobs", jobs, "parallel runs (env PCE_JOBS overrides)");
  ref_cmd->add_option("--out", out, "output file");

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.jobs = parse_jobs(jobs);
    cfg.epsilon = parse_epsilon(epsilon);
    if (method == "both") {
      cfg.both_methods = true;
    } else {
      cfg.method = method == "fss" ? pce::Method::Fss : pce::Method::Benchmark;
    }

    if (run_cmd->parsed()) {
      const auto report = pce::run_experiment(cfg);
      emit_report(report, out, format);
      write_traces(report, trace_dir);
    } else if (sweep_cmd->parsed()) {
      const auto rows = pce::run_sweep(
          cfg, axis == "order" ? pce::SweepAxis::Order : pce::SweepAxis::Samples,
          axis_values);
      if (out.empty()) throw pce::ParameterError("sweep requires --out <csv>");
      pce::write_sweep_csv(out, rows);
    } else if (sample_cmd->parsed()) {
      const pce::TestModel model = pce::get_model(cfg.example);
      pce::write_dataset_csv(out, model.sample(cfg.samples, cfg.seed));
    } else if (fit_cmd->parsed()) {
      cfg.example = "csv:" + data_path;
      cfg.runs = 1;
      const auto report = pce::run_experiment(cfg);
      emit_report(report, out, format);
      write_traces(report, trace_dir);
      if (!model_out.empty()) {
        // Refit once more to obtain the model object itself.
        const pce::Dataset data = pce::read_dataset_csv(data_path);
        if (cfg.method == pce::Method::Fss && !cfg.both_methods) {
          pce::FssConfig fc;
          fc.order = cfg.order;
          fc.cv_folds = cfg.cv_folds;
          fc.cv_seed = pce::mix_seed(cfg.seed, 0);
          fc.epsilon = cfg.epsilon_auto()
                           ? pce::cross_validate_threshold(data, fc).epsilon
                           : cfg.epsilon;
          pce::save_model(model_out, pce::fit_fss_pce(data, fc).model);
        } else {
          pce::BenchmarkConfig bc;
          bc.order = cfg.order;
          bc.cv_folds = cfg.cv_folds;
          bc.cv_seed = pce::mix_seed(cfg.seed, 0);
          pce::save_model(model_out, pce::fit_benchmark_sparse_pce(data, bc).model);
        }
      }
    } else if (ref_cmd->parsed()) {
      const pce::TestModel model = pce::get_model(cfg.example);
      const auto [mean, se] =
          pce::monte_carlo_reference(model, ref_runs, ref_samples, cfg.seed, cfg.jobs);
      char buf[160];
      std::snprintf(buf, sizeof(buf),
                    "{\"example\": \"%s\", \"sd_mean\": %.17g, \"sd_stderr\": %.17g}\n",
                    model.name.c_str(), mean, se);
      if (out.empty())
        std::fputs(buf, stdout);
      else
        write_text(out, buf);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
