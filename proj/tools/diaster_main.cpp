#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "diaster/harness/grad_suite.hpp"
#include "diaster/harness/runner.hpp"
#include "diaster/harness/summarize.hpp"
#include "diaster/parallel.hpp"
#include "diaster/theory/battery.hpp"

namespace {

int cmd_run(const std::string& config_path, bool parallel_seeds) {
  const auto cfg = diaster::harness::load_config(config_path);
  const auto result = diaster::harness::run_experiment(cfg, "", parallel_seeds);
  for (const auto& s : result.seeds) {
    if (s.ok)
      std::printf("seed %llu: final %.4f best %.4f -> %s\n",
                  static_cast<unsigned long long>(s.seed), s.final_return, s.best_smoothed,
                  s.metrics_file.c_str());
    else
      std::printf("seed %llu: FAILED (%s)\n", static_cast<unsigned long long>(s.seed),
                  s.error.c_str());
  }
  return result.all_ok() ? 0 : 1;
}

int cmd_sweep(const std::string& config_path, const std::vector<std::string>& vary_specs,
              bool parallel_seeds) {
  const auto cfg = diaster::harness::load_config(config_path);
  std::vector<std::pair<std::string, std::vector<std::string>>> vary;
  for (const auto& spec : vary_specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) {
      std::cerr << "--vary expects key=v1,v2,...: " << spec << "\n";
      return 2;
    }
    std::vector<std::string> values;
    std::string piece;
    std::istringstream ss(spec.substr(eq + 1));
    while (std::getline(ss, piece, ',')) values.push_back(piece);
    vary.emplace_back(spec.substr(0, eq), values);
  }
  const auto results = diaster::harness::run_sweep(cfg, vary, parallel_seeds);
  bool ok = true;
  for (const auto& r : results) ok = ok && r.all_ok();
  std::printf("%zu variants finished; %s\n", results.size(), ok ? "all ok" : "some failed");
  return ok ? 0 : 1;
}

int cmd_verify_theory(int instances, double tol, const std::string& report) {
  diaster::theory::BatteryConfig cfg;
  cfg.instances = instances;
  cfg.tol = tol;
  if (!report.empty()) cfg.report_path = report;
  const auto result = diaster::theory::run_theorem_battery(cfg);
  std::printf("theorem battery: %d instances, %ld checks, %ld failures, max gap %.3e\n",
              result.instances, result.checks_run, result.failures, result.max_gap);
  std::printf("negative controls (must fail their checks): %s\n",
              result.negative_controls_ok ? "behaved" : "DID NOT FAIL");
  std::printf("verdict: %s\n", result.all_pass() ? "PASS" : "FAIL");
  return result.all_pass() ? 0 : 1;
}

int cmd_grad_check(int seeds) {
  const auto rows = diaster::harness::run_grad_suite(seeds);
  for (const auto& r : rows)
    std::printf("%-24s max rel err %.3e over %d seeds  %s\n", r.loss.c_str(), r.max_rel_error,
                r.seeds, r.pass ? "pass" : "FAIL");
  return diaster::harness::grad_suite_passes(rows) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"episodic return decomposition toolkit"};
  app.require_subcommand(1);
  if (const char* threads = std::getenv("DIASTER_THREADS"))
    diaster::set_threads(std::atoi(threads));

  std::string config_path, report_path, run_dir, out_path;
  std::vector<std::string> vary_specs;
  bool parallel_seeds = false;
  int instances = 100, seeds = 10;
  double tol = 1e-8;

  auto* run = app.add_subcommand("run", "train every seed of a config");
  run->add_option("config", config_path, "experiment config file")->required();
  run->add_flag("--parallel-seeds", parallel_seeds, "run seeds as parallel workers");

  auto* sweep = app.add_subcommand("sweep", "grid sweep over config overrides");
  sweep->add_option("config", config_path, "experiment config file")->required();
  sweep->add_option("--vary", vary_specs, "key=v1,v2,... (repeatable)")->required();
  sweep->add_flag("--parallel-seeds", parallel_seeds, "run seeds as parallel workers");

  auto* summ = app.add_subcommand("summarize", "aggregate a run directory into a table");
  summ->add_option("dir", run_dir, "run directory")->required();
  summ->add_option("-o,--out", out_path, "write the table here (default: stdout)");

  auto* verify = app.add_subcommand("verify-theory", "randomized theorem certification battery");
  verify->add_option("--instances", instances, "number of random instances (default 100)");
  verify->add_option("--tol", tol, "gap tolerance (default 1e-8)");
  verify->add_option("--report", report_path, "write per-check JSONL records here");

  auto* grad = app.add_subcommand("grad-check", "finite-difference suite over all losses");
  grad->add_option("--seeds", seeds, "random parameterizations per loss (default 10)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, parallel_seeds);
    if (sweep->parsed()) return cmd_sweep(config_path, vary_specs, parallel_seeds);
    if (summ->parsed()) {
      const std::string text = diaster::harness::summarize(run_dir, out_path);
      if (out_path.empty()) std::cout << text;
      return 0;
    }
    if (verify->parsed()) return cmd_verify_theory(instances, tol, report_path);
    if (grad->parsed()) return cmd_grad_check(seeds);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
