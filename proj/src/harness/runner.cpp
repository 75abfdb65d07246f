#include "diaster/harness/runner.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>

#include "diaster/harness/metrics.hpp"
#include "diaster/nn/checkpoint.hpp"
#include "diaster/parallel.hpp"
#include "diaster/rl/train.hpp"

namespace diaster::harness {

namespace fs = std::filesystem;

std::string effective_out_dir(const ExperimentConfig& cfg) {
  if (const char* root = std::getenv("DIASTER_OUT_ROOT")) {
    fs::path p(cfg.out_dir);
    if (p.is_relative()) return (fs::path(root) / p).string();
  }
  return cfg.out_dir;
}

namespace {

double best_smoothed_return(const std::vector<MetricsRecord>& metrics, int window = 5) {
  double best = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < metrics.size(); ++i) {
    double acc = 0.0;
    int n = 0;
    for (size_t j = (i + 1 >= static_cast<size_t>(window)) ? i + 1 - window : 0; j <= i; ++j) {
      acc += metrics[j].mean_return;
      ++n;
    }
    best = std::max(best, acc / n);
  }
  return metrics.empty() ? 0.0 : best;
}

std::string run_tag(const ExperimentConfig& cfg, const std::string& variant) {
  std::string tag = rd::method_name(cfg.method) + "_m" + std::to_string(cfg.m);
  if (!variant.empty()) tag += "_" + variant;
  return tag;
}

SeedResult run_one_seed(const ExperimentConfig& cfg, const std::string& dir,
                        const std::string& variant, uint64_t seed) {
  SeedResult result;
  result.seed = seed;
  const std::string tag = run_tag(cfg, variant);
  const std::string base = tag + "_seed" + std::to_string(seed);
  result.metrics_file = (fs::path(dir) / (base + ".metrics.jsonl")).string();
  try {
    MetricsWriter writer(result.metrics_file,
                         {{"method", rd::method_name(cfg.method)},
                          {"m", std::to_string(cfg.m)},
                          {"variant", variant},
                          {"seed", std::to_string(seed)}});
    rl::TrainOutput out =
        rl::train_loop(cfg, seed, [&](const MetricsRecord& rec) { writer.write(rec); });

    nn::ParamList to_save;
    if (out.models.psi) for (auto* p : out.models.psi->params()) to_save.push_back(p);
    if (out.models.phi) for (auto* p : out.models.phi->params()) to_save.push_back(p);
    if (out.models.rudder) for (auto* p : out.models.rudder->params()) to_save.push_back(p);
    if (out.models.rrd_phi) for (auto* p : out.models.rrd_phi->params()) to_save.push_back(p);
    nn::Param q_param("qtable.q", 1, 1);
    if (out.qtable) {
      q_param.value = out.qtable->table();
      to_save.push_back(&q_param);
    }
    if (out.agent) for (auto* p : out.agent->online_params()) to_save.push_back(p);
    nn::save_checkpoint((fs::path(dir) / (base + ".ckpt")).string(), to_save,
                        {{"method", rd::method_name(cfg.method)},
                         {"m", std::to_string(cfg.m)},
                         {"train_step", std::to_string(out.wall_steps)},
                         {"seed", std::to_string(seed)}});

    result.final_return = out.final_eval;
    result.best_smoothed = best_smoothed_return(out.metrics);
    result.ok = true;
  } catch (const std::exception& e) {
    result.ok = false;
    result.error = e.what();
  }
  return result;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg, const std::string& variant,
                         bool parallel_seeds) {
  cfg.validate();
  const std::string dir = effective_out_dir(cfg);
  fs::create_directories(dir);

  RunResult result;
  result.seeds.resize(cfg.seeds.size());
  // seeds are independent workers; inner kernels stay serial when the seed
  // level is already parallel (OpenMP does not nest by default)
  parallel_for(static_cast<long>(cfg.seeds.size()), parallel_seeds,
               [&](long i) { result.seeds[i] = run_one_seed(cfg, dir, variant, cfg.seeds[i]); });

  // index rows written once, in seed order, under a single writer
  std::ofstream index((fs::path(dir) / "index.tsv").string(), std::ios::app);
  for (const auto& s : result.seeds) {
    index << run_tag(cfg, variant) << "\t" << rd::method_name(cfg.method) << "\t" << cfg.m << "\t"
          << s.seed << "\t" << (s.ok ? "ok" : ("failed: " + s.error)) << "\t";
    index.precision(17);
    index << s.final_return << "\t" << s.best_smoothed << "\t" << s.metrics_file << "\n";
  }
  return result;
}

std::vector<RunResult> run_sweep(const ExperimentConfig& base,
                                 const std::vector<std::pair<std::string, std::vector<std::string>>>& vary,
                                 bool parallel_seeds) {
  std::vector<std::map<std::string, std::string>> assignments{{}};
  for (const auto& [key, values] : vary) {
    std::vector<std::map<std::string, std::string>> next;
    for (const auto& partial : assignments)
      for (const auto& v : values) {
        auto copy = partial;
        copy[key] = v;
        next.push_back(std::move(copy));
      }
    assignments = std::move(next);
  }

  std::vector<RunResult> results;
  for (const auto& assignment : assignments) {
    ExperimentConfig cfg = base;
    std::string variant;
    for (const auto& [key, value] : assignment) {
      cfg.set(key, value);
      std::string clean = key + "-" + value;
      std::replace(clean.begin(), clean.end(), '.', '_');
      std::replace(clean.begin(), clean.end(), ',', '_');
      variant += (variant.empty() ? "" : "_") + clean;
    }
    cfg.validate();
    results.push_back(run_experiment(cfg, variant, parallel_seeds));
  }
  return results;
}

}  // namespace diaster::harness
