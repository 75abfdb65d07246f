#pragma once

#include <string>
#include <vector>

#include "diaster/harness/config.hpp"

namespace diaster::harness {

struct SeedResult {
  uint64_t seed = 0;
  bool ok = false;
  std::string error;
  double final_return = 0.0;
  double best_smoothed = 0.0;
  std::string metrics_file;
};

struct RunResult {
  std::vector<SeedResult> seeds;
  bool all_ok() const {
    for (const auto& s : seeds)
      if (!s.ok) return false;
    return !seeds.empty();
  }
};

/// Runs every seed of the config: one metrics file and one checkpoint per
/// seed under the output directory (DIASTER_OUT_ROOT prefixes relative
/// paths), plus a row per seed appended to index.tsv. A failing seed is
/// recorded and does not stop the others. `variant` tags the filenames
/// (sweeps use key-value suffixes).
RunResult run_experiment(const ExperimentConfig& cfg, const std::string& variant = "",
                         bool parallel_seeds = false);

/// Grid sweep: `vary` holds (key, values) pairs; runs the cartesian product
/// of overrides, tagging each variant's files.
std::vector<RunResult> run_sweep(const ExperimentConfig& base,
                                 const std::vector<std::pair<std::string, std::vector<std::string>>>& vary,
                                 bool parallel_seeds = false);

/// Resolved output directory (applies DIASTER_OUT_ROOT).
std::string effective_out_dir(const ExperimentConfig& cfg);

}  // namespace diaster::harness
