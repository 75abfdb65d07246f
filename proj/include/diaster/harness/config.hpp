#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "diaster/env/env.hpp"
#include "diaster/rd/methods.hpp"

namespace diaster::harness {

/// Declarative run description ("config.v1" key-value schema, see
/// docs/FORMATS.md). Defaults follow the reference hyper-parameter table:
/// batch 256, buffer 1e6, gamma 0.99, learning rate 3e-4, Adam everywhere.
struct ExperimentConfig {
  // environment: either inline env.* keys or env.file pointing at a spec
  std::map<std::string, std::string> env_kv;

  rd::Method method = rd::Method::kDiaster;
  int m = 1;                        // cut points per trajectory
  int rrd_k = 4;                    // RRD subsequence length
  bool cut_include_zero = false;    // widen the cut support to {0,...,T-1}
  bool psi_state_only = false;      // psi consumes states only
  bool step_time_feature = false;   // append t/T to the step model input

  int gru_hidden = 64;
  std::vector<int> dense_hidden{256, 256};  // step-reward model
  std::string agent = "tabular";            // tabular | dqn
  std::vector<int> agent_hidden{256, 256};

  double gamma = 0.99;
  double lr = 3e-4;       // all network losses
  double q_lr = 0.1;      // tabular agent
  double q_init = 0.0;
  double eps_start = 1.0;
  double eps_end = 0.05;
  double eps_decay_frac = 0.2;  // fraction of episodes over which eps decays

  int episodes = 1000;           // N
  int batches_per_episode = 4;   // M
  int batch_size = 256;          // B
  long buffer_capacity = 1'000'000;
  int eval_interval = 1000;      // environment steps between evaluations
  int eval_episodes = 10;
  std::vector<uint64_t> seeds{0, 1, 2, 3, 4};
  std::string out_dir = "runs/out";

  /// Builds a fresh environment instance from env_kv / env.file.
  env::EnvInstance make_env() const;

  /// Range checks that need the environment's horizon (m <= T-1, ...).
  void validate() const;

  /// Applies one "key = value" override (the sweep path). Unknown keys and
  /// range violations raise with the key named.
  void set(const std::string& key, const std::string& value);

  std::string to_text() const;
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text, const std::string& origin = "<string>");
void save_config(const ExperimentConfig& cfg, const std::string& path);

}  // namespace diaster::harness
