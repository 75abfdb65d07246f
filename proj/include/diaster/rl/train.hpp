#pragma once

#include <memory>

#include "diaster/harness/config.hpp"
#include "diaster/harness/metrics.hpp"
#include "diaster/rl/dqn.hpp"
#include "diaster/rl/qtable.hpp"
#include "diaster/rl/replay.hpp"

namespace diaster::rl {

struct TrainOutput {
  std::vector<harness::MetricsRecord> metrics;
  rd::MethodModels models;
  std::unique_ptr<QTable> qtable;
  std::unique_ptr<NeuralQAgent> agent;
  long env_steps = 0;
  long wall_steps = 0;
  double final_eval = 0.0;
};

/// One full training run: alternates collecting an episode with M update
/// batches (decomposition models, then the agent on freshly relabeled
/// transitions), evaluating on true returns every eval_interval environment
/// steps. Deterministic for a fixed (config, seed): every random draw comes
/// from a named stream derived from `seed`, and the parallel kernels reduce
/// in item order. `sink` (optional) receives each metrics record as soon as
/// it is produced.
TrainOutput train_loop(const harness::ExperimentConfig& cfg, uint64_t seed,
                       const harness::MetricsSink& sink = {}, bool parallel = true);

}  // namespace diaster::rl
