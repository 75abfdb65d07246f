#pragma once

#include <functional>

#include "diaster/env/env.hpp"

namespace diaster::rl {

/// A deterministic evaluation policy: maps (state, step index) to an action.
using EvalPolicy = std::function<int(int state, int t)>;

/// Mean TRUE episodic return of greedy rollouts: each episode runs in a
/// fresh copy of the environment with a seed derived from `seed`, and the
/// score is the environment's own finish_episode — proxy rewards never
/// enter. Rollouts fan out over threads when `parallel` is set; per-rollout
/// rng streams and item-indexed results keep the mean identical for any
/// thread count.
double evaluate_policy(const env::EnvInstance& env, const EvalPolicy& policy, int n_episodes,
                       uint64_t seed, bool parallel = false);

}  // namespace diaster::rl
