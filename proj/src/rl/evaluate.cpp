#include "diaster/rl/evaluate.hpp"

#include <stdexcept>
#include <vector>

#include "diaster/nn/rng.hpp"
#include "diaster/parallel.hpp"

namespace diaster::rl {

double evaluate_policy(const env::EnvInstance& env, const EvalPolicy& policy, int n_episodes,
                       uint64_t seed, bool parallel) {
  if (n_episodes < 1) throw std::invalid_argument("evaluate_policy: n_episodes must be at least 1");
  std::vector<double> returns(static_cast<size_t>(n_episodes), 0.0);
  parallel_for(n_episodes, parallel, [&](long i) {
    env::EnvInstance rollout_env = env;  // value copy; instances are independently owned
    int s = rollout_env.reset(nn::derive_seed(seed, "eval", static_cast<uint64_t>(i)));
    int t = 0;
    while (!rollout_env.done()) {
      auto [s2, done] = rollout_env.step(policy(s, t));
      s = s2;
      ++t;
    }
    returns[i] = rollout_env.finish_episode();
  });
  double mean = 0.0;
  for (double r : returns) mean += r;
  return mean / n_episodes;
}

}  // namespace diaster::rl
