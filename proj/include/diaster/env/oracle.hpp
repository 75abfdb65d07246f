#pragma once

#include <stdexcept>
#include <vector>

#include "diaster/env/mdp.hpp"

namespace diaster::env {

/// One support point of the exact trajectory distribution: the state-action
/// pairs (s_0,a_0,...,s_{k-1},a_{k-1}). The distribution over tau_{0:k} does
/// not branch on the state following the final action, so no trailing state
/// is stored. hidden_return is the sum of hidden rewards over the pairs.
struct WeightedTrajectory {
  std::vector<int> states;   // length k
  std::vector<int> actions;  // length k
  double probability = 0.0;
  double hidden_return = 0.0;

  int length() const { return static_cast<int>(actions.size()); }
};

struct EnumerationCapExceeded : std::runtime_error {
  EnumerationCapExceeded(long long required_, long long cap_)
      : std::runtime_error("enumeration would produce " + std::to_string(required_) +
                           " weighted trajectories, above the cap of " + std::to_string(cap_) +
                           "; raise max_entries to at least " + std::to_string(required_)),
        required(required_),
        cap(cap_) {}
  long long required;
  long long cap;
};

/// Exact distribution over length-`upto` trajectories under `policy`:
/// rho0(s0) pi(a0|s0) prod_i P(s_i|s_{i-1},a_{i-1}) pi(a_i|s_i).
/// Probabilities sum to 1 within 1e-9. Refuses (with the required cap) when
/// the support exceeds max_entries.
std::vector<WeightedTrajectory> enumerate_trajectories(const EnumeratedMdp& mdp, const Policy& policy,
                                                       int upto, long long max_entries = 1'000'000);

/// Counts the support of enumerate_trajectories without materializing it.
long long count_trajectories(const EnumeratedMdp& mdp, const Policy& policy, int upto);

/// On-policy state distribution at step t by exact forward propagation.
Vector state_occupancy(const EnumeratedMdp& mdp, const Policy& policy, int t);

/// Maximum expected episodic return, by finite-horizon dynamic programming
/// over the hidden rewards.
double optimal_return(const EnumeratedMdp& mdp);

/// Time-indexed greedy policy achieving optimal_return: entry [t][s] is the
/// optimal action at state s and step t (ties toward lower action index).
std::vector<std::vector<int>> optimal_policy(const EnumeratedMdp& mdp);

/// Expected episodic return of a fixed policy (exact policy evaluation).
double policy_expected_return(const EnumeratedMdp& mdp, const Policy& policy);

}  // namespace diaster::env
