#include "diaster/env/mdp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace diaster::env {

namespace {
constexpr double kSumTol = 1e-12;
}

void EnumeratedMdp::validate() const {
  if (n_states <= 0 || n_actions <= 0) throw std::invalid_argument("EnumeratedMdp: sizes must be positive");
  if (horizon <= 0) throw std::invalid_argument("EnumeratedMdp: horizon must be positive");
  if (transition.rows() != static_cast<Eigen::Index>(n_states) * n_actions ||
      transition.cols() != n_states)
    throw std::invalid_argument("EnumeratedMdp: transition shape mismatch");
  if (hidden_reward.rows() != n_states || hidden_reward.cols() != n_actions)
    throw std::invalid_argument("EnumeratedMdp: reward shape mismatch");
  if (initial_dist.size() != n_states) throw std::invalid_argument("EnumeratedMdp: initial_dist length mismatch");
  if (!terminal.empty() && static_cast<int>(terminal.size()) != n_states)
    throw std::invalid_argument("EnumeratedMdp: terminal flag length mismatch");

  for (Eigen::Index r = 0; r < transition.rows(); ++r) {
    if (transition.row(r).minCoeff() < 0.0)
      throw std::invalid_argument("EnumeratedMdp: negative transition probability in row " + std::to_string(r));
    if (std::abs(transition.row(r).sum() - 1.0) > kSumTol)
      throw std::invalid_argument("EnumeratedMdp: transition row " + std::to_string(r) + " does not sum to 1");
  }
  if (initial_dist.minCoeff() < 0.0 || std::abs(initial_dist.sum() - 1.0) > kSumTol)
    throw std::invalid_argument("EnumeratedMdp: initial_dist is not a distribution");

  for (int s = 0; s < n_states; ++s) {
    if (!is_terminal(s)) continue;
    for (int a = 0; a < n_actions; ++a) {
      if (hidden_reward(s, a) != 0.0)
        throw std::invalid_argument("EnumeratedMdp: terminal state " + std::to_string(s) + " has nonzero reward");
      for (int s2 = 0; s2 < n_states; ++s2) {
        const double want = (s2 == s) ? 1.0 : 0.0;
        if (std::abs(transition(row(s, a), s2) - want) > kSumTol)
          throw std::invalid_argument("EnumeratedMdp: terminal state " + std::to_string(s) + " is not absorbing");
      }
    }
  }
}

Policy deterministic_policy(int n_states, int n_actions, const std::vector<int>& choice) {
  if (static_cast<int>(choice.size()) != n_states)
    throw std::invalid_argument("deterministic_policy: one action per state required");
  Policy pi = Policy::Zero(n_states, n_actions);
  for (int s = 0; s < n_states; ++s) {
    if (choice[s] < 0 || choice[s] >= n_actions) throw std::invalid_argument("deterministic_policy: action out of range");
    pi(s, choice[s]) = 1.0;
  }
  return pi;
}

Policy uniform_policy(int n_states, int n_actions) {
  return Policy::Constant(n_states, n_actions, 1.0 / n_actions);
}

}  // namespace diaster::env
