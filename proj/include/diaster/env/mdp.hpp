#pragma once

#include <vector>

#include "diaster/nn/param.hpp"

namespace diaster::env {

using nn::Matrix;
using nn::Vector;

/// Ordered state-action record of one episode. The episodic return is the
/// only reward signal and is revealed when the episode completes.
struct Trajectory {
  std::vector<int> states;   // length() + 1 entries
  std::vector<int> actions;  // length() entries
  double episodic_return = 0.0;

  int length() const { return static_cast<int>(actions.size()); }
  bool complete() const {
    return !actions.empty() && states.size() == actions.size() + 1;
  }
};

/// Tabular policy: row s is the action distribution at state s.
using Policy = Matrix;

/// Explicit finite-horizon MDP with a hidden per-step reward table. The
/// episodic return of a trajectory is the sum of hidden rewards along its
/// state-action pairs; agents never observe the table.
struct EnumeratedMdp {
  int n_states = 0;
  int n_actions = 0;
  Matrix transition;        // (n_states * n_actions) x n_states; rows sum to 1
  Matrix hidden_reward;     // n_states x n_actions
  Vector initial_dist;      // n_states; sums to 1
  int horizon = 0;
  std::vector<char> terminal;  // absorbing flags; row = e_s, reward 0 enforced

  int row(int s, int a) const { return s * n_actions + a; }
  bool is_terminal(int s) const { return !terminal.empty() && terminal[s]; }

  /// Checks all structural invariants (throws std::invalid_argument):
  /// stochastic rows and initial distribution within 1e-12, consistent
  /// shapes, terminal states absorbing with zero reward.
  void validate() const;
};

/// Deterministic policy (one-hot rows) from a per-state action choice.
Policy deterministic_policy(int n_states, int n_actions, const std::vector<int>& choice);

/// Uniform policy over all actions.
Policy uniform_policy(int n_states, int n_actions);

}  // namespace diaster::env
