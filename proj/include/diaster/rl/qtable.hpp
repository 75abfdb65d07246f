#pragma once

#include "diaster/env/mdp.hpp"
#include "diaster/nn/rng.hpp"

namespace diaster::rl {

using nn::Matrix;

struct QTableConfig {
  double learning_rate = 0.1;
  double gamma = 0.99;
  double initial_value = 0.0;
};

/// Tabular state-action values with the standard one-step bootstrapped
/// update toward r + gamma * max_a' Q(s',a') * (1 - done).
class QTable {
 public:
  QTable(int n_states, int n_actions, QTableConfig cfg = {});

  void update(int s, int a, double reward, int s2, bool done);

  double value(int s, int a) const { return q_(s, a); }
  double max_value(int s) const { return q_.row(s).maxCoeff(); }
  /// Ties resolve toward the lowest action index.
  int greedy_action(int s) const;
  int epsilon_greedy(int s, double epsilon, nn::Rng& rng) const;

  const Matrix& table() const { return q_; }
  Matrix& table() { return q_; }
  const QTableConfig& config() const { return cfg_; }

 private:
  Matrix q_;
  QTableConfig cfg_;
};

}  // namespace diaster::rl
