#include "diaster/rl/qtable.hpp"

#include <stdexcept>

namespace diaster::rl {

QTable::QTable(int n_states, int n_actions, QTableConfig cfg)
    : q_(Matrix::Constant(n_states, n_actions, cfg.initial_value)), cfg_(cfg) {
  if (!(cfg.gamma > 0.0 && cfg.gamma <= 1.0)) throw std::invalid_argument("QTable: gamma must be in (0, 1]");
  if (cfg.learning_rate <= 0.0) throw std::invalid_argument("QTable: learning rate must be positive");
}

void QTable::update(int s, int a, double reward, int s2, bool done) {
  const double bootstrap = done ? 0.0 : cfg_.gamma * q_.row(s2).maxCoeff();
  q_(s, a) += cfg_.learning_rate * (reward + bootstrap - q_(s, a));
}

int QTable::greedy_action(int s) const {
  int best = 0;
  for (int a = 1; a < q_.cols(); ++a)
    if (q_(s, a) > q_(s, best)) best = a;
  return best;
}

int QTable::epsilon_greedy(int s, double epsilon, nn::Rng& rng) const {
  if (nn::uniform(rng) < epsilon) return nn::uniform_int(rng, 0, static_cast<int>(q_.cols()) - 1);
  return greedy_action(s);
}

}  // namespace diaster::rl
