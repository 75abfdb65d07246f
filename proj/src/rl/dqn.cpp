#include "diaster/rl/dqn.hpp"

#include <cmath>
#include <stdexcept>

namespace diaster::rl {

NeuralQAgent::NeuralQAgent(int n_states, int n_actions, DqnConfig cfg, nn::Rng& rng)
    : n_states_(n_states),
      n_actions_(n_actions),
      cfg_(cfg),
      online_(n_states, cfg.hidden, n_actions, cfg.activation, rng, "q_online"),
      target_(n_states, cfg.hidden, n_actions, cfg.activation, rng, "q_target"),
      opt_(online_.params(), {.learning_rate = cfg.learning_rate}) {
  nn::copy_values(online_.params(), target_.params());
}

nn::Vector NeuralQAgent::one_hot(int s) const {
  if (s < 0 || s >= n_states_) throw std::invalid_argument("NeuralQAgent: state out of range");
  nn::Vector x = nn::Vector::Zero(n_states_);
  x(s) = 1.0;
  return x;
}

double NeuralQAgent::td_loss_impl(const std::vector<RelabeledTransition>& batch, bool with_grad) {
  if (batch.empty()) throw std::invalid_argument("NeuralQAgent: empty batch");
  double loss = 0.0;
  const double inv = 1.0 / static_cast<double>(batch.size());
  for (const auto& tr : batch) {
    double bootstrap = 0.0;
    if (!tr.done) bootstrap = cfg_.gamma * target_.forward(one_hot(tr.s2)).maxCoeff();
    const double y = tr.reward + bootstrap;
    nn::DenseNet::Cache cache;
    const nn::Vector q = online_.forward(one_hot(tr.s), cache);
    const double residual = q(tr.a) - y;
    loss += residual * residual;
    if (with_grad) {
      nn::Vector dy = nn::Vector::Zero(n_actions_);
      dy(tr.a) = 2.0 * residual * inv;
      online_.backward(cache, dy);
    }
  }
  return loss * inv;
}

double NeuralQAgent::td_loss(const std::vector<RelabeledTransition>& batch) const {
  return const_cast<NeuralQAgent*>(this)->td_loss_impl(batch, false);
}

nn::LossGraph NeuralQAgent::make_td_loss(const std::vector<RelabeledTransition>& batch) {
  return {td_loss(batch), [this, &batch] { td_loss_impl(batch, true); }};
}

double NeuralQAgent::update(const std::vector<RelabeledTransition>& batch) {
  nn::zero_grads(online_.params());
  const double loss = td_loss_impl(batch, true);
  if (!std::isfinite(loss) || !opt_.step()) {
    ++skipped_;
    return loss;
  }
  nn::blend_values(online_.params(), target_.params(), cfg_.target_tau);
  return loss;
}

int NeuralQAgent::greedy_action(int s) const {
  const nn::Vector q = online_.forward(one_hot(s));
  int best = 0;
  for (int a = 1; a < n_actions_; ++a)
    if (q(a) > q(best)) best = a;
  return best;
}

int NeuralQAgent::epsilon_greedy(int s, double epsilon, nn::Rng& rng) const {
  if (nn::uniform(rng) < epsilon) return nn::uniform_int(rng, 0, n_actions_ - 1);
  return greedy_action(s);
}

double NeuralQAgent::q_value(int s, int a) const { return online_.forward(one_hot(s))(a); }

}  // namespace diaster::rl
