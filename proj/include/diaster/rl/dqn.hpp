#pragma once

#include <vector>

#include "diaster/nn/adam.hpp"
#include "diaster/nn/autodiff.hpp"
#include "diaster/nn/dense.hpp"

namespace diaster::rl {

struct RelabeledTransition {
  int s = 0;
  int a = 0;
  double reward = 0.0;
  int s2 = 0;
  bool done = false;
};

struct DqnConfig {
  std::vector<int> hidden{256, 256};
  double gamma = 0.99;
  double learning_rate = 3e-4;
  double target_tau = 0.005;  // target network smoothing coefficient
  nn::Activation activation = nn::Activation::kRelu;
};

/// Small value-based agent: online and target networks over one-hot states,
/// squared TD error against the target net, Adam updates, and exponential
/// target smoothing after every applied step.
class NeuralQAgent {
 public:
  NeuralQAgent(int n_states, int n_actions, DqnConfig cfg, nn::Rng& rng);

  /// One optimizer step on the batch TD loss. Returns the loss; if the loss
  /// or its gradients are non-finite the step is skipped and skipped_steps()
  /// increments.
  double update(const std::vector<RelabeledTransition>& batch);

  int greedy_action(int s) const;
  int epsilon_greedy(int s, double epsilon, nn::Rng& rng) const;
  double q_value(int s, int a) const;

  /// TD loss of a batch at the current parameters (no update). Exposed so
  /// the gradient suite can finite-difference it.
  double td_loss(const std::vector<RelabeledTransition>& batch) const;
  nn::LossGraph make_td_loss(const std::vector<RelabeledTransition>& batch);

  nn::ParamList online_params() { return online_.params(); }
  /// Hard-copies the online parameters into the target network.
  void sync_target() { nn::copy_values(online_.params(), target_.params()); }
  long skipped_steps() const { return skipped_; }
  const DqnConfig& config() const { return cfg_; }

 private:
  nn::Vector one_hot(int s) const;
  double td_loss_impl(const std::vector<RelabeledTransition>& batch, bool with_grad);

  int n_states_, n_actions_;
  DqnConfig cfg_;
  nn::DenseNet online_, target_;
  nn::Adam opt_;
  long skipped_ = 0;
};

}  // namespace diaster::rl
