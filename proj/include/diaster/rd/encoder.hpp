#pragma once

#include "diaster/nn/param.hpp"

namespace diaster::rd {

using nn::Vector;

/// One-hot state (optionally concatenated with one-hot action) features for
/// tabular tasks; unambiguous and directly comparable with the exact oracles.
class SaEncoder {
 public:
  SaEncoder(int n_states, int n_actions, bool state_only = false)
      : n_states_(n_states), n_actions_(n_actions), state_only_(state_only) {}

  int dim() const { return state_only_ ? n_states_ : n_states_ + n_actions_; }
  int n_states() const { return n_states_; }
  int n_actions() const { return n_actions_; }
  bool state_only() const { return state_only_; }

  Vector encode(int s, int a) const;
  void encode_into(int s, int a, Vector& out) const;

 private:
  int n_states_, n_actions_;
  bool state_only_;
};

}  // namespace diaster::rd
