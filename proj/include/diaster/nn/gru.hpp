#pragma once

#include <vector>

#include "diaster/nn/param.hpp"
#include "diaster/nn/rng.hpp"

namespace diaster::nn {

/// Gated recurrent cell. Gate equations (all matrices act on [x; h_prev]):
///
///   z = sigmoid(Wz [x; h] + bz)          update gate
///   r = sigmoid(Wr [x; h] + br)          reset gate
///   c = tanh(Wh [x; r .* h] + bh)        candidate
///   h' = (1 - z) .* c + z .* h
///
/// With all parameters and h0 zero, every output state is the zero vector.
class GruCell {
 public:
  GruCell(int input_dim, int hidden_dim, Rng& rng, const std::string& name_prefix = "gru");

  Vector step(const Vector& x, const Vector& h_prev) const;

  struct StepCache {
    Vector x, h_prev, z, r, cand;
  };
  Vector step(const Vector& x, const Vector& h_prev, StepCache& cache) const;

  /// One step of backpropagation through time: dh is the gradient w.r.t. the
  /// step's output state (including any contribution already flowing back
  /// from later steps). Accumulates parameter gradients and returns the
  /// gradient w.r.t. h_prev. If dx is non-null it receives the gradient
  /// w.r.t. the input.
  Vector backward_step(const StepCache& cache, const Vector& dh, Vector* dx = nullptr);

  ParamList params();
  int input_dim() const { return input_dim_; }
  int hidden_dim() const { return hidden_dim_; }

 private:
  Param w_update_, w_reset_, w_cand_;  // hidden x (input + hidden)
  Param b_update_, b_reset_, b_cand_;  // hidden x 1
  int input_dim_ = 0, hidden_dim_ = 0;
};

/// Runs the cell over a sequence; returns one hidden state per input.
/// An empty input sequence yields an empty output (the empty sub-sequence).
std::vector<Vector> gru_forward(const GruCell& cell, const std::vector<Vector>& inputs,
                                const Vector& h0);

}  // namespace diaster::nn
