#pragma once

#include <vector>

#include "diaster/nn/param.hpp"
#include "diaster/nn/rng.hpp"

namespace diaster::nn {

enum class Activation { kRelu, kTanh, kIdentity };

/// Fully-connected network: hidden layers share one activation, output layer
/// is linear. Weights use uniform fan-in initialization.
class DenseNet {
 public:
  DenseNet(int input_dim, const std::vector<int>& hidden, int output_dim,
           Activation act, Rng& rng, const std::string& name_prefix = "dense");

  Vector forward(const Vector& x) const;

  struct Cache {
    Vector input;
    std::vector<Vector> post;  // post-activation per layer; back() is the output
  };
  Vector forward(const Vector& x, Cache& cache) const;

  /// Accumulates parameter gradients for d(loss)/d(output) = dy and returns
  /// d(loss)/d(input).
  Vector backward(const Cache& cache, const Vector& dy);

  ParamList params();
  int input_dim() const { return input_dim_; }
  int output_dim() const { return output_dim_; }
  int n_layers() const { return static_cast<int>(weights_.size()); }

 private:
  std::vector<Param> weights_;  // layer l: out_l x in_l
  std::vector<Param> biases_;   // layer l: out_l x 1
  Activation act_;
  int input_dim_ = 0, output_dim_ = 0;
};

Vector apply_activation(Activation act, const Vector& pre);

}  // namespace diaster::nn
