#pragma once

#include "diaster/nn/param.hpp"

namespace diaster::nn {

struct AdamConfig {
  double learning_rate = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adaptive-moment optimizer over a fixed parameter list. Moment
/// accumulators mirror the parameter shapes; the step counter only advances
/// on applied updates.
class Adam {
 public:
  explicit Adam(ParamList params, AdamConfig cfg = {});

  /// Applies one update using the gradients currently stored in the
  /// parameters. Returns false (and leaves parameters, moments and the step
  /// counter untouched) if any gradient entry is non-finite.
  bool step();

  long step_count() const { return t_; }
  const AdamConfig& config() const { return cfg_; }
  const Matrix& first_moment(size_t i) const { return m_[i]; }
  const Matrix& second_moment(size_t i) const { return v_[i]; }

 private:
  ParamList params_;
  std::vector<Matrix> m_, v_;
  long t_ = 0;
  AdamConfig cfg_;
};

}  // namespace diaster::nn
