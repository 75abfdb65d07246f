#pragma once

#include <functional>

#include "diaster/nn/param.hpp"

namespace diaster::nn {

/// A scalar loss together with the backward pass that accumulates its
/// gradients into the parameters it was built from. Loss builders in this
/// codebase return one of these; backward() runs the pass.
struct LossGraph {
  double value = 0.0;
  std::function<void()> backprop;  // empty => detached from all parameters
};

/// Runs the backward pass. Throws std::logic_error for a detached graph
/// (a loss with no path to any parameter).
void backward(LossGraph& graph);

/// Max over parameter entries of the discrepancy between the analytic
/// gradient (from building `make_loss` and running its backward pass) and a
/// central finite difference of the loss value. The discrepancy for entry e
/// is |a_e - fd_e| / max(|a_e|, |fd_e|, scale_floor): relative above the
/// floor, absolute below it, where finite-difference noise dominates.
/// Requires eps in (0, 1e-2]. Parameters are restored on exit.
double grad_check(const std::function<LossGraph()>& make_loss, const ParamList& params,
                  double eps = 1e-5, double scale_floor = 1e-3);

}  // namespace diaster::nn
