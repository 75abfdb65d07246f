#pragma once

#include <string>
#include <vector>

namespace diaster::harness {

struct GradSuiteRow {
  std::string loss;
  double max_rel_error = 0.0;
  int seeds = 0;
  bool pass = false;
};

/// Finite-difference certification of every loss trained anywhere in the
/// toolkit: two-segment return loss, multicut return loss, step-prediction
/// loss, RUDDER-style loss, RRD loss and the TD loss, each at `seeds`
/// random parameterizations on random trajectories. Pass threshold 1e-4.
std::vector<GradSuiteRow> run_grad_suite(int seeds = 10, uint64_t master_seed = 7);

bool grad_suite_passes(const std::vector<GradSuiteRow>& rows);

}  // namespace diaster::harness
