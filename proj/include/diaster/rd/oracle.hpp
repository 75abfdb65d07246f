#pragma once

#include <stdexcept>

#include "diaster/env/mdp.hpp"
#include "diaster/rd/subtraj_model.hpp"

namespace diaster::rd {

struct UndefinedStateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exact step-wise proxy reward: the conditional expectation, over t-step
/// prefixes ending in state s, of the prefix-difference reward
/// R_sub(tau_{0:t} + (s,a)) - R_sub(tau_{0:t}). Prefix weights follow the
/// conditional distribution Gamma_t(tau|s) = T_t(tau) P(s|last) / rho(s),
/// computed by full enumeration. Throws UndefinedStateError when the state
/// has zero on-policy probability at step t.
double exact_step_reward_oracle(const env::EnumeratedMdp& mdp, const env::Policy& policy,
                                const SubTrajModel& psi, int s, int a, int t);

}  // namespace diaster::rd
