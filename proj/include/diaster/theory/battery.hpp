#pragma once

#include <optional>

#include "diaster/theory/checks.hpp"

namespace diaster::theory {

struct BatteryConfig {
  int instances = 100;
  double tol = 1e-8;
  uint64_t seed = 20240; // master seed; instance i derives its own stream
  long long entry_budget = 200'000;  // per-instance enumeration size
  bool parallel = true;
  std::optional<std::string> report_path;  // JSONL, one record per check per instance
};

struct BatteryResult {
  int instances = 0;
  long checks_run = 0;
  long failures = 0;
  double max_gap = 0.0;
  bool negative_controls_ok = false;  // both shipped fixtures must fail their checks
  std::vector<TheoremReport> reports; // worst case per (instance, tag)
  bool all_pass() const { return failures == 0 && negative_controls_ok; }
};

/// Randomized certification battery: per instance draws an enumerable MDP
/// (dense transitions, 2-6 states, 2-3 actions, horizon fitted to the entry
/// budget), a dense random policy and a random psi, then runs theorem 1
/// over every (t, h) (h = 1 labeled an extension), theorem 3 over every
/// reachable (s, a, t), the argmax and policy-gradient lemma checks, and the
/// Q-hat offset check. A few proxy-reward table entries are cross-checked
/// against the standalone enumeration oracle on every instance. Negative
/// controls (action-dependent offset; return-inequivalent psi without the
/// true-return substitution) must fail.
BatteryResult run_theorem_battery(const BatteryConfig& cfg);

/// Shipped negative fixtures (also exercised standalone in tests).
bool negative_control_argmax();
bool negative_control_qhat(double tol);

/// Random instance pieces, reused by tests.
EnumeratedMdp random_dense_mdp(nn::Rng& rng, int n_states, int n_actions, int horizon);
Policy random_dense_policy(nn::Rng& rng, int n_states, int n_actions);
rd::SubTrajModel random_psi(nn::Rng& rng, int n_states, int n_actions, int hidden_dim = 8);

}  // namespace diaster::theory
