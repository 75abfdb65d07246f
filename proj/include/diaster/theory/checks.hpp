#pragma once

#include <string>
#include <vector>

#include "diaster/env/oracle.hpp"
#include "diaster/rd/oracle.hpp"

namespace diaster::theory {

using env::EnumeratedMdp;
using env::Policy;
using nn::Matrix;
using nn::Vector;

struct TheoremReport {
  std::string tag;
  std::string instance;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  double tol = 0.0;
  bool pass = false;
};

/// Exact expectations for one (mdp, policy, psi) triple, from a single
/// full-horizon enumeration plus matrix propagation. All downstream checks
/// read from here; building throws EnumerationCapExceeded above the entry
/// budget.
struct ExactTables {
  int n_states = 0, n_actions = 0, horizon = 0;
  Matrix occupancy;             // (T+1) x S by forward matrix propagation
  std::vector<Matrix> rhat;     // [t](s,a): exact step-wise proxy reward; NaN unreachable
  std::vector<double> e_rsub;   // [k]: E[R_sub(tau_{0:k})]
  // conditionals given (s_t, a_t), accumulated at enumeration leaves:
  std::vector<Matrix> cond_w;            // [t](s,a): Pr(s_t = s, a_t = a)
  std::vector<Matrix> cond_rsub_next;    // [t](s,a): E[w * R_sub(tau_{0:t+1})]
  std::vector<Matrix> cond_rsub_full;    // [t](s,a): E[w * R_sub(tau_{0:T})]
  std::vector<Matrix> cond_return;       // [t](s,a): E[w * R_ep]
  std::vector<Matrix> cond_prefix_reward;  // [t](s,a): E[w * sum_{i<t} r_i]
  // [t](s,a): E[w * sum_{i>t} rhat_cond(s_i, a_i, i)], where rhat_cond is the
  // proxy reward whose prefix posterior is additionally conditioned on
  // (s_t, a_t). Accumulated over interior prefixes during the walk.
  std::vector<Matrix> cond_suffix_rhat;

  bool reachable(int s, int a, int t) const { return cond_w[t](s, a) > 0.0; }
};

ExactTables build_exact_tables(const EnumeratedMdp& mdp, const Policy& policy,
                               const rd::SubTrajModel& psi, long long max_entries = 1'000'000);

/// Theorem 1: E_rho[sum_{i=t}^{t+h-1} rhat(s_i,a_i)] equals
/// E[R_sub(tau_{0:t+h}) - R_sub(tau_{0:t})]. Stated for h >= 2; h = 1 holds
/// by the same telescoping and is run as an extension. Requires t + h <= T.
TheoremReport check_theorem1(const ExactTables& tables, const Policy& policy, int t, int h,
                             double tol);
TheoremReport check_theorem1(const EnumeratedMdp& mdp, const Policy& policy,
                             const rd::SubTrajModel& psi, int t, int h, double tol);

/// Theorem 3: conditional on (s_t, a_t), the expected suffix sum of the
/// proxy reward from t+1 equals E[R_sub(tau_{0:T}) - R_sub(tau_{0:t+1})].
/// The suffix proxy reward carries the (s_t, a_t)-conditioned prefix
/// posterior (the conditional form of the theorem-1 chain; with the
/// unconditional posterior the identity fails for arbitrary models, see the
/// negative analysis in the test suite). The left side contracts the
/// conditioned per-step numerators with the forward conditional state
/// distribution; the right side comes from leaf enumeration. Throws
/// UndefinedStateError for an unreachable (s, a, t).
TheoremReport check_theorem3(const ExactTables& tables, const EnumeratedMdp& mdp,
                             const Policy& policy, int s, int a, int t, double tol);
TheoremReport check_theorem3(const EnumeratedMdp& mdp, const Policy& policy,
                             const rd::SubTrajModel& psi, int s, int a, int t, double tol);

/// Lemma, argmax form: per-state argmax sets of Q and Q + delta(s) agree
/// exactly. delta broadcasts over actions.
bool check_lemma_argmax(const Matrix& q, const Vector& delta);

/// General form comparing two full tables; the negative fixtures feed a
/// Q-hat with an action-dependent offset here and expect false.
bool check_lemma_argmax(const Matrix& q, const Matrix& q_hat);

/// Lemma, policy-gradient form: the exact score-weighted expectation
/// E[grad log pi * Q] is unchanged when Q gains a state-dependent offset.
/// theta parameterizes a tabular softmax policy; the state distribution is
/// the horizon-averaged occupancy.
TheoremReport check_lemma_policy_gradient(const EnumeratedMdp& mdp, const Matrix& theta,
                                          const Matrix& q, const Vector& delta, double tol);

/// Q-hat offset: with the true return substituted for the full-trajectory
/// score (substitute_true_return), Qhat - Q is constant across actions at
/// every reachable (s, t); the reported lhs is the worst action-spread.
/// With the substitution off, a psi that violates R_sub(tau_{0:T}) = R_ep
/// produces an action-dependent spread (the shipped negative control).
/// Unreachable (s, t) pairs are skipped; the count lands in `instance`.
TheoremReport check_qhat_offset(const ExactTables& tables, const EnumeratedMdp& mdp,
                                const Policy& policy, double tol,
                                bool substitute_true_return = true);
TheoremReport check_qhat_offset(const EnumeratedMdp& mdp, const Policy& policy,
                                const rd::SubTrajModel& psi, double tol,
                                bool substitute_true_return = true);

/// Time-indexed policy evaluation on the hidden rewards:
/// Q_t(s,a) = r(s,a) + sum_{s'} P V_{t+1}(s'), undiscounted.
std::vector<Matrix> policy_q_values(const EnumeratedMdp& mdp, const Policy& policy);

}  // namespace diaster::theory
