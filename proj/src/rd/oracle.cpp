#include "diaster/rd/oracle.hpp"

namespace diaster::rd {

namespace {

using env::EnumeratedMdp;
using env::Policy;

struct OracleAccum {
  const EnumeratedMdp* mdp = nullptr;
  const Policy* policy = nullptr;
  const SubTrajModel* psi = nullptr;
  int target_s = 0, target_a = 0, target_t = 0;
  double numerator = 0.0;
  double denominator = 0.0;
};

// Walks all t-step prefixes (s_0,a_0,...,s_{t-1},a_{t-1}); at depth t the
// prefix weight is T_t and the last transition into the target state
// contributes weight * P(s|last).
void walk(OracleAccum& acc, int depth, double weight, int last_s, int last_a,
          const nn::Vector& hidden, double prefix_score) {
  const EnumeratedMdp& mdp = *acc.mdp;
  if (depth == acc.target_t) {
    const double into =
        (depth == 0) ? mdp.initial_dist(acc.target_s)
                     : mdp.transition(mdp.row(last_s, last_a), acc.target_s);
    if (into <= 0.0) return;
    nn::Vector x(acc.psi->encoder().dim());
    acc.psi->encoder().encode_into(acc.target_s, acc.target_a, x);
    const double extended = acc.psi->readout(acc.psi->cell().step(x, hidden));
    acc.numerator += weight * into * (extended - prefix_score);
    acc.denominator += weight * into;
    return;
  }
  nn::Vector x(acc.psi->encoder().dim());
  for (int s = 0; s < mdp.n_states; ++s) {
    const double p = (depth == 0) ? mdp.initial_dist(s) : mdp.transition(mdp.row(last_s, last_a), s);
    if (p <= 0.0) continue;
    for (int a = 0; a < mdp.n_actions; ++a) {
      const double pa = (*acc.policy)(s, a);
      if (pa <= 0.0) continue;
      acc.psi->encoder().encode_into(s, a, x);
      const nn::Vector h2 = acc.psi->cell().step(x, hidden);
      walk(acc, depth + 1, weight * p * pa, s, a, h2, acc.psi->readout(h2));
    }
  }
}

}  // namespace

double exact_step_reward_oracle(const EnumeratedMdp& mdp, const Policy& policy,
                                const SubTrajModel& psi, int s, int a, int t) {
  if (s < 0 || s >= mdp.n_states || a < 0 || a >= mdp.n_actions)
    throw std::invalid_argument("exact_step_reward_oracle: state or action out of range");
  if (t < 0 || t >= mdp.horizon) throw std::invalid_argument("exact_step_reward_oracle: t out of range");

  OracleAccum acc;
  acc.mdp = &mdp;
  acc.policy = &policy;
  acc.psi = &psi;
  acc.target_s = s;
  acc.target_a = a;
  acc.target_t = t;
  walk(acc, 0, 1.0, -1, -1, nn::Vector::Zero(psi.hidden_dim()), 0.0);
  if (acc.denominator <= 0.0)
    throw UndefinedStateError("exact_step_reward_oracle: state " + std::to_string(s) +
                              " has zero on-policy probability at step " + std::to_string(t));
  return acc.numerator / acc.denominator;
}

}  // namespace diaster::rd
