#include "diaster/env/oracle.hpp"

#include <cmath>

namespace diaster::env {

namespace {

// Counts leaves of the trajectory tree: branches are (s0 with rho0>0, a with
// pi>0) then per step (s' with P>0, a' with pi>0). Saturates at a sentinel to
// avoid overflow.
constexpr long long kCountSaturation = (1LL << 62);

long long count_rec(const EnumeratedMdp& mdp, const Policy& pi, int depth, int upto, int last_s,
                    int last_a) {
  if (depth == upto) return 1;
  long long total = 0;
  for (int s = 0; s < mdp.n_states; ++s) {
    const double p = (depth == 0) ? mdp.initial_dist(s) : mdp.transition(mdp.row(last_s, last_a), s);
    if (p <= 0.0) continue;
    for (int a = 0; a < mdp.n_actions; ++a) {
      if (pi(s, a) <= 0.0) continue;
      total += count_rec(mdp, pi, depth + 1, upto, s, a);
      if (total >= kCountSaturation) return kCountSaturation;
    }
  }
  return total;
}

void enumerate_rec(const EnumeratedMdp& mdp, const Policy& pi, int depth, int upto, double weight,
                   WeightedTrajectory& partial, double reward_sum,
                   std::vector<WeightedTrajectory>& out) {
  if (depth == upto) {
    WeightedTrajectory wt = partial;
    wt.probability = weight;
    wt.hidden_return = reward_sum;
    out.push_back(std::move(wt));
    return;
  }
  const int last_s = partial.actions.empty() ? -1 : partial.states.back();
  const int last_a = partial.actions.empty() ? -1 : partial.actions.back();
  for (int s = 0; s < mdp.n_states; ++s) {
    const double p = (depth == 0) ? mdp.initial_dist(s) : mdp.transition(mdp.row(last_s, last_a), s);
    if (p <= 0.0) continue;
    for (int a = 0; a < mdp.n_actions; ++a) {
      if (pi(s, a) <= 0.0) continue;
      partial.states.push_back(s);
      partial.actions.push_back(a);
      enumerate_rec(mdp, pi, depth + 1, upto, weight * p * pi(s, a), partial,
                    reward_sum + mdp.hidden_reward(s, a), out);
      partial.states.pop_back();
      partial.actions.pop_back();
    }
  }
}

}  // namespace

long long count_trajectories(const EnumeratedMdp& mdp, const Policy& policy, int upto) {
  return count_rec(mdp, policy, 0, upto, -1, -1);
}

std::vector<WeightedTrajectory> enumerate_trajectories(const EnumeratedMdp& mdp, const Policy& policy,
                                                       int upto, long long max_entries) {
  mdp.validate();
  if (upto < 0 || upto > mdp.horizon) throw std::invalid_argument("enumerate_trajectories: bad length");
  const long long required = count_trajectories(mdp, policy, upto);
  if (required > max_entries) throw EnumerationCapExceeded(required, max_entries);
  std::vector<WeightedTrajectory> out;
  out.reserve(static_cast<size_t>(required));
  WeightedTrajectory partial;
  enumerate_rec(mdp, policy, 0, upto, 1.0, partial, 0.0, out);
  return out;
}

Vector state_occupancy(const EnumeratedMdp& mdp, const Policy& policy, int t) {
  if (t < 0 || t > mdp.horizon) throw std::invalid_argument("state_occupancy: t out of range");
  Vector rho = mdp.initial_dist;
  for (int step = 0; step < t; ++step) {
    Vector next = Vector::Zero(mdp.n_states);
    for (int s = 0; s < mdp.n_states; ++s) {
      if (rho(s) == 0.0) continue;
      for (int a = 0; a < mdp.n_actions; ++a) {
        const double w = rho(s) * policy(s, a);
        if (w == 0.0) continue;
        next += w * mdp.transition.row(mdp.row(s, a)).transpose();
      }
    }
    rho = next;
  }
  return rho;
}

double optimal_return(const EnumeratedMdp& mdp) {
  Vector value = Vector::Zero(mdp.n_states);
  for (int t = mdp.horizon - 1; t >= 0; --t) {
    Vector next = Vector::Zero(mdp.n_states);
    for (int s = 0; s < mdp.n_states; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < mdp.n_actions; ++a) {
        const double q = mdp.hidden_reward(s, a) + mdp.transition.row(mdp.row(s, a)).dot(value);
        best = std::max(best, q);
      }
      next(s) = best;
    }
    value = next;
  }
  return mdp.initial_dist.dot(value);
}

std::vector<std::vector<int>> optimal_policy(const EnumeratedMdp& mdp) {
  std::vector<std::vector<int>> actions(mdp.horizon, std::vector<int>(mdp.n_states, 0));
  Vector value = Vector::Zero(mdp.n_states);
  for (int t = mdp.horizon - 1; t >= 0; --t) {
    Vector next = Vector::Zero(mdp.n_states);
    for (int s = 0; s < mdp.n_states; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      int best_a = 0;
      for (int a = 0; a < mdp.n_actions; ++a) {
        const double q = mdp.hidden_reward(s, a) + mdp.transition.row(mdp.row(s, a)).dot(value);
        if (q > best) {
          best = q;
          best_a = a;
        }
      }
      next(s) = best;
      actions[t][s] = best_a;
    }
    value = next;
  }
  return actions;
}

double policy_expected_return(const EnumeratedMdp& mdp, const Policy& policy) {
  Vector rho = mdp.initial_dist;
  double total = 0.0;
  for (int t = 0; t < mdp.horizon; ++t) {
    Vector next = Vector::Zero(mdp.n_states);
    for (int s = 0; s < mdp.n_states; ++s) {
      if (rho(s) == 0.0) continue;
      for (int a = 0; a < mdp.n_actions; ++a) {
        const double w = rho(s) * policy(s, a);
        if (w == 0.0) continue;
        total += w * mdp.hidden_reward(s, a);
        next += w * mdp.transition.row(mdp.row(s, a)).transpose();
      }
    }
    rho = next;
  }
  return total;
}

}  // namespace diaster::env
