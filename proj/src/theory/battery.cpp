#include "diaster/theory/battery.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>

#include "diaster/parallel.hpp"

namespace diaster::theory {

namespace {

int fit_horizon(long long branching, long long budget, int hi) {
  int t = 1;
  long long size = branching;
  while (t < hi && size * branching <= budget) {
    size *= branching;
    ++t;
  }
  return std::max(2, t);
}

struct InstanceOutcome {
  std::vector<TheoremReport> reports;  // one per tag (worst case), plus extension rows
  long checks_run = 0;
  long failures = 0;
  double max_gap = 0.0;
};

void fold_worst(std::vector<TheoremReport>& worst, const TheoremReport& r) {
  for (auto& w : worst) {
    if (w.tag == r.tag) {
      if (r.gap > w.gap) w = r;
      return;
    }
  }
  worst.push_back(r);
}

InstanceOutcome run_instance(uint64_t instance_seed, double tol, long long budget) {
  nn::Rng rng = nn::make_rng(instance_seed);
  const int S = nn::uniform_int(rng, 2, 6);
  const int A = nn::uniform_int(rng, 2, 3);
  const int T = fit_horizon(static_cast<long long>(S) * A, budget, 6);

  const EnumeratedMdp mdp = random_dense_mdp(rng, S, A, T);
  const Policy policy = random_dense_policy(rng, S, A);
  const rd::SubTrajModel psi = random_psi(rng, S, A);
  const ExactTables tables = build_exact_tables(mdp, policy, psi, budget * 2);

  InstanceOutcome out;
  const auto record = [&](TheoremReport r) {
    ++out.checks_run;
    if (!r.pass) ++out.failures;
    out.max_gap = std::max(out.max_gap, r.gap);
    fold_worst(out.reports, r);
  };

  // theorem 1 over all (t, h); h = 1 is the telescoping extension
  for (int t = 0; t + 1 <= T; ++t)
    for (int h = 1; t + h <= T; ++h) {
      TheoremReport r = check_theorem1(tables, policy, t, h, tol);
      if (h == 1) r.tag = "theorem1_extension_h1";
      record(r);
    }

  // theorem 3 over every reachable (s, a, t)
  for (int t = 0; t < T; ++t)
    for (int s = 0; s < S; ++s)
      for (int a = 0; a < A; ++a)
        if (tables.reachable(s, a, t)) record(check_theorem3(tables, mdp, policy, s, a, t, tol));

  // proxy-reward table vs the standalone oracle (two routes, same value)
  {
    TheoremReport r;
    r.tag = "rhat_oracle_crosscheck";
    r.tol = tol;
    double worst = 0.0;
    for (int t = 0; t < std::min(T, 3); ++t) {
      const int s = nn::uniform_int(rng, 0, S - 1);
      const int a = nn::uniform_int(rng, 0, A - 1);
      if (tables.occupancy(t, s) <= 0.0) continue;
      const double direct = rd::exact_step_reward_oracle(mdp, policy, psi, s, a, t);
      worst = std::max(worst, std::abs(direct - tables.rhat[t](s, a)));
    }
    r.lhs = worst;
    r.gap = worst;
    r.pass = worst <= tol;
    r.instance = "sampled (s,a,t) entries";
    record(r);
  }

  // lemma checks on random tables tied to this instance
  {
    Matrix q(S, A);
    for (int s = 0; s < S; ++s)
      for (int a = 0; a < A; ++a) q(s, a) = nn::uniform(rng, -2.0, 2.0);
    Vector delta(S);
    for (int s = 0; s < S; ++s) delta(s) = nn::uniform(rng, -3.0, 3.0);
    TheoremReport r;
    r.tag = "lemma_argmax";
    r.tol = tol;
    r.pass = check_lemma_argmax(q, delta);
    r.gap = r.pass ? 0.0 : 1.0;
    r.instance = "random Q with state offset";
    record(r);

    Matrix theta(S, A);
    for (int s = 0; s < S; ++s)
      for (int a = 0; a < A; ++a) theta(s, a) = nn::uniform(rng, -1.5, 1.5);
    record(check_lemma_policy_gradient(mdp, theta, q, delta, tol));
  }

  record(check_qhat_offset(tables, mdp, policy, tol, true));
  return out;
}

}  // namespace

EnumeratedMdp random_dense_mdp(nn::Rng& rng, int n_states, int n_actions, int horizon) {
  EnumeratedMdp mdp;
  mdp.n_states = n_states;
  mdp.n_actions = n_actions;
  mdp.horizon = horizon;
  mdp.transition.resize(static_cast<Eigen::Index>(n_states) * n_actions, n_states);
  mdp.hidden_reward.resize(n_states, n_actions);
  mdp.initial_dist.resize(n_states);
  // strictly positive rows keep every (s, a, t) reachable
  for (Eigen::Index r = 0; r < mdp.transition.rows(); ++r) {
    double sum = 0.0;
    for (int s2 = 0; s2 < n_states; ++s2) {
      mdp.transition(r, s2) = 0.05 + nn::uniform(rng);
      sum += mdp.transition(r, s2);
    }
    mdp.transition.row(r) /= sum;
    mdp.transition.row(r) /= mdp.transition.row(r).sum();  // exact renormalization
  }
  double sum = 0.0;
  for (int s = 0; s < n_states; ++s) {
    mdp.initial_dist(s) = 0.05 + nn::uniform(rng);
    sum += mdp.initial_dist(s);
  }
  mdp.initial_dist /= sum;
  mdp.initial_dist /= mdp.initial_dist.sum();
  for (int s = 0; s < n_states; ++s)
    for (int a = 0; a < n_actions; ++a) mdp.hidden_reward(s, a) = nn::uniform(rng, -1.0, 1.0);
  mdp.validate();
  return mdp;
}

Policy random_dense_policy(nn::Rng& rng, int n_states, int n_actions) {
  Policy pi(n_states, n_actions);
  for (int s = 0; s < n_states; ++s) {
    double sum = 0.0;
    for (int a = 0; a < n_actions; ++a) {
      pi(s, a) = 0.1 + nn::uniform(rng);
      sum += pi(s, a);
    }
    pi.row(s) /= sum;
    pi.row(s) /= pi.row(s).sum();
  }
  return pi;
}

rd::SubTrajModel random_psi(nn::Rng& rng, int n_states, int n_actions, int hidden_dim) {
  rd::SaEncoder enc(n_states, n_actions);
  rd::SubTrajModel psi(enc, hidden_dim, rng);
  // widen the default init so R_sub varies at O(1)
  for (nn::Param* p : psi.params())
    for (Eigen::Index k = 0; k < p->value.size(); ++k) p->value(k) = nn::uniform(rng, -0.8, 0.8);
  return psi;
}

bool negative_control_argmax() {
  // action-dependent offset flips the argmax at state 0
  Matrix q(2, 2);
  q << 1.0, 0.0, 0.3, 0.7;
  Matrix offset(2, 2);
  offset << 0.0, 2.0, 0.0, 0.0;  // favors action 1 at state 0 only
  return !check_lemma_argmax(q, Matrix(q + offset));
}

bool negative_control_qhat(double tol) {
  // a psi with no tie to R_ep, checked without the true-return substitution,
  // must show an action-dependent spread
  nn::Rng rng = nn::make_rng(0xD1A57E5ULL);
  const EnumeratedMdp mdp = random_dense_mdp(rng, 3, 2, 3);
  const Policy policy = random_dense_policy(rng, 3, 2);
  const rd::SubTrajModel psi = random_psi(rng, 3, 2);
  const TheoremReport r = check_qhat_offset(mdp, policy, psi, tol, false);
  return !r.pass;
}

BatteryResult run_theorem_battery(const BatteryConfig& cfg) {
  BatteryResult result;
  result.instances = cfg.instances;
  std::vector<InstanceOutcome> outcomes(cfg.instances);
  parallel_for(cfg.instances, cfg.parallel, [&](long i) {
    outcomes[i] = run_instance(nn::derive_seed(cfg.seed, "instance", static_cast<uint64_t>(i)),
                               cfg.tol, cfg.entry_budget);
  });
  for (int i = 0; i < cfg.instances; ++i) {
    result.checks_run += outcomes[i].checks_run;
    result.failures += outcomes[i].failures;
    result.max_gap = std::max(result.max_gap, outcomes[i].max_gap);
  }
  result.negative_controls_ok = negative_control_argmax() && negative_control_qhat(cfg.tol);

  if (cfg.report_path) {
    std::ofstream out(*cfg.report_path);
    if (!out) throw std::runtime_error("battery: cannot write report to " + *cfg.report_path);
    nlohmann::json header;
    header["schema"] = "diaster.theory.v1";
    header["instances"] = cfg.instances;
    header["tol"] = cfg.tol;
    header["seed"] = cfg.seed;
    out << header.dump() << "\n";
    for (int i = 0; i < cfg.instances; ++i) {
      const uint64_t iseed = nn::derive_seed(cfg.seed, "instance", static_cast<uint64_t>(i));
      for (const TheoremReport& r : outcomes[i].reports) {
        nlohmann::json j;
        j["check"] = r.tag;
        j["instance_seed"] = iseed;
        j["case"] = r.instance;
        j["lhs"] = r.lhs;
        j["rhs"] = r.rhs;
        j["gap"] = r.gap;
        j["pass"] = r.pass;
        out << j.dump() << "\n";
        result.reports.push_back(r);
      }
    }
    nlohmann::json controls;
    controls["check"] = "negative_controls";
    controls["pass"] = result.negative_controls_ok;
    controls["case"] = "argmax action-dependent offset; return-inequivalent psi";
    out << controls.dump() << "\n";
  } else {
    for (const auto& o : outcomes)
      result.reports.insert(result.reports.end(), o.reports.begin(), o.reports.end());
  }
  return result;
}

}  // namespace diaster::theory
