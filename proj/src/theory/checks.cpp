#include "diaster/theory/checks.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace diaster::theory {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

TheoremReport make_report(std::string tag, double lhs, double rhs, double tol) {
  TheoremReport r;
  r.tag = std::move(tag);
  r.lhs = lhs;
  r.rhs = rhs;
  r.gap = std::abs(lhs - rhs);
  r.tol = tol;
  r.pass = r.gap <= tol;
  return r;
}
}  // namespace

ExactTables build_exact_tables(const EnumeratedMdp& mdp, const Policy& policy,
                               const rd::SubTrajModel& psi, long long max_entries) {
  mdp.validate();
  const long long required = env::count_trajectories(mdp, policy, mdp.horizon);
  if (required > max_entries) throw env::EnumerationCapExceeded(required, max_entries);

  const int S = mdp.n_states, A = mdp.n_actions, T = mdp.horizon;
  ExactTables tb;
  tb.n_states = S;
  tb.n_actions = A;
  tb.horizon = T;
  tb.occupancy.resize(T + 1, S);
  for (int t = 0; t <= T; ++t) tb.occupancy.row(t) = env::state_occupancy(mdp, policy, t).transpose();
  tb.e_rsub.assign(T + 1, 0.0);
  const auto zeros = [&] { return std::vector<Matrix>(T, Matrix::Zero(S, A)); };
  std::vector<Matrix> rhat_num = zeros();
  Matrix rho_dfs = Matrix::Zero(T, S);  // occupancy re-derived from the walk
  tb.cond_w = zeros();
  tb.cond_rsub_next = zeros();
  tb.cond_rsub_full = zeros();
  tb.cond_return = zeros();
  tb.cond_prefix_reward = zeros();
  tb.cond_suffix_rhat = zeros();

  // One walk over all prefixes. Path-indexed stacks carry the pairs, the
  // per-depth R_sub scores and the hidden-reward partial sums.
  std::vector<int> path_s(T), path_a(T);
  std::vector<double> path_score(T + 1, 0.0), path_rsum(T + 1, 0.0);
  std::vector<Vector> hidden(T + 1, Vector::Zero(psi.hidden_dim()));
  Vector x(psi.encoder().dim());

  const std::function<void(int, double)> walk = [&](int depth, double weight) {
    const double score_here = path_score[depth];
    tb.e_rsub[depth] += weight * score_here;
    if (depth == T) {
      const double rep = path_rsum[T];
      const double score_full = path_score[T];
      for (int t = 0; t < T; ++t) {
        const int s = path_s[t], a = path_a[t];
        tb.cond_w[t](s, a) += weight;
        tb.cond_rsub_next[t](s, a) += weight * path_score[t + 1];
        tb.cond_rsub_full[t](s, a) += weight * score_full;
        tb.cond_return[t](s, a) += weight * rep;
        tb.cond_prefix_reward[t](s, a) += weight * path_rsum[t];
      }
      return;
    }
    const int last_s = depth > 0 ? path_s[depth - 1] : -1;
    const int last_a = depth > 0 ? path_a[depth - 1] : -1;
    // policy-contracted one-step proxy-reward mass at this prefix; feeding
    // it back to every earlier (t, s_t, a_t) on the path accumulates the
    // conditioned suffix numerators
    double contrib = 0.0;
    for (int s = 0; s < S; ++s) {
      const double p =
          (depth == 0) ? mdp.initial_dist(s) : mdp.transition(mdp.row(last_s, last_a), s);
      if (p <= 0.0) continue;
      rho_dfs(depth, s) += weight * p;
      for (int a = 0; a < A; ++a) {
        psi.encoder().encode_into(s, a, x);
        hidden[depth + 1] = psi.cell().step(x, hidden[depth]);
        const double child_score = psi.readout(hidden[depth + 1]);
        rhat_num[depth](s, a) += weight * p * (child_score - score_here);
        contrib += p * policy(s, a) * (child_score - score_here);
        const double pa = policy(s, a);
        if (pa <= 0.0) continue;
        path_s[depth] = s;
        path_a[depth] = a;
        path_score[depth + 1] = child_score;
        path_rsum[depth + 1] = path_rsum[depth] + mdp.hidden_reward(s, a);
        walk(depth + 1, weight * p * pa);
      }
    }
    for (int t = 0; t < depth; ++t)
      tb.cond_suffix_rhat[t](path_s[t], path_a[t]) += weight * contrib;
  };
  walk(0, 1.0);

  // internal consistency: the walk must reproduce the propagated occupancy
  for (int t = 0; t < T; ++t)
    for (int s = 0; s < S; ++s)
      if (std::abs(rho_dfs(t, s) - tb.occupancy(t, s)) > 1e-10)
        throw std::logic_error("build_exact_tables: occupancy mismatch between walk and propagation");

  tb.rhat.assign(T, Matrix::Constant(S, A, kNan));
  for (int t = 0; t < T; ++t)
    for (int s = 0; s < S; ++s) {
      if (rho_dfs(t, s) <= 0.0) continue;
      for (int a = 0; a < A; ++a) tb.rhat[t](s, a) = rhat_num[t](s, a) / rho_dfs(t, s);
    }
  return tb;
}

TheoremReport check_theorem1(const ExactTables& tb, const Policy& policy, int t, int h, double tol) {
  if (h < 1 || t < 0 || t + h > tb.horizon)
    throw std::invalid_argument("check_theorem1: need t >= 0, h >= 1, t + h <= T");
  double lhs = 0.0;
  for (int i = t; i < t + h; ++i)
    for (int s = 0; s < tb.n_states; ++s) {
      const double occ = tb.occupancy(i, s);
      if (occ <= 0.0) continue;
      for (int a = 0; a < tb.n_actions; ++a) {
        const double pa = policy(s, a);
        if (pa > 0.0) lhs += occ * pa * tb.rhat[i](s, a);  // rhat defined whenever occ > 0
      }
    }
  const double rhs = tb.e_rsub[t + h] - tb.e_rsub[t];
  TheoremReport r = make_report("theorem1", lhs, rhs, tol);
  r.instance = "t=" + std::to_string(t) + " h=" + std::to_string(h);
  return r;
}

TheoremReport check_theorem1(const EnumeratedMdp& mdp, const Policy& policy,
                             const rd::SubTrajModel& psi, int t, int h, double tol) {
  return check_theorem1(build_exact_tables(mdp, policy, psi), policy, t, h, tol);
}

TheoremReport check_theorem3(const ExactTables& tb, const EnumeratedMdp& mdp, const Policy& policy,
                             int s, int a, int t, double tol) {
  if (t < 0 || t >= tb.horizon) throw std::invalid_argument("check_theorem3: t out of range");
  const double w = tb.cond_w[t](s, a);
  if (w <= 0.0)
    throw rd::UndefinedStateError("check_theorem3: (s=" + std::to_string(s) + ", a=" +
                                  std::to_string(a) + ") unreachable at step " + std::to_string(t));
  (void)mdp;
  (void)policy;
  const double lhs = tb.cond_suffix_rhat[t](s, a) / w;
  const double rhs = (tb.cond_rsub_full[t](s, a) - tb.cond_rsub_next[t](s, a)) / w;
  TheoremReport r = make_report("theorem3", lhs, rhs, tol);
  r.instance = "s=" + std::to_string(s) + " a=" + std::to_string(a) + " t=" + std::to_string(t);
  return r;
}

TheoremReport check_theorem3(const EnumeratedMdp& mdp, const Policy& policy,
                             const rd::SubTrajModel& psi, int s, int a, int t, double tol) {
  return check_theorem3(build_exact_tables(mdp, policy, psi), mdp, policy, s, a, t, tol);
}

bool check_lemma_argmax(const Matrix& q, const Matrix& q_hat) {
  if (q.rows() != q_hat.rows() || q.cols() != q_hat.cols())
    throw std::invalid_argument("check_lemma_argmax: table shapes differ");
  for (int s = 0; s < q.rows(); ++s) {
    const double max_q = q.row(s).maxCoeff();
    const double max_hat = q_hat.row(s).maxCoeff();
    for (int a = 0; a < q.cols(); ++a)
      if ((q(s, a) == max_q) != (q_hat(s, a) == max_hat)) return false;
  }
  return true;
}

bool check_lemma_argmax(const Matrix& q, const Vector& delta) {
  if (q.rows() != delta.size()) throw std::invalid_argument("check_lemma_argmax: one offset per state");
  Matrix shifted = q;
  for (int s = 0; s < q.rows(); ++s) shifted.row(s).array() += delta(s);
  return check_lemma_argmax(q, shifted);
}

TheoremReport check_lemma_policy_gradient(const EnumeratedMdp& mdp, const Matrix& theta,
                                          const Matrix& q, const Vector& delta, double tol) {
  const int S = mdp.n_states, A = mdp.n_actions;
  if (theta.rows() != S || theta.cols() != A || q.rows() != S || q.cols() != A ||
      delta.size() != S)
    throw std::invalid_argument("check_lemma_policy_gradient: shape mismatch");
  // tabular softmax policy
  Matrix pi(S, A);
  for (int s = 0; s < S; ++s) {
    const double mx = theta.row(s).maxCoeff();
    double z = 0.0;
    for (int a = 0; a < A; ++a) z += std::exp(theta(s, a) - mx);
    for (int a = 0; a < A; ++a) pi(s, a) = std::exp(theta(s, a) - mx) / z;
  }
  // horizon-averaged on-policy state distribution
  Vector d = Vector::Zero(S);
  for (int t = 0; t < mdp.horizon; ++t) d += env::state_occupancy(mdp, pi, t);
  d /= static_cast<double>(mdp.horizon);

  // E[grad_theta log pi(a|s) * value(s,a)]: component (s,b) is
  // d(s) sum_a pi(a|s) (1[a=b] - pi(b|s)) value(s,a)
  const auto score_expectation = [&](const std::function<double(int, int)>& value) {
    Matrix g = Matrix::Zero(S, A);
    for (int s = 0; s < S; ++s)
      for (int b = 0; b < A; ++b) {
        double acc = 0.0;
        for (int a = 0; a < A; ++a)
          acc += pi(s, a) * (((a == b) ? 1.0 : 0.0) - pi(s, b)) * value(s, a);
        g(s, b) = d(s) * acc;
      }
    return g;
  };
  const Matrix g_q = score_expectation([&](int s, int a) { return q(s, a); });
  const Matrix g_shifted = score_expectation([&](int s, int a) { return q(s, a) + delta(s); });
  const double gap = (g_q - g_shifted).cwiseAbs().maxCoeff();
  TheoremReport r = make_report("lemma_policy_gradient", gap, 0.0, tol);
  r.instance = "max-norm gradient gap";
  return r;
}

std::vector<Matrix> policy_q_values(const EnumeratedMdp& mdp, const Policy& policy) {
  const int S = mdp.n_states, A = mdp.n_actions, T = mdp.horizon;
  std::vector<Matrix> q(T, Matrix::Zero(S, A));
  Vector value = Vector::Zero(S);
  for (int t = T - 1; t >= 0; --t) {
    Vector next_value = Vector::Zero(S);
    for (int s = 0; s < S; ++s) {
      double v = 0.0;
      for (int a = 0; a < A; ++a) {
        q[t](s, a) = mdp.hidden_reward(s, a) + mdp.transition.row(mdp.row(s, a)).dot(value);
        v += policy(s, a) * q[t](s, a);
      }
      next_value(s) = v;
    }
    value = next_value;
  }
  return q;
}

TheoremReport check_qhat_offset(const ExactTables& tb, const EnumeratedMdp& mdp,
                                const Policy& policy, double tol, bool substitute_true_return) {
  const std::vector<Matrix> q = policy_q_values(mdp, policy);
  int skipped = 0;
  double worst = 0.0;
  for (int t = 0; t < tb.horizon; ++t) {
    for (int s = 0; s < tb.n_states; ++s) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      int defined = 0;
      for (int a = 0; a < tb.n_actions; ++a) {
        const double w = tb.cond_w[t](s, a);
        if (w <= 0.0) continue;
        const double full =
            substitute_true_return ? tb.cond_return[t](s, a) : tb.cond_rsub_full[t](s, a);
        const double qhat = tb.rhat[t](s, a) + (full - tb.cond_rsub_next[t](s, a)) / w;
        const double diff = qhat - q[t](s, a);
        lo = std::min(lo, diff);
        hi = std::max(hi, diff);
        ++defined;
      }
      if (defined >= 2) worst = std::max(worst, hi - lo);
      else ++skipped;
    }
  }
  TheoremReport r = make_report("qhat_offset", worst, 0.0, tol);
  r.instance = "worst action-spread of Qhat-Q; skipped " + std::to_string(skipped) +
               " unreachable (s,t) pairs";
  return r;
}

TheoremReport check_qhat_offset(const EnumeratedMdp& mdp, const Policy& policy,
                                const rd::SubTrajModel& psi, double tol,
                                bool substitute_true_return) {
  return check_qhat_offset(build_exact_tables(mdp, policy, psi), mdp, policy, tol,
                           substitute_true_return);
}

}  // namespace diaster::theory
