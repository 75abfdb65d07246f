#include "diaster/rd/losses.hpp"

#include <stdexcept>

namespace diaster::rd {

namespace {
void check_cut(const Trajectory& tau, int cut) {
  if (cut < 0 || cut > tau.length())
    throw std::invalid_argument("return_loss: cut point " + std::to_string(cut) +
                                " outside [0, " + std::to_string(tau.length()) + "]");
}

void check_cuts(const Trajectory& tau, const std::vector<int>& cuts) {
  int prev = 0;
  for (int c : cuts) {
    if (c <= prev || c >= tau.length())
      throw std::invalid_argument("multicut_return_loss: cuts must be strictly increasing in (0, T)");
    prev = c;
  }
}
}  // namespace

double return_loss(const SubTrajModel& psi, const Trajectory& tau, int cut) {
  check_cut(tau, cut);
  const double front = psi.segment_reward(tau, 0, cut);
  const double back = psi.segment_reward(tau, cut, tau.length());
  const double residual = front + back - tau.episodic_return;
  return residual * residual;
}

double return_loss_grad(SubTrajModel& psi, const Trajectory& tau, int cut) {
  check_cut(tau, cut);
  SubTrajModel::SeqCache front_cache, back_cache;
  const double front = psi.segment_reward(tau, 0, cut, front_cache);
  const double back = psi.segment_reward(tau, cut, tau.length(), back_cache);
  const double residual = front + back - tau.episodic_return;
  psi.backward_segment(front_cache, 2.0 * residual);
  psi.backward_segment(back_cache, 2.0 * residual);
  return residual * residual;
}

double multicut_return_loss(const SubTrajModel& psi, const Trajectory& tau,
                            const std::vector<int>& cuts) {
  check_cuts(tau, cuts);
  double sum = 0.0;
  int begin = 0;
  for (size_t i = 0; i <= cuts.size(); ++i) {
    const int end = (i < cuts.size()) ? cuts[i] : tau.length();
    sum += psi.segment_reward(tau, begin, end);
    begin = end;
  }
  const double residual = sum - tau.episodic_return;
  return residual * residual;
}

double multicut_return_loss_grad(SubTrajModel& psi, const Trajectory& tau,
                                 const std::vector<int>& cuts) {
  check_cuts(tau, cuts);
  std::vector<SubTrajModel::SeqCache> caches(cuts.size() + 1);
  double sum = 0.0;
  int begin = 0;
  for (size_t i = 0; i <= cuts.size(); ++i) {
    const int end = (i < cuts.size()) ? cuts[i] : tau.length();
    sum += psi.segment_reward(tau, begin, end, caches[i]);
    begin = end;
  }
  const double residual = sum - tau.episodic_return;
  for (auto& cache : caches) psi.backward_segment(cache, 2.0 * residual);
  return residual * residual;
}

double step_loss(const StepRewardModel& phi, const SubTrajModel& psi, const Trajectory& tau, int t) {
  if (t < 0 || t >= tau.length()) throw std::invalid_argument("step_loss: step index out of range");
  const double target = psi.segment_reward(tau, 0, t + 1) - psi.segment_reward(tau, 0, t);
  const double pred = phi.reward(tau.states[t], tau.actions[t], t);
  const double residual = pred - target;
  return residual * residual;
}

double step_loss_grad(StepRewardModel& phi, const SubTrajModel& psi, const Trajectory& tau, int t) {
  if (t < 0 || t >= tau.length()) throw std::invalid_argument("step_loss: step index out of range");
  const double target = psi.segment_reward(tau, 0, t + 1) - psi.segment_reward(tau, 0, t);
  StepRewardModel::Cache cache;
  const double pred = phi.reward(tau.states[t], tau.actions[t], t, cache);
  const double residual = pred - target;
  phi.backward(cache, 2.0 * residual);
  return residual * residual;
}

double rudder_loss(const SubTrajModel& g, const Trajectory& tau) {
  if (tau.length() == 0) throw std::invalid_argument("rudder_loss: empty trajectory");
  const std::vector<double> pred = g.prefix_rewards(tau);
  double sum = 0.0;
  for (int t = 0; t < tau.length(); ++t) {
    const double r = pred[t + 1] - tau.episodic_return;
    sum += r * r;
  }
  return sum / tau.length();
}

double rudder_loss_grad(SubTrajModel& g, const Trajectory& tau) {
  if (tau.length() == 0) throw std::invalid_argument("rudder_loss: empty trajectory");
  SubTrajModel::SeqCache cache;
  const std::vector<double> pred = g.prefix_rewards(tau, cache);
  std::vector<double> seeds(tau.length(), 0.0);
  double sum = 0.0;
  for (int t = 0; t < tau.length(); ++t) {
    const double r = pred[t + 1] - tau.episodic_return;
    sum += r * r;
    seeds[t] = 2.0 * r / tau.length();
  }
  g.backward_prefixes(cache, seeds);
  return sum / tau.length();
}

double rrd_loss(const StepRewardModel& phi, const Trajectory& tau, const std::vector<int>& idx) {
  if (idx.empty()) throw std::invalid_argument("rrd_loss: empty subsequence");
  double mean = 0.0;
  for (int t : idx) {
    if (t < 0 || t >= tau.length()) throw std::invalid_argument("rrd_loss: index out of range");
    mean += phi.reward(tau.states[t], tau.actions[t], t);
  }
  mean /= static_cast<double>(idx.size());
  const double residual = mean - tau.episodic_return / tau.length();
  return residual * residual;
}

double rrd_loss_grad(StepRewardModel& phi, const Trajectory& tau, const std::vector<int>& idx) {
  if (idx.empty()) throw std::invalid_argument("rrd_loss: empty subsequence");
  std::vector<StepRewardModel::Cache> caches(idx.size());
  double mean = 0.0;
  for (size_t i = 0; i < idx.size(); ++i) {
    const int t = idx[i];
    if (t < 0 || t >= tau.length()) throw std::invalid_argument("rrd_loss: index out of range");
    mean += phi.reward(tau.states[t], tau.actions[t], t, caches[i]);
  }
  mean /= static_cast<double>(idx.size());
  const double residual = mean - tau.episodic_return / tau.length();
  const double seed = 2.0 * residual / static_cast<double>(idx.size());
  for (auto& cache : caches) phi.backward(cache, seed);
  return residual * residual;
}

nn::LossGraph make_return_loss(SubTrajModel& psi, const Trajectory& tau, int cut) {
  return {return_loss(psi, tau, cut), [&psi, &tau, cut] { return_loss_grad(psi, tau, cut); }};
}

nn::LossGraph make_multicut_loss(SubTrajModel& psi, const Trajectory& tau, std::vector<int> cuts) {
  const double value = multicut_return_loss(psi, tau, cuts);
  return {value, [&psi, &tau, cuts = std::move(cuts)] { multicut_return_loss_grad(psi, tau, cuts); }};
}

nn::LossGraph make_step_loss(StepRewardModel& phi, const SubTrajModel& psi, const Trajectory& tau,
                             int t) {
  return {step_loss(phi, psi, tau, t), [&phi, &psi, &tau, t] { step_loss_grad(phi, psi, tau, t); }};
}

nn::LossGraph make_rudder_loss(SubTrajModel& g, const Trajectory& tau) {
  return {rudder_loss(g, tau), [&g, &tau] { rudder_loss_grad(g, tau); }};
}

nn::LossGraph make_rrd_loss(StepRewardModel& phi, const Trajectory& tau, std::vector<int> idx) {
  const double value = rrd_loss(phi, tau, idx);
  return {value, [&phi, &tau, idx = std::move(idx)] { rrd_loss_grad(phi, tau, idx); }};
}

}  // namespace diaster::rd
