#include "diaster/rd/subtraj_model.hpp"

#include <stdexcept>

namespace diaster::rd {

SubTrajModel::SubTrajModel(const SaEncoder& enc, int hidden_dim, nn::Rng& rng,
                           const std::string& name_prefix)
    : enc_(enc),
      cell_(enc.dim(), hidden_dim, rng, name_prefix + ".gru"),
      readout_w_(name_prefix + ".out_w", hidden_dim, 1),
      readout_b_(name_prefix + ".out_b", 1, 1) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
  for (int i = 0; i < hidden_dim; ++i) readout_w_.value(i, 0) = nn::uniform(rng, -bound, bound);
}

double SubTrajModel::readout(const Vector& h) const {
  return readout_w_.value.col(0).dot(h) + readout_b_.value(0, 0);
}

void SubTrajModel::run(const Trajectory& tau, int begin, int end, SeqCache* cache, Vector& h) const {
  if (begin < 0 || end > tau.length() || begin > end)
    throw std::invalid_argument("SubTrajModel: segment out of range");
  h = Vector::Zero(cell_.hidden_dim());
  if (cache) {
    cache->begin = begin;
    cache->end = end;
    cache->steps.assign(end - begin, {});
    cache->hidden.assign(end - begin, Vector());
  }
  Vector x(enc_.dim());
  for (int i = begin; i < end; ++i) {
    enc_.encode_into(tau.states[i], tau.actions[i], x);
    if (cache) {
      h = cell_.step(x, h, cache->steps[i - begin]);
      cache->hidden[i - begin] = h;
    } else {
      h = cell_.step(x, h);
    }
  }
}

double SubTrajModel::segment_reward(const Trajectory& tau, int begin, int end) const {
  if (begin == end) return 0.0;  // empty sub-trajectory, by definition
  Vector h;
  run(tau, begin, end, nullptr, h);
  return readout(h);
}

double SubTrajModel::segment_reward(const Trajectory& tau, int begin, int end, SeqCache& cache) const {
  if (begin == end) {
    cache.begin = begin;
    cache.end = end;
    cache.steps.clear();
    cache.hidden.clear();
    return 0.0;
  }
  Vector h;
  run(tau, begin, end, &cache, h);
  return readout(h);
}

std::vector<double> SubTrajModel::prefix_rewards(const Trajectory& tau) const {
  std::vector<double> scores(tau.length() + 1, 0.0);
  Vector h = Vector::Zero(cell_.hidden_dim());
  Vector x(enc_.dim());
  for (int i = 0; i < tau.length(); ++i) {
    enc_.encode_into(tau.states[i], tau.actions[i], x);
    h = cell_.step(x, h);
    scores[i + 1] = readout(h);
  }
  return scores;
}

std::vector<double> SubTrajModel::prefix_rewards(const Trajectory& tau, SeqCache& cache) const {
  std::vector<double> scores(tau.length() + 1, 0.0);
  Vector h;
  run(tau, 0, tau.length(), &cache, h);
  for (int i = 0; i < tau.length(); ++i) scores[i + 1] = readout(cache.hidden[i]);
  return scores;
}

double SubTrajModel::pairs_reward(const std::vector<int>& states, const std::vector<int>& actions) const {
  if (states.size() != actions.size()) throw std::invalid_argument("pairs_reward: length mismatch");
  if (states.empty()) return 0.0;
  Vector h = Vector::Zero(cell_.hidden_dim());
  Vector x(enc_.dim());
  for (size_t i = 0; i < states.size(); ++i) {
    enc_.encode_into(states[i], actions[i], x);
    h = cell_.step(x, h);
  }
  return readout(h);
}

void SubTrajModel::backward_segment(const SeqCache& cache, double dscore) {
  const int n = static_cast<int>(cache.steps.size());
  if (n == 0) return;
  // read-out: score = w . h_final + b
  const Vector& h_final = cache.hidden[n - 1];
  readout_w_.grad.col(0) += dscore * h_final;
  readout_b_.grad(0, 0) += dscore;
  Vector dh = dscore * readout_w_.value.col(0);
  for (int i = n - 1; i >= 0; --i) dh = cell_.backward_step(cache.steps[i], dh);
}

void SubTrajModel::backward_prefixes(const SeqCache& cache, const std::vector<double>& dscores) {
  const int n = static_cast<int>(cache.steps.size());
  if (static_cast<int>(dscores.size()) != n)
    throw std::invalid_argument("backward_prefixes: one seed per step required");
  if (n == 0) return;
  Vector dh = Vector::Zero(cell_.hidden_dim());
  for (int i = n - 1; i >= 0; --i) {
    if (dscores[i] != 0.0) {
      readout_w_.grad.col(0) += dscores[i] * cache.hidden[i];
      readout_b_.grad(0, 0) += dscores[i];
      dh += dscores[i] * readout_w_.value.col(0);
    }
    dh = cell_.backward_step(cache.steps[i], dh);
  }
}

ParamList SubTrajModel::params() {
  ParamList out = cell_.params();
  out.push_back(&readout_w_);
  out.push_back(&readout_b_);
  return out;
}

}  // namespace diaster::rd
