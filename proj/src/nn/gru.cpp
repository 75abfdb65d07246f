#include "diaster/nn/gru.hpp"

#include <cmath>
#include <stdexcept>

namespace diaster::nn {

namespace {
Vector sigmoid(const Vector& v) { return (1.0 / (1.0 + (-v.array()).exp())).matrix(); }

void init_fan_in(Matrix& w, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(w.cols()));
  for (Eigen::Index i = 0; i < w.rows(); ++i)
    for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = uniform(rng, -bound, bound);
}
}  // namespace

GruCell::GruCell(int input_dim, int hidden_dim, Rng& rng, const std::string& name_prefix)
    : w_update_(name_prefix + ".wz", hidden_dim, input_dim + hidden_dim),
      w_reset_(name_prefix + ".wr", hidden_dim, input_dim + hidden_dim),
      w_cand_(name_prefix + ".wh", hidden_dim, input_dim + hidden_dim),
      b_update_(name_prefix + ".bz", hidden_dim, 1),
      b_reset_(name_prefix + ".br", hidden_dim, 1),
      b_cand_(name_prefix + ".bh", hidden_dim, 1),
      input_dim_(input_dim),
      hidden_dim_(hidden_dim) {
  if (input_dim <= 0 || hidden_dim <= 0) throw std::invalid_argument("GruCell: dims must be positive");
  init_fan_in(w_update_.value, rng);
  init_fan_in(w_reset_.value, rng);
  init_fan_in(w_cand_.value, rng);
}

Vector GruCell::step(const Vector& x, const Vector& h_prev) const {
  StepCache scratch;
  return step(x, h_prev, scratch);
}

Vector GruCell::step(const Vector& x, const Vector& h_prev, StepCache& cache) const {
  if (x.size() != input_dim_) throw std::invalid_argument("GruCell::step: bad input length");
  if (h_prev.size() != hidden_dim_) throw std::invalid_argument("GruCell::step: bad state length");
  Vector xh(input_dim_ + hidden_dim_);
  xh << x, h_prev;
  cache.x = x;
  cache.h_prev = h_prev;
  cache.z = sigmoid(w_update_.value * xh + b_update_.value.col(0));
  cache.r = sigmoid(w_reset_.value * xh + b_reset_.value.col(0));
  Vector xrh(input_dim_ + hidden_dim_);
  xrh << x, cache.r.cwiseProduct(h_prev);
  cache.cand = (w_cand_.value * xrh + b_cand_.value.col(0)).array().tanh().matrix();
  return (1.0 - cache.z.array()).matrix().cwiseProduct(cache.cand) + cache.z.cwiseProduct(h_prev);
}

Vector GruCell::backward_step(const StepCache& cache, const Vector& dh, Vector* dx) {
  const int I = input_dim_, H = hidden_dim_;
  const Vector& z = cache.z;
  const Vector& r = cache.r;
  const Vector& c = cache.cand;
  const Vector& hp = cache.h_prev;

  // h' = (1-z).*c + z.*hp
  Vector dc = dh.cwiseProduct((1.0 - z.array()).matrix());
  Vector dz = dh.cwiseProduct(hp - c);
  Vector dh_prev = dh.cwiseProduct(z);

  // candidate: c = tanh(Wh [x; r.*hp] + bh)
  Vector dc_pre = dc.cwiseProduct((1.0 - c.array().square()).matrix());
  Vector xrh(I + H);
  xrh << cache.x, r.cwiseProduct(hp);
  w_cand_.grad.noalias() += dc_pre * xrh.transpose();
  b_cand_.grad.col(0) += dc_pre;
  Vector dxrh = w_cand_.value.transpose() * dc_pre;
  Vector drh = dxrh.tail(H);
  Vector dr = drh.cwiseProduct(hp);
  dh_prev += drh.cwiseProduct(r);

  // gates: sigmoid'(pre) = g.*(1-g) from the gate output
  Vector dz_pre = dz.cwiseProduct(z.cwiseProduct((1.0 - z.array()).matrix()));
  Vector dr_pre = dr.cwiseProduct(r.cwiseProduct((1.0 - r.array()).matrix()));
  Vector xh(I + H);
  xh << cache.x, hp;
  w_update_.grad.noalias() += dz_pre * xh.transpose();
  b_update_.grad.col(0) += dz_pre;
  w_reset_.grad.noalias() += dr_pre * xh.transpose();
  b_reset_.grad.col(0) += dr_pre;

  Vector dxh = w_update_.value.transpose() * dz_pre + w_reset_.value.transpose() * dr_pre;
  dh_prev += dxh.tail(H);
  if (dx) *dx = dxh.head(I) + dxrh.head(I);
  return dh_prev;
}

ParamList GruCell::params() {
  return {&w_update_, &w_reset_, &w_cand_, &b_update_, &b_reset_, &b_cand_};
}

std::vector<Vector> gru_forward(const GruCell& cell, const std::vector<Vector>& inputs,
                                const Vector& h0) {
  std::vector<Vector> hidden;
  hidden.reserve(inputs.size());
  Vector h = h0;
  for (const Vector& x : inputs) {
    h = cell.step(x, h);
    hidden.push_back(h);
  }
  return hidden;
}

}  // namespace diaster::nn
