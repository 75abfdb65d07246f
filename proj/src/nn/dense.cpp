#include "diaster/nn/dense.hpp"

#include <cmath>
#include <stdexcept>

namespace diaster::nn {

namespace {
void init_fan_in(Matrix& w, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(w.cols()));
  for (Eigen::Index i = 0; i < w.rows(); ++i)
    for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = uniform(rng, -bound, bound);
}
}  // namespace

Vector apply_activation(Activation act, const Vector& pre) {
  switch (act) {
    case Activation::kRelu:
      return pre.cwiseMax(0.0);
    case Activation::kTanh:
      return pre.array().tanh().matrix();
    case Activation::kIdentity:
      return pre;
  }
  throw std::logic_error("unknown activation");
}

DenseNet::DenseNet(int input_dim, const std::vector<int>& hidden, int output_dim,
                   Activation act, Rng& rng, const std::string& name_prefix)
    : act_(act), input_dim_(input_dim), output_dim_(output_dim) {
  if (input_dim <= 0 || output_dim <= 0) throw std::invalid_argument("DenseNet: dims must be positive");
  std::vector<int> dims;
  dims.push_back(input_dim);
  for (int h : hidden) {
    if (h <= 0) throw std::invalid_argument("DenseNet: hidden dims must be positive");
    dims.push_back(h);
  }
  dims.push_back(output_dim);
  for (size_t l = 0; l + 1 < dims.size(); ++l) {
    weights_.emplace_back(name_prefix + ".w" + std::to_string(l), dims[l + 1], dims[l]);
    biases_.emplace_back(name_prefix + ".b" + std::to_string(l), dims[l + 1], 1);
    init_fan_in(weights_.back().value, rng);
    const double bound = 1.0 / std::sqrt(static_cast<double>(dims[l]));
    for (Eigen::Index i = 0; i < dims[l + 1]; ++i) biases_.back().value(i, 0) = uniform(rng, -bound, bound);
  }
}

Vector DenseNet::forward(const Vector& x) const {
  if (x.size() != input_dim_)
    throw std::invalid_argument("DenseNet::forward: input has length " + std::to_string(x.size()) +
                                ", expected " + std::to_string(input_dim_));
  Vector h = x;
  const int L = n_layers();
  for (int l = 0; l < L; ++l) {
    Vector pre = weights_[l].value * h + biases_[l].value.col(0);
    h = (l + 1 < L) ? apply_activation(act_, pre) : pre;
  }
  return h;
}

Vector DenseNet::forward(const Vector& x, Cache& cache) const {
  if (x.size() != input_dim_)
    throw std::invalid_argument("DenseNet::forward: input has length " + std::to_string(x.size()) +
                                ", expected " + std::to_string(input_dim_));
  cache.input = x;
  cache.post.clear();
  Vector h = x;
  const int L = n_layers();
  for (int l = 0; l < L; ++l) {
    Vector pre = weights_[l].value * h + biases_[l].value.col(0);
    h = (l + 1 < L) ? apply_activation(act_, pre) : pre;
    cache.post.push_back(h);
  }
  return h;
}

Vector DenseNet::backward(const Cache& cache, const Vector& dy) {
  const int L = n_layers();
  if (static_cast<int>(cache.post.size()) != L) throw std::invalid_argument("DenseNet::backward: stale cache");
  if (dy.size() != output_dim_) throw std::invalid_argument("DenseNet::backward: bad dy length");
  Vector delta = dy;  // grad wrt layer pre-activation (output layer is linear)
  for (int l = L - 1; l >= 0; --l) {
    if (l + 1 < L) {
      // fold activation derivative; post-activation values suffice for relu/tanh
      const Vector& post = cache.post[l];
      switch (act_) {
        case Activation::kRelu:
          delta = delta.cwiseProduct((post.array() > 0.0).cast<double>().matrix());
          break;
        case Activation::kTanh:
          delta = delta.cwiseProduct((1.0 - post.array().square()).matrix());
          break;
        case Activation::kIdentity:
          break;
      }
    }
    const Vector& in = (l == 0) ? cache.input : cache.post[l - 1];
    weights_[l].grad.noalias() += delta * in.transpose();
    biases_[l].grad.col(0) += delta;
    delta = (weights_[l].value.transpose() * delta).eval();
  }
  return delta;
}

ParamList DenseNet::params() {
  ParamList out;
  for (size_t l = 0; l < weights_.size(); ++l) {
    out.push_back(&weights_[l]);
    out.push_back(&biases_[l]);
  }
  return out;
}

}  // namespace diaster::nn
