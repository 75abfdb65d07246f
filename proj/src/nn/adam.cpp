#include "diaster/nn/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace diaster::nn {

Adam::Adam(ParamList params, AdamConfig cfg) : params_(std::move(params)), cfg_(cfg) {
  if (cfg_.learning_rate <= 0.0) throw std::invalid_argument("Adam: learning rate must be positive");
  m_.reserve(params_.size());
  v_.reserve(params_.size());
  for (const Param* p : params_) {
    m_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
    v_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
  }
}

bool Adam::step() {
  if (!grads_finite(params_)) return false;
  ++t_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (size_t i = 0; i < params_.size(); ++i) {
    const Matrix& g = params_[i]->grad;
    m_[i] = cfg_.beta1 * m_[i] + (1.0 - cfg_.beta1) * g;
    v_[i] = cfg_.beta2 * v_[i] + (1.0 - cfg_.beta2) * g.cwiseProduct(g);
    Matrix m_hat = m_[i] / bc1;
    Matrix v_hat = v_[i] / bc2;
    params_[i]->value -=
        cfg_.learning_rate * m_hat.cwiseQuotient((v_hat.cwiseSqrt().array() + cfg_.epsilon).matrix());
  }
  return true;
}

}  // namespace diaster::nn
