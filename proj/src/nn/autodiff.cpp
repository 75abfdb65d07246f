#include "diaster/nn/autodiff.hpp"

#include <cmath>
#include <stdexcept>

namespace diaster::nn {

void backward(LossGraph& graph) {
  if (!graph.backprop) throw std::logic_error("backward: loss is detached from all parameters");
  graph.backprop();
}

double grad_check(const std::function<LossGraph()>& make_loss, const ParamList& params,
                  double eps, double scale_floor) {
  if (!(eps > 0.0 && eps <= 1e-2)) throw std::invalid_argument("grad_check: eps must be in (0, 1e-2]");
  zero_grads(params);
  LossGraph g = make_loss();
  backward(g);
  std::vector<Matrix> analytic;
  analytic.reserve(params.size());
  for (const Param* p : params) analytic.push_back(p->grad);

  double worst = 0.0;
  for (size_t i = 0; i < params.size(); ++i) {
    Matrix& value = params[i]->value;
    for (Eigen::Index k = 0; k < value.size(); ++k) {
      const double saved = value(k);
      value(k) = saved + eps;
      const double up = make_loss().value;
      value(k) = saved - eps;
      const double down = make_loss().value;
      value(k) = saved;
      const double fd = (up - down) / (2.0 * eps);
      const double a = analytic[i](k);
      const double denom = std::max({std::abs(a), std::abs(fd), scale_floor});
      worst = std::max(worst, std::abs(a - fd) / denom);
    }
  }
  return worst;
}

}  // namespace diaster::nn
