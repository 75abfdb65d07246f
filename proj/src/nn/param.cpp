#include "diaster/nn/param.hpp"

#include <cmath>
#include <stdexcept>

namespace diaster::nn {

void zero_grads(const ParamList& params) {
  for (Param* p : params) p->grad.setZero();
}

bool grads_finite(const ParamList& params) {
  for (const Param* p : params)
    if (!p->grad.allFinite()) return false;
  return true;
}

long param_count(const ParamList& params) {
  long n = 0;
  for (const Param* p : params) n += static_cast<long>(p->value.size());
  return n;
}

void copy_values(const ParamList& src, const ParamList& dst) {
  if (src.size() != dst.size()) throw std::invalid_argument("copy_values: list size mismatch");
  for (size_t i = 0; i < src.size(); ++i) {
    if (src[i]->value.rows() != dst[i]->value.rows() || src[i]->value.cols() != dst[i]->value.cols())
      throw std::invalid_argument("copy_values: shape mismatch for " + src[i]->name);
    dst[i]->value = src[i]->value;
  }
}

void blend_values(const ParamList& src, const ParamList& dst, double tau) {
  if (src.size() != dst.size()) throw std::invalid_argument("blend_values: list size mismatch");
  for (size_t i = 0; i < src.size(); ++i)
    dst[i]->value = (1.0 - tau) * dst[i]->value + tau * src[i]->value;
}

}  // namespace diaster::nn
