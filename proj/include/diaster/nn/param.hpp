#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace diaster::nn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// A named, shaped parameter with its gradient accumulator.
struct Param {
  std::string name;
  Matrix value;
  Matrix grad;

  Param() = default;
  Param(std::string n, Eigen::Index rows, Eigen::Index cols)
      : name(std::move(n)),
        value(Matrix::Zero(rows, cols)),
        grad(Matrix::Zero(rows, cols)) {}
};

using ParamList = std::vector<Param*>;

void zero_grads(const ParamList& params);
bool grads_finite(const ParamList& params);
long param_count(const ParamList& params);

/// Copies values from src to dst (same shapes, same order).
void copy_values(const ParamList& src, const ParamList& dst);

/// dst <- (1 - tau) * dst + tau * src, elementwise (target smoothing).
void blend_values(const ParamList& src, const ParamList& dst, double tau);

}  // namespace diaster::nn
