#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "diaster/nn/adam.hpp"
#include "diaster/nn/autodiff.hpp"
#include "diaster/nn/checkpoint.hpp"
#include "diaster/nn/dense.hpp"
#include "diaster/nn/gru.hpp"

using namespace diaster;
using nn::Matrix;
using nn::Vector;

namespace {

// straight-line reference forward pass: plain loops, no shared code
std::vector<double> naive_dense_forward(const std::vector<Matrix>& weights,
                                        const std::vector<Matrix>& biases,
                                        const std::vector<double>& x, bool relu_hidden) {
  std::vector<double> h = x;
  for (size_t l = 0; l < weights.size(); ++l) {
    std::vector<double> next(weights[l].rows(), 0.0);
    for (Eigen::Index i = 0; i < weights[l].rows(); ++i) {
      double acc = biases[l](i, 0);
      for (Eigen::Index j = 0; j < weights[l].cols(); ++j) acc += weights[l](i, j) * h[j];
      next[i] = acc;
    }
    if (relu_hidden && l + 1 < weights.size())
      for (double& v : next) v = v > 0.0 ? v : 0.0;
    h = next;
  }
  return h;
}

double sigmoid_scalar(double v) { return 1.0 / (1.0 + std::exp(-v)); }

}  // namespace

TEST_CASE("dense forward: zero weights yield the final bias") {
  nn::Rng rng = nn::make_rng(1);
  nn::DenseNet net(3, {4}, 2, nn::Activation::kRelu, rng);
  for (nn::Param* p : net.params()) p->value.setZero();
  auto params = net.params();
  params.back()->value << 0.5, -1.25;  // output bias
  const Vector y = net.forward(Vector::Zero(3));
  CHECK(y(0) == doctest::Approx(0.5));
  CHECK(y(1) == doctest::Approx(-1.25));
}

TEST_CASE("dense forward: identity single layer passes nonnegative input through") {
  nn::Rng rng = nn::make_rng(2);
  nn::DenseNet net(3, {}, 3, nn::Activation::kRelu, rng);
  auto params = net.params();
  params[0]->value = Matrix::Identity(3, 3);
  params[1]->value.setZero();
  Vector x(3);
  x << 0.0, 1.5, 2.25;
  const Vector y = net.forward(x);
  for (int i = 0; i < 3; ++i) CHECK(y(i) == doctest::Approx(x(i)));
}

TEST_CASE("dense forward: seeded net matches the straight-line oracle") {
  nn::Rng rng = nn::make_rng(42);
  nn::DenseNet net(5, {7, 6}, 2, nn::Activation::kRelu, rng);
  Vector x(5);
  for (int i = 0; i < 5; ++i) x(i) = nn::uniform(rng, -1.0, 1.0);

  std::vector<Matrix> weights, biases;
  auto params = net.params();
  for (size_t i = 0; i < params.size(); i += 2) {
    weights.push_back(params[i]->value);
    biases.push_back(params[i + 1]->value);
  }
  const std::vector<double> expected =
      naive_dense_forward(weights, biases, {x(0), x(1), x(2), x(3), x(4)}, true);
  const Vector y = net.forward(x);
  REQUIRE(y.size() == 2);
  CHECK(y(0) == doctest::Approx(expected[0]).epsilon(1e-12));
  CHECK(y(1) == doctest::Approx(expected[1]).epsilon(1e-12));
}

TEST_CASE("dense forward rejects a dimension mismatch") {
  nn::Rng rng = nn::make_rng(3);
  nn::DenseNet net(3, {4}, 1, nn::Activation::kRelu, rng);
  CHECK_THROWS_AS(net.forward(Vector::Zero(4)), std::invalid_argument);
}

TEST_CASE("gru forward: empty sequence maps to empty output") {
  nn::Rng rng = nn::make_rng(4);
  nn::GruCell cell(3, 5, rng);
  CHECK(nn::gru_forward(cell, {}, Vector::Zero(5)).empty());
}

TEST_CASE("gru forward: zero parameters pin every hidden state at zero") {
  nn::Rng rng = nn::make_rng(5);
  nn::GruCell cell(3, 4, rng);
  for (nn::Param* p : cell.params()) p->value.setZero();
  std::vector<Vector> inputs;
  for (int i = 0; i < 6; ++i) {
    Vector x(3);
    for (int j = 0; j < 3; ++j) x(j) = nn::uniform(rng, -2.0, 2.0);
    inputs.push_back(x);
  }
  const auto hidden = nn::gru_forward(cell, inputs, Vector::Zero(4));
  REQUIRE(hidden.size() == 6);
  for (const Vector& h : hidden) CHECK(h.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("gru forward: two-step sequence matches the unrolled scalar oracle") {
  nn::Rng rng = nn::make_rng(6);
  const int I = 2, H = 3;
  nn::GruCell cell(I, H, rng);
  std::vector<Vector> inputs(2, Vector(I));
  inputs[0] << 0.4, -0.3;
  inputs[1] << -0.1, 0.8;

  auto params = cell.params();
  const Matrix &wz = params[0]->value, &wr = params[1]->value, &wh = params[2]->value;
  const Matrix &bz = params[3]->value, &br = params[4]->value, &bh = params[5]->value;

  std::vector<double> h(H, 0.0);
  for (const Vector& x : inputs) {
    std::vector<double> xh(I + H);
    for (int i = 0; i < I; ++i) xh[i] = x(i);
    for (int i = 0; i < H; ++i) xh[I + i] = h[i];
    std::vector<double> z(H), r(H), cand(H), next(H);
    for (int i = 0; i < H; ++i) {
      double az = bz(i, 0), ar = br(i, 0);
      for (int j = 0; j < I + H; ++j) {
        az += wz(i, j) * xh[j];
        ar += wr(i, j) * xh[j];
      }
      z[i] = sigmoid_scalar(az);
      r[i] = sigmoid_scalar(ar);
    }
    for (int i = 0; i < H; ++i) {
      double ah = bh(i, 0);
      for (int j = 0; j < I; ++j) ah += wh(i, j) * x(j);
      for (int j = 0; j < H; ++j) ah += wh(i, I + j) * (r[j] * h[j]);
      cand[i] = std::tanh(ah);
    }
    for (int i = 0; i < H; ++i) next[i] = (1.0 - z[i]) * cand[i] + z[i] * h[i];
    h = next;
  }

  const auto hidden = nn::gru_forward(cell, inputs, Vector::Zero(H));
  REQUIRE(hidden.size() == 2);
  for (int i = 0; i < H; ++i) CHECK(hidden[1](i) == doctest::Approx(h[i]).epsilon(1e-12));
}

TEST_CASE("backward: parameter-vector quadratic gives gradient (2, 4)") {
  nn::Param p("p", 2, 1);
  p.value << 1.0, 2.0;
  nn::LossGraph loss{p.value.squaredNorm(), [&p] { p.grad += 2.0 * p.value; }};
  nn::backward(loss);
  CHECK(p.grad(0, 0) == doctest::Approx(2.0));
  CHECK(p.grad(1, 0) == doctest::Approx(4.0));
}

TEST_CASE("backward: a detached loss is a construction error") {
  nn::LossGraph detached{3.0, nullptr};
  CHECK_THROWS_AS(nn::backward(detached), std::logic_error);
}

TEST_CASE("backward: gru final-state norm matches finite differences") {
  nn::Rng rng = nn::make_rng(7);
  const int I = 3, H = 4, T = 5;
  nn::GruCell cell(I, H, rng);
  std::vector<Vector> inputs(T, Vector(I));
  for (auto& x : inputs)
    for (int j = 0; j < I; ++j) x(j) = nn::uniform(rng, -1.0, 1.0);

  const auto make_loss = [&]() -> nn::LossGraph {
    const auto hidden = nn::gru_forward(cell, inputs, Vector::Zero(H));
    const double value = hidden.back().squaredNorm();
    return {value, [&] {
              std::vector<nn::GruCell::StepCache> caches(T);
              Vector h = Vector::Zero(H);
              for (int t = 0; t < T; ++t) h = cell.step(inputs[t], h, caches[t]);
              Vector dh = 2.0 * h;
              for (int t = T - 1; t >= 0; --t) dh = cell.backward_step(caches[t], dh);
            }};
  };
  CHECK(nn::grad_check(make_loss, cell.params()) < 1e-4);
}

TEST_CASE("adam: zero gradients leave parameters and moments untouched") {
  nn::Param p("p", 2, 2);
  p.value << 1.0, -2.0, 3.0, 0.5;
  const Matrix before = p.value;
  nn::Adam opt({&p});
  p.grad.setZero();
  CHECK(opt.step());
  CHECK((p.value - before).cwiseAbs().maxCoeff() == 0.0);
  CHECK(opt.first_moment(0).cwiseAbs().maxCoeff() == 0.0);
  CHECK(opt.second_moment(0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("adam: bias-corrected first step moves by about the learning rate") {
  nn::Param p("p", 1, 1);
  p.value(0, 0) = 1.0;
  nn::Adam opt({&p}, {.learning_rate = 3e-4});
  p.grad(0, 0) = 1.0;
  CHECK(opt.step());
  // first step: m_hat = v_hat = 1, so the update is lr / (1 + eps)
  CHECK(p.value(0, 0) == doctest::Approx(1.0 - 3e-4).epsilon(1e-7));
}

TEST_CASE("adam: non-finite gradients are flagged and skipped") {
  nn::Param p("p", 1, 1);
  p.value(0, 0) = 1.0;
  nn::Adam opt({&p});
  p.grad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(opt.step());
  CHECK(p.value(0, 0) == 1.0);
  CHECK(opt.step_count() == 0);
}

TEST_CASE("adam: drives p^2 below 1e-2 within 10000 steps at lr 3e-4") {
  nn::Param p("p", 1, 1);
  p.value(0, 0) = 1.0;
  nn::Adam opt({&p}, {.learning_rate = 3e-4});
  int steps = 0;
  while (std::abs(p.value(0, 0)) >= 1e-2 && steps < 10'000) {
    p.grad(0, 0) = 2.0 * p.value(0, 0);
    opt.step();
    ++steps;
  }
  CHECK(std::abs(p.value(0, 0)) < 1e-2);
  CHECK(steps < 10'000);
}

TEST_CASE("grad_check: scalar quadratic at p = 3") {
  nn::Param p("p", 1, 1);
  p.value(0, 0) = 3.0;
  const auto make_loss = [&]() -> nn::LossGraph {
    const double v = p.value(0, 0);
    return {v * v, [&p] { p.grad(0, 0) += 2.0 * p.value(0, 0); }};
  };
  CHECK(nn::grad_check(make_loss, {&p}) < 1e-6);
}

TEST_CASE("grad_check rejects eps outside (0, 1e-2]") {
  nn::Param p("p", 1, 1);
  const auto make_loss = [&]() -> nn::LossGraph { return {0.0, [] {}}; };
  CHECK_THROWS_AS(nn::grad_check(make_loss, {&p}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(nn::grad_check(make_loss, {&p}, 0.1), std::invalid_argument);
}

TEST_CASE("grad_check: dense least squares under tanh and under relu") {
  for (const auto act : {nn::Activation::kTanh, nn::Activation::kRelu}) {
    nn::Rng rng = nn::make_rng(8);
    nn::DenseNet net(3, {6, 6}, 2, act, rng);
    Vector x(3), y(2);
    for (int i = 0; i < 3; ++i) x(i) = nn::uniform(rng, -1.0, 1.0);
    for (int i = 0; i < 2; ++i) y(i) = nn::uniform(rng, -1.0, 1.0);
    const auto make_loss = [&]() -> nn::LossGraph {
      const Vector out = net.forward(x);
      return {(out - y).squaredNorm(), [&] {
                nn::DenseNet::Cache cache;
                const Vector out2 = net.forward(x, cache);
                net.backward(cache, 2.0 * (out2 - y));
              }};
    };
    CHECK(nn::grad_check(make_loss, net.params()) < 1e-4);
  }
}

TEST_CASE("grad_check: gru sequence loss over T = 8") {
  nn::Rng rng = nn::make_rng(9);
  const int I = 2, H = 5, T = 8;
  nn::GruCell cell(I, H, rng);
  std::vector<Vector> inputs(T, Vector(I));
  for (auto& x : inputs)
    for (int j = 0; j < I; ++j) x(j) = nn::uniform(rng, -1.0, 1.0);
  // loss: sum over steps of squared first hidden coordinate
  const auto make_loss = [&]() -> nn::LossGraph {
    const auto hidden = nn::gru_forward(cell, inputs, Vector::Zero(H));
    double v = 0.0;
    for (const auto& h : hidden) v += h(0) * h(0);
    return {v, [&] {
              std::vector<nn::GruCell::StepCache> caches(T);
              std::vector<Vector> hs(T);
              Vector h = Vector::Zero(H);
              for (int t = 0; t < T; ++t) {
                h = cell.step(inputs[t], h, caches[t]);
                hs[t] = h;
              }
              Vector dh = Vector::Zero(H);
              for (int t = T - 1; t >= 0; --t) {
                dh(0) += 2.0 * hs[t](0);
                dh = cell.backward_step(caches[t], dh);
              }
            }};
  };
  CHECK(nn::grad_check(make_loss, cell.params()) < 1e-4);
}

TEST_CASE("determinism: identical seeds give bit-identical forward outputs") {
  const auto build_and_run = [] {
    nn::Rng rng = nn::make_rng(123);
    nn::DenseNet net(4, {8}, 3, nn::Activation::kTanh, rng);
    Vector x(4);
    for (int i = 0; i < 4; ++i) x(i) = nn::uniform(rng, -1.0, 1.0);
    return Vector(net.forward(x));
  };
  const Vector a = build_and_run();
  const Vector b = build_and_run();
  for (int i = 0; i < 3; ++i) CHECK(a(i) == b(i));
}

TEST_CASE("checkpoint: save/load round-trips values and metadata exactly") {
  nn::Rng rng = nn::make_rng(10);
  nn::DenseNet net(3, {4}, 2, nn::Activation::kRelu, rng);
  const std::string path = (std::filesystem::temp_directory_path() / "nn_test.ckpt").string();
  nn::save_checkpoint(path, net.params(), {{"purpose", "test"}, {"train_step", "17"}});

  nn::Rng rng2 = nn::make_rng(11);
  nn::DenseNet other(3, {4}, 2, nn::Activation::kRelu, rng2);
  const nn::Checkpoint ckpt = nn::load_checkpoint(path);
  CHECK(ckpt.meta.at("purpose") == "test");
  CHECK(ckpt.meta.at("train_step") == "17");
  nn::apply_checkpoint(ckpt, other.params());
  auto pa = net.params(), pb = other.params();
  for (size_t i = 0; i < pa.size(); ++i)
    CHECK((pa[i]->value - pb[i]->value).cwiseAbs().maxCoeff() == 0.0);
  std::filesystem::remove(path);
}

TEST_CASE("checkpoint: shape mismatch is rejected") {
  nn::Rng rng = nn::make_rng(12);
  nn::DenseNet net(3, {4}, 2, nn::Activation::kRelu, rng);
  const std::string path = (std::filesystem::temp_directory_path() / "nn_test2.ckpt").string();
  nn::save_checkpoint(path, net.params());
  nn::Rng rng2 = nn::make_rng(13);
  nn::DenseNet wrong(3, {5}, 2, nn::Activation::kRelu, rng2);
  // names match layer-wise but shapes differ
  const nn::Checkpoint ckpt = nn::load_checkpoint(path);
  CHECK_THROWS_AS(nn::apply_checkpoint(ckpt, wrong.params()), std::runtime_error);
  std::filesystem::remove(path);
}
