#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "diaster/env/env.hpp"
#include "diaster/nn/adam.hpp"
#include "diaster/rd/cuts.hpp"
#include "diaster/rd/losses.hpp"
#include "diaster/rd/methods.hpp"
#include "diaster/rd/oracle.hpp"
#include "diaster/rd/train_kernels.hpp"

using namespace diaster;
using env::EnumeratedMdp;
using env::Trajectory;
using nn::Matrix;
using nn::Vector;
using rd::SaEncoder;
using rd::SubTrajModel;
using rd::StepRewardModel;

namespace {

Trajectory random_trajectory(nn::Rng& rng, int n_states, int n_actions, int len,
                             double ret = 0.0) {
  Trajectory tau;
  tau.states.resize(len + 1);
  tau.actions.resize(len);
  for (int i = 0; i <= len; ++i) tau.states[i] = nn::uniform_int(rng, 0, n_states - 1);
  for (int i = 0; i < len; ++i) tau.actions[i] = nn::uniform_int(rng, 0, n_actions - 1);
  tau.episodic_return = ret;
  return tau;
}

void zero_params(nn::ParamList params) {
  for (nn::Param* p : params) p->value.setZero();
}

}  // namespace

TEST_CASE("subtraj_reward: the empty segment scores exactly 0 for any parameters") {
  nn::Rng rng = nn::make_rng(1);
  const SaEncoder enc(4, 2);
  for (int rep = 0; rep < 10; ++rep) {
    SubTrajModel psi(enc, 6, rng);
    const Trajectory tau = random_trajectory(rng, 4, 2, 5);
    for (int c = 0; c <= 5; ++c) CHECK(psi.segment_reward(tau, c, c) == 0.0);
  }
}

TEST_CASE("subtraj_reward: zero parameters reduce to the read-out bias") {
  nn::Rng rng = nn::make_rng(2);
  const SaEncoder enc(3, 2);
  SubTrajModel psi(enc, 5, rng);
  zero_params(psi.params());
  const Trajectory tau = random_trajectory(rng, 3, 2, 4);
  CHECK(psi.segment_reward(tau, 0, 4) == 0.0);
  psi.params().back()->value(0, 0) = 0.75;  // read-out bias
  CHECK(psi.segment_reward(tau, 0, 4) == doctest::Approx(0.75));
  CHECK(psi.segment_reward(tau, 1, 3) == doctest::Approx(0.75));
  CHECK(psi.segment_reward(tau, 2, 2) == 0.0);  // empty still bypasses the bias
}

TEST_CASE("return loss: zero model against R_ep = 2 scores 4") {
  nn::Rng rng = nn::make_rng(3);
  const SaEncoder enc(3, 2);
  SubTrajModel psi(enc, 5, rng);
  zero_params(psi.params());
  Trajectory tau = random_trajectory(rng, 3, 2, 4, /*ret*/ 2.0);
  CHECK(rd::return_loss(psi, tau, 2) == doctest::Approx(4.0));
}

TEST_CASE("return loss: boundary cuts use the empty-segment rule") {
  nn::Rng rng = nn::make_rng(4);
  const SaEncoder enc(3, 2);
  SubTrajModel psi(enc, 5, rng);
  Trajectory tau = random_trajectory(rng, 3, 2, 4, 1.5);
  const double full = psi.segment_reward(tau, 0, 4);
  // c = T: the latter segment is empty and contributes exactly 0
  CHECK(rd::return_loss(psi, tau, 4) ==
        doctest::Approx((full - 1.5) * (full - 1.5)).epsilon(1e-12));
  // c = 0: the former segment is empty
  CHECK(rd::return_loss(psi, tau, 0) ==
        doctest::Approx((full - 1.5) * (full - 1.5)).epsilon(1e-12));
  CHECK_THROWS_AS(rd::return_loss(psi, tau, 5), std::invalid_argument);
  CHECK_THROWS_AS(rd::return_loss(psi, tau, -1), std::invalid_argument);
}

TEST_CASE("multicut: m=0 regresses the whole-trajectory score on R_ep") {
  nn::Rng rng = nn::make_rng(5);
  const SaEncoder enc(3, 2);
  SubTrajModel psi(enc, 5, rng);
  Trajectory tau = random_trajectory(rng, 3, 2, 5, -0.5);
  const double full = psi.segment_reward(tau, 0, 5);
  CHECK(rd::multicut_return_loss(psi, tau, {}) ==
        doctest::Approx((full + 0.5) * (full + 0.5)).epsilon(1e-12));
}

TEST_CASE("multicut: m=1 equals the two-segment loss bitwise") {
  nn::Rng rng = nn::make_rng(6);
  const SaEncoder enc(4, 3);
  for (int rep = 0; rep < 50; ++rep) {
    SubTrajModel psi(enc, 6, rng);
    Trajectory tau = random_trajectory(rng, 4, 3, 2 + rep % 7, nn::uniform(rng, -2.0, 2.0));
    const int c = nn::uniform_int(rng, 1, tau.length() - 1);
    CHECK(rd::multicut_return_loss(psi, tau, {c}) == rd::return_loss(psi, tau, c));
  }
}

TEST_CASE("multicut: m=T-1 single-step segments match the hand-computed residual") {
  nn::Rng rng = nn::make_rng(7);
  const SaEncoder enc(3, 2);
  SubTrajModel psi(enc, 5, rng);
  Trajectory tau = random_trajectory(rng, 3, 2, 3, 0.8);
  // step-wise residual, assembled by hand from single-step segment scores
  const double r0 = psi.segment_reward(tau, 0, 1);
  const double r1 = psi.segment_reward(tau, 1, 2);
  const double r2 = psi.segment_reward(tau, 2, 3);
  const double residual = r0 + r1 + r2 - tau.episodic_return;
  CHECK(rd::multicut_return_loss(psi, tau, {1, 2}) ==
        doctest::Approx(residual * residual).epsilon(1e-12));
}

TEST_CASE("multicut rejects unsorted or out-of-range cut lists") {
  nn::Rng rng = nn::make_rng(8);
  const SaEncoder enc(3, 2);
  SubTrajModel psi(enc, 5, rng);
  Trajectory tau = random_trajectory(rng, 3, 2, 5);
  CHECK_THROWS_AS(rd::multicut_return_loss(psi, tau, {3, 2}), std::invalid_argument);
  CHECK_THROWS_AS(rd::multicut_return_loss(psi, tau, {0, 2}), std::invalid_argument);
  CHECK_THROWS_AS(rd::multicut_return_loss(psi, tau, {2, 5}), std::invalid_argument);
  CHECK_THROWS_AS(rd::multicut_return_loss(psi, tau, {2, 2}), std::invalid_argument);
}

TEST_CASE("step loss: the t=0 target is the first prefix score") {
  nn::Rng rng = nn::make_rng(9);
  const SaEncoder enc(3, 2);
  SubTrajModel psi(enc, 5, rng);
  StepRewardModel phi(enc, {8}, rng);
  Trajectory tau = random_trajectory(rng, 3, 2, 4);
  const double target = psi.segment_reward(tau, 0, 1);  // R_sub(tau_{0:1}) - 0
  const double pred = phi.reward(tau.states[0], tau.actions[0], 0);
  CHECK(rd::step_loss(phi, psi, tau, 0) ==
        doctest::Approx((pred - target) * (pred - target)).epsilon(1e-12));
}

TEST_CASE("step loss: zero when the prediction equals the target") {
  nn::Rng rng = nn::make_rng(10);
  const SaEncoder enc(3, 2);
  SubTrajModel psi(enc, 5, rng);
  StepRewardModel phi(enc, {8}, rng);
  zero_params(psi.params());
  zero_params(phi.params());
  Trajectory tau = random_trajectory(rng, 3, 2, 4);
  for (int t = 0; t < 4; ++t) CHECK(rd::step_loss(phi, psi, tau, t) == 0.0);
}

TEST_CASE("step targets telescope to the full-trajectory score") {
  nn::Rng rng = nn::make_rng(11);
  const SaEncoder enc(4, 2);
  for (int rep = 0; rep < 100; ++rep) {
    SubTrajModel psi(enc, 6, rng);
    Trajectory tau = random_trajectory(rng, 4, 2, 2 + rep % 9);
    const std::vector<double> prefix = psi.prefix_rewards(tau);
    double sum = 0.0;
    for (int t = 0; t < tau.length(); ++t) sum += prefix[t + 1] - prefix[t];
    CHECK(std::abs(sum - psi.segment_reward(tau, 0, tau.length())) <= 1e-9);
  }
}

TEST_CASE("step loss trains phi only: psi gradients stay zero") {
  nn::Rng rng = nn::make_rng(12);
  const SaEncoder enc(3, 2);
  SubTrajModel psi(enc, 5, rng);
  StepRewardModel phi(enc, {8}, rng);
  Trajectory tau = random_trajectory(rng, 3, 2, 4, 1.0);
  nn::zero_grads(psi.params());
  nn::zero_grads(phi.params());
  rd::step_loss_grad(phi, psi, tau, 2);
  for (nn::Param* p : psi.params()) CHECK(p->grad.cwiseAbs().maxCoeff() == 0.0);
  bool phi_has_grad = false;
  for (nn::Param* p : phi.params())
    if (p->grad.cwiseAbs().maxCoeff() > 0.0) phi_has_grad = true;
  CHECK(phi_has_grad);
}

TEST_CASE("relabel: ircr normalizes by the buffer extremes") {
  rd::MethodModels models;
  models.method = rd::Method::kIrcr;
  nn::Rng rng = nn::make_rng(13);
  Trajectory tau = random_trajectory(rng, 3, 2, 4, 1.0);
  const rd::BufferStats stats{0.0, 1.0, true};
  for (double r : rd::relabel(models, tau, stats)) CHECK(r == doctest::Approx(1.0));

  // defined fallback: empty stats or r_max == r_min relabel to zero
  for (double r : rd::relabel(models, tau, rd::BufferStats{})) CHECK(r == 0.0);
  for (double r : rd::relabel(models, tau, rd::BufferStats{1.0, 1.0, true})) CHECK(r == 0.0);
}

TEST_CASE("relabel: diaster_no_step rewards sum to the full-trajectory score") {
  nn::Rng rng = nn::make_rng(14);
  const SaEncoder enc(4, 2);
  rd::MethodModels models;
  models.method = rd::Method::kDiasterNoStep;
  models.psi = std::make_unique<SubTrajModel>(enc, 6, rng);
  Trajectory tau = random_trajectory(rng, 4, 2, 6, 0.5);
  const auto rewards = rd::relabel(models, tau, {});
  double sum = 0.0;
  for (double r : rewards) sum += r;
  CHECK(std::abs(sum - models.psi->segment_reward(tau, 0, 6)) <= 1e-9);
}

TEST_CASE("relabel: a constant rudder predictor assigns zero everywhere") {
  nn::Rng rng = nn::make_rng(15);
  const SaEncoder enc(3, 2);
  rd::MethodModels models;
  models.method = rd::Method::kRudderLite;
  models.rudder = std::make_unique<rd::RudderModel>(enc, 5, rng);
  zero_params(models.rudder->params());
  models.rudder->params().back()->value(0, 0) = 3.25;  // g == 3.25 everywhere
  Trajectory tau = random_trajectory(rng, 3, 2, 5, 1.0);
  for (double r : rd::relabel(models, tau, {})) CHECK(r == doctest::Approx(0.0));
}

TEST_CASE("relabel: the episodic baseline pays R_ep at the final step only") {
  rd::MethodModels models;
  models.method = rd::Method::kEpisodicMc;
  nn::Rng rng = nn::make_rng(16);
  Trajectory tau = random_trajectory(rng, 3, 2, 5, 2.5);
  const auto rewards = rd::relabel(models, tau, {});
  for (int t = 0; t < 4; ++t) CHECK(rewards[t] == 0.0);
  CHECK(rewards[4] == 2.5);
}

TEST_CASE("rrd loss with the full index set is whole-trajectory mean regression") {
  nn::Rng rng = nn::make_rng(17);
  const SaEncoder enc(3, 2);
  StepRewardModel phi(enc, {8}, rng);
  Trajectory tau = random_trajectory(rng, 3, 2, 5, 1.25);
  std::vector<int> all_idx{0, 1, 2, 3, 4};
  double mean = 0.0;
  for (int t = 0; t < 5; ++t) mean += phi.reward(tau.states[t], tau.actions[t], t);
  mean /= 5.0;
  const double expect = (mean - 1.25 / 5.0) * (mean - 1.25 / 5.0);
  CHECK(rd::rrd_loss(phi, tau, all_idx) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("exact oracle: a deterministic prefix gives the plain difference") {
  // chain with one path: prefix reaching (s=2, t=2) is unique
  env::EnvInstance chain = env::EnvInstance::chain(5);
  const EnumeratedMdp& mdp = chain.underlying();
  const env::Policy always_right = env::deterministic_policy(5, 2, {1, 1, 1, 1, 1});
  nn::Rng rng = nn::make_rng(18);
  const SaEncoder enc(5, 2);
  SubTrajModel psi(enc, 6, rng);

  Trajectory prefix;
  prefix.states = {0, 1, 2};
  prefix.actions = {1, 1};
  const double base = psi.segment_reward(prefix, 0, 2);
  Trajectory extended;
  extended.states = {0, 1, 2, 3};
  extended.actions = {1, 1, 1};
  const double ext = psi.segment_reward(extended, 0, 3);
  CHECK(rd::exact_step_reward_oracle(mdp, always_right, psi, 2, 1, 2) ==
        doctest::Approx(ext - base).epsilon(1e-12));
}

TEST_CASE("exact oracle: t = 0 needs no enumeration") {
  env::EnvInstance chain = env::EnvInstance::chain(4);
  const env::Policy pi = env::uniform_policy(4, 2);
  nn::Rng rng = nn::make_rng(19);
  const SaEncoder enc(4, 2);
  SubTrajModel psi(enc, 6, rng);
  Trajectory one;
  one.states = {0, -1};
  one.states.resize(2);
  one.states[0] = 0;
  one.states[1] = 0;  // unused
  one.actions = {1};
  CHECK(rd::exact_step_reward_oracle(chain.underlying(), pi, psi, 0, 1, 0) ==
        doctest::Approx(psi.segment_reward(one, 0, 1)).epsilon(1e-12));
}

TEST_CASE("exact oracle: two prefixes weighted 0.25 / 0.75 by hand") {
  // s0 ~ {0: 0.25, 1: 0.75}; both land in state 2 deterministically
  EnumeratedMdp mdp;
  mdp.n_states = 3;
  mdp.n_actions = 2;
  mdp.horizon = 2;
  mdp.transition = Matrix::Zero(6, 3);
  for (int s = 0; s < 3; ++s)
    for (int a = 0; a < 2; ++a) mdp.transition(mdp.row(s, a), 2) = 1.0;
  mdp.hidden_reward = Matrix::Zero(3, 2);
  mdp.initial_dist = Vector::Zero(3);
  mdp.initial_dist(0) = 0.25;
  mdp.initial_dist(1) = 0.75;
  const env::Policy pi = env::deterministic_policy(3, 2, {0, 0, 0});

  nn::Rng rng = nn::make_rng(20);
  const SaEncoder enc(3, 2);
  SubTrajModel psi(enc, 6, rng);

  const auto seg = [&](std::vector<int> states, std::vector<int> actions) {
    Trajectory tau;
    tau.states = states;
    tau.states.push_back(states.back());  // trailing state unused by scoring
    tau.actions = std::move(actions);
    return psi.segment_reward(tau, 0, tau.length());
  };
  const double expected = 0.25 * (seg({0, 2}, {0, 1}) - seg({0}, {0})) +
                          0.75 * (seg({1, 2}, {0, 1}) - seg({1}, {0}));
  CHECK(rd::exact_step_reward_oracle(mdp, pi, psi, 2, 1, 1) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("exact oracle: zero-probability states are undefined") {
  env::EnvInstance chain = env::EnvInstance::chain(5);
  const env::Policy always_right = env::deterministic_policy(5, 2, {1, 1, 1, 1, 1});
  nn::Rng rng = nn::make_rng(21);
  const SaEncoder enc(5, 2);
  SubTrajModel psi(enc, 4, rng);
  // state 3 cannot be reached at t = 1 under the deterministic policy
  CHECK_THROWS_AS(rd::exact_step_reward_oracle(chain.underlying(), always_right, psi, 3, 0, 1),
                  rd::UndefinedStateError);
}

TEST_CASE("sample_cut_points: edge counts and the full set") {
  nn::Rng rng = nn::make_rng(22);
  CHECK(rd::sample_cut_points(10, 0, rng).empty());
  const auto full = rd::sample_cut_points(10, 9, rng);
  REQUIRE(full.size() == 9);
  for (int i = 0; i < 9; ++i) CHECK(full[i] == i + 1);
  CHECK_THROWS_AS(rd::sample_cut_points(10, 10, rng), std::invalid_argument);
  CHECK_THROWS_AS(rd::sample_cut_points(10, -1, rng), std::invalid_argument);
}

TEST_CASE("sample_cut_points: single draws are uniform over {1..9} within 3 sigma") {
  nn::Rng rng = nn::make_rng(23);
  const int n = 10'000;
  int counts[10] = {};
  for (int i = 0; i < n; ++i) {
    const auto cuts = rd::sample_cut_points(10, 1, rng);
    REQUIRE(cuts.size() == 1);
    ++counts[cuts[0]];
  }
  const double p = 1.0 / 9.0;
  const double sigma = std::sqrt(n * p * (1 - p));
  CHECK(counts[0] == 0);
  for (int c = 1; c <= 9; ++c) CHECK(std::abs(counts[c] - n * p) <= 3.0 * sigma);
}

TEST_CASE("sample_cut_points: widened support includes zero") {
  nn::Rng rng = nn::make_rng(24);
  bool saw_zero = false;
  for (int i = 0; i < 200 && !saw_zero; ++i) {
    const auto cuts = rd::sample_cut_points(4, 1, rng, /*include_zero*/ true);
    saw_zero = !cuts.empty() && cuts[0] == 0;
  }
  CHECK(saw_zero);
}

TEST_CASE("overfit: psi regresses five fixed trajectories to their returns") {
  // five episodes from the delayed chain with mixed outcomes
  env::EnvInstance chain = env::EnvInstance::chain(5);
  nn::Rng collect_rng = nn::make_rng(25);
  std::vector<Trajectory> data;
  while (data.size() < 5) {
    chain.reset(data.size() * 31 + 7);
    while (!chain.done())
      chain.step(nn::uniform(collect_rng) < 0.75 ? 1 : 0);
    Trajectory tau = chain.episode();
    tau.episodic_return = chain.finish_episode();
    data.push_back(std::move(tau));
  }

  nn::Rng rng = nn::make_rng(26);
  const SaEncoder enc(5, 2);
  SubTrajModel psi(enc, 16, rng);
  std::vector<const Trajectory*> batch;
  for (const auto& tau : data) batch.push_back(&tau);
  nn::Rng cut_rng = nn::make_rng(27);

  const auto train = [&](int steps, double lr) {
    nn::Adam opt(psi.params(), {.learning_rate = lr});
    for (int step = 0; step < steps; ++step) {
      std::vector<std::vector<int>> cuts(batch.size());
      for (size_t i = 0; i < batch.size(); ++i) {
        // c drawn from {0,...,T-1}; 0 is the whole-trajectory residual
        const int c = nn::uniform_int(cut_rng, 0, batch[i]->length() - 1);
        if (c > 0) cuts[i] = {c};
      }
      rd::psi_batch_grad(psi, batch, cuts, false);
      opt.step();
    }
  };
  train(5000, 3e-3);  // fit
  train(3000, 3e-4);  // settle under the sampled-cut gradient noise
  // memorized: every cut condition of every stored trajectory is met
  double worst_loss = 0.0;
  for (const auto& tau : data)
    for (int c = 0; c < tau.length(); ++c)
      worst_loss = std::max(worst_loss, rd::return_loss(psi, tau, c));
  CHECK(worst_loss < 1e-4);
  for (const auto& tau : data)
    CHECK(std::abs(psi.segment_reward(tau, 0, tau.length()) - tau.episodic_return) < 1e-2);
}
