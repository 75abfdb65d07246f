#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "diaster/env/env.hpp"
#include "diaster/env/oracle.hpp"
#include "diaster/env/spec_io.hpp"

using namespace diaster;
using env::EnumeratedMdp;
using env::EnvInstance;
using nn::Matrix;
using nn::Vector;

namespace {

EnumeratedMdp two_state_uniform(int horizon) {
  EnumeratedMdp mdp;
  mdp.n_states = 2;
  mdp.n_actions = 2;
  mdp.horizon = horizon;
  mdp.transition = Matrix::Constant(4, 2, 0.5);
  mdp.hidden_reward = Matrix::Zero(2, 2);
  mdp.hidden_reward(1, 1) = 1.0;
  mdp.initial_dist = Vector::Constant(2, 0.5);
  return mdp;
}

}  // namespace

TEST_CASE("reset: point-mass initial distribution always starts at state 0") {
  EnvInstance env = EnvInstance::chain(5);
  for (uint64_t seed = 0; seed < 20; ++seed) CHECK(env.reset(seed) == 0);
}

TEST_CASE("reset: uniform initial distribution is within 3 sigma over 10000 resets") {
  EnumeratedMdp mdp;
  mdp.n_states = 4;
  mdp.n_actions = 1;
  mdp.horizon = 1;
  mdp.transition = Matrix::Constant(4, 4, 0.25);
  mdp.hidden_reward = Matrix::Zero(4, 1);
  mdp.initial_dist = Vector::Constant(4, 0.25);
  EnvInstance env = EnvInstance::custom(mdp);
  const int n = 10'000;
  int counts[4] = {0, 0, 0, 0};
  for (int i = 0; i < n; ++i) ++counts[env.reset(1000 + i)];
  const double sigma = std::sqrt(n * 0.25 * 0.75);
  for (int s = 0; s < 4; ++s) CHECK(std::abs(counts[s] - n * 0.25) <= 3.0 * sigma);
}

TEST_CASE("step: deterministic chain moves right one cell") {
  EnvInstance env = EnvInstance::chain(6);
  env.reset(7);
  for (int k = 0; k + 1 < 5; ++k) {
    const auto [next, done] = env.step(1);
    CHECK(next == k + 1);
    if (k + 2 < 6) CHECK_FALSE(done);
  }
}

TEST_CASE("step: done exactly at the horizon when no terminal state is hit") {
  EnvInstance env = EnvInstance::chain(8, 4);  // horizon shorter than the chain
  env.reset(3);
  for (int t = 0; t < 3; ++t) CHECK_FALSE(env.step(1).second);
  CHECK(env.step(1).second);
  CHECK_THROWS_AS(env.step(1), std::logic_error);
}

TEST_CASE("step: stochastic row lands within 3 sigma over 10000 samples") {
  EnumeratedMdp mdp;
  mdp.n_states = 2;
  mdp.n_actions = 1;
  mdp.horizon = 1;
  mdp.transition.resize(2, 2);
  mdp.transition << 0.7, 0.3, 0.0, 1.0;
  mdp.hidden_reward = Matrix::Zero(2, 1);
  mdp.initial_dist = Vector::Zero(2);
  mdp.initial_dist(0) = 1.0;
  EnvInstance env = EnvInstance::custom(mdp);
  const int n = 10'000;
  int to_zero = 0;
  for (int i = 0; i < n; ++i) {
    env.reset(i);
    if (env.step(0).first == 0) ++to_zero;
  }
  const double sigma = std::sqrt(n * 0.7 * 0.3);
  CHECK(std::abs(to_zero - n * 0.7) <= 3.0 * sigma);
}

TEST_CASE("step: out-of-range action and unstarted episode are rejected") {
  EnvInstance env = EnvInstance::chain(4);
  CHECK_THROWS_AS(env.step(0), std::logic_error);
  env.reset(0);
  CHECK_THROWS_AS(env.step(2), std::invalid_argument);
  CHECK_THROWS_AS(env.step(-1), std::invalid_argument);
}

TEST_CASE("finish_episode: optimal play on chain length 5 returns exactly 1.0") {
  EnvInstance env = EnvInstance::chain(5);
  CHECK(env::optimal_return(env.underlying()) == doctest::Approx(1.0));
  env.reset(11);
  while (!env.done()) env.step(1);
  CHECK(env.finish_episode() == 1.0);
}

TEST_CASE("finish_episode: all-zero reward table returns 0.0") {
  EnumeratedMdp mdp = two_state_uniform(4);
  mdp.hidden_reward.setZero();
  EnvInstance env = EnvInstance::custom(mdp);
  env.reset(5);
  while (!env.done()) env.step(0);
  CHECK(env.finish_episode() == 0.0);
}

TEST_CASE("finish_episode: key-door without the key pays nothing") {
  EnvInstance env = EnvInstance::key_door_grid(5, 5, 30, /*start*/ 0, /*key*/ 12, /*door*/ 24);
  env.reset(9);
  // walk to the door corner along the edge, never crossing the center
  const int right = 1, down = 2;
  for (int i = 0; i < 4 && !env.done(); ++i) env.step(right);
  for (int i = 0; i < 4 && !env.done(); ++i) env.step(down);
  // standing on the door cell without the key: no reward, episode open
  CHECK_FALSE(env.done());
  CHECK_THROWS_AS(env.finish_episode(), std::logic_error);
  while (!env.done()) env.step(right);  // bump the wall until the horizon
  CHECK(env.finish_episode() == 0.0);
}

TEST_CASE("finish_episode equals the hidden reward sum along the episode, exactly") {
  EnvInstance env = EnvInstance::key_door_grid(4, 4, 20);
  nn::Rng rng = nn::make_rng(17);
  for (int episode = 0; episode < 30; ++episode) {
    env.reset(100 + episode);
    while (!env.done()) env.step(nn::uniform_int(rng, 0, 3));
    const env::Trajectory& tau = env.episode();
    double sum = 0.0;
    for (int t = 0; t < tau.length(); ++t)
      sum += env.underlying().hidden_reward(tau.states[t], tau.actions[t]);
    CHECK(env.finish_episode() == sum);
    CHECK(tau.episodic_return == sum);
  }
}

TEST_CASE("enumerate: degenerate 1-state 1-action MDP has a single unit-mass trajectory") {
  EnumeratedMdp mdp;
  mdp.n_states = 1;
  mdp.n_actions = 1;
  mdp.horizon = 3;
  mdp.transition = Matrix::Constant(1, 1, 1.0);
  mdp.hidden_reward = Matrix::Constant(1, 1, 0.25);
  mdp.initial_dist = Vector::Constant(1, 1.0);
  const auto all = env::enumerate_trajectories(mdp, env::uniform_policy(1, 1), 3);
  REQUIRE(all.size() == 1);
  CHECK(all[0].probability == doctest::Approx(1.0));
  CHECK(all[0].hidden_return == doctest::Approx(0.75));
}

TEST_CASE("enumerate: 2-state 2-action uniform MDP at T=2 has 16 hand-checked entries") {
  const EnumeratedMdp mdp = two_state_uniform(2);
  const auto all = env::enumerate_trajectories(mdp, env::uniform_policy(2, 2), 2);
  REQUIRE(all.size() == 16);
  double total = 0.0;
  for (const auto& wt : all) {
    // rho0(s0) pi(a0) P(s1|s0,a0) pi(a1) = 0.5 * 0.5 * 0.5 * 0.5
    CHECK(wt.probability == doctest::Approx(0.0625));
    total += wt.probability;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("enumerate: probabilities sum to 1 within 1e-9 on random dense instances") {
  nn::Rng rng = nn::make_rng(23);
  for (int rep = 0; rep < 5; ++rep) {
    EnumeratedMdp mdp = two_state_uniform(4);
    for (int r = 0; r < 4; ++r) {
      mdp.transition(r, 0) = 0.2 + 0.6 * nn::uniform(rng);
      mdp.transition(r, 1) = 1.0 - mdp.transition(r, 0);
    }
    const auto all = env::enumerate_trajectories(mdp, env::uniform_policy(2, 2), 4);
    double total = 0.0;
    for (const auto& wt : all) {
      CHECK(wt.probability >= 0.0);
      total += wt.probability;
    }
    CHECK(std::abs(total - 1.0) <= 1e-9);
  }
}

TEST_CASE("enumerate: cap refusal names the required size") {
  const EnumeratedMdp mdp = two_state_uniform(4);
  try {
    env::enumerate_trajectories(mdp, env::uniform_policy(2, 2), 4, 10);
    FAIL("expected EnumerationCapExceeded");
  } catch (const env::EnumerationCapExceeded& e) {
    CHECK(e.required == 256);  // (2 * 2)^4
    CHECK(e.cap == 10);
  }
}

TEST_CASE("state_occupancy: base case, determinism, and the enumeration marginal") {
  const EnumeratedMdp mdp = two_state_uniform(3);
  const env::Policy pi = env::uniform_policy(2, 2);
  CHECK((env::state_occupancy(mdp, pi, 0) - mdp.initial_dist).cwiseAbs().maxCoeff() == 0.0);

  // deterministic MDP and policy: point mass on the reached state
  EnvInstance chain = EnvInstance::chain(5);
  const env::Policy always_right = env::deterministic_policy(5, 2, {1, 1, 1, 1, 1});
  const Vector rho2 = env::state_occupancy(chain.underlying(), always_right, 2);
  CHECK(rho2(2) == doctest::Approx(1.0));

  // marginal of enumerate_trajectories reproduces the propagated occupancy
  for (int t = 1; t <= 3; ++t) {
    const auto all = env::enumerate_trajectories(mdp, pi, t);
    Vector marginal = Vector::Zero(2);
    for (const auto& wt : all) marginal(wt.states.back()) += wt.probability;
    // states.back() is s_{t-1}; compare against occupancy at t-1
    CHECK((marginal - env::state_occupancy(mdp, pi, t - 1)).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("optimal_return: zero rewards, chain, and key-door DP values") {
  EnumeratedMdp zero = two_state_uniform(4);
  zero.hidden_reward.setZero();
  CHECK(env::optimal_return(zero) == doctest::Approx(0.0));

  CHECK(env::optimal_return(EnvInstance::chain(5).underlying()) == doctest::Approx(1.0));

  // key at the center, door in the far corner: reachable within the horizon
  EnvInstance kd = EnvInstance::key_door_grid(5, 5, 30);
  CHECK(env::optimal_return(kd.underlying()) == doctest::Approx(1.0));
  // infeasible horizon: key-then-door cannot be done in 3 steps
  EnvInstance kd_short = EnvInstance::key_door_grid(5, 5, 3);
  CHECK(env::optimal_return(kd_short.underlying()) == doctest::Approx(0.0));
}

TEST_CASE("optimal_policy rollout achieves the DP value on the key-door grid") {
  EnvInstance kd = EnvInstance::key_door_grid(5, 5, 30);
  const auto plan = env::optimal_policy(kd.underlying());
  kd.reset(5);
  int t = 0;
  while (!kd.done()) {
    kd.step(plan[t][kd.state()]);
    ++t;
  }
  CHECK(kd.finish_episode() == doctest::Approx(env::optimal_return(kd.underlying())));
}

TEST_CASE("point maze: the U corridor forces the long way around") {
  EnvInstance maze = EnvInstance::point_maze_grid(16);
  CHECK(env::optimal_return(maze.underlying()) == doctest::Approx(1.0));
  // straight right from (0,0) hits the wall block and stays put
  maze.reset(2);
  const auto [next, done] = maze.step(1);
  CHECK(next == 0);
  CHECK_FALSE(done);
}

TEST_CASE("env spec file: custom MDP round-trips through the documented schema") {
  namespace fs = std::filesystem;
  const std::string path = (fs::temp_directory_path() / "custom_env_test.env").string();
  {
    std::ofstream out(path);
    out << "# tiny custom task\n"
        << "kind = custom\n"
        << "n_states = 3\n"
        << "n_actions = 2\n"
        << "horizon = 4\n"
        << "rho0 = 1 0 0\n"
        << "terminal = 2\n"
        << "transition 0 0 = 0.5 0.5 0\n"
        << "transition 0 1 = 0 0.25 0.75\n"
        << "transition 1 0 = 1 0 0\n"
        << "transition 1 1 = 0 0 1\n"
        << "reward 1 1 = 2.5\n";
  }
  EnvInstance env = env::load_env_spec(path);
  CHECK(env.n_states() == 3);
  CHECK(env.n_actions() == 2);
  CHECK(env.horizon() == 4);
  CHECK(env.underlying().hidden_reward(1, 1) == 2.5);
  CHECK(env.underlying().is_terminal(2));
  CHECK(env.underlying().transition(env.underlying().row(0, 1), 2) == 0.75);
  fs::remove(path);
}

TEST_CASE("env spec file: missing transition row is a descriptive error") {
  namespace fs = std::filesystem;
  const std::string path = (fs::temp_directory_path() / "broken_env_test.env").string();
  {
    std::ofstream out(path);
    out << "kind = custom\nn_states = 2\nn_actions = 1\nhorizon = 2\nrho0 = 1 0\n"
        << "transition 0 0 = 0.5 0.5\n";
  }
  CHECK_THROWS_WITH_AS(env::load_env_spec(path), "env spec: missing transition 1 0",
                       std::runtime_error);
  fs::remove(path);
}

TEST_CASE("mdp validation: rows must be stochastic and terminals absorbing") {
  EnumeratedMdp mdp = two_state_uniform(3);
  mdp.transition(0, 0) = 0.6;  // row sums to 1.1
  CHECK_THROWS_AS(mdp.validate(), std::invalid_argument);
  mdp = two_state_uniform(3);
  mdp.terminal = {0, 1};  // state 1 terminal but not absorbing / has reward
  CHECK_THROWS_AS(mdp.validate(), std::invalid_argument);
}
