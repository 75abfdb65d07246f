#include "diaster/env/env.hpp"

#include <stdexcept>

namespace diaster::env {

namespace {

EnumeratedMdp make_deterministic(int n_states, int n_actions, int horizon) {
  EnumeratedMdp mdp;
  mdp.n_states = n_states;
  mdp.n_actions = n_actions;
  mdp.horizon = horizon;
  mdp.transition = Matrix::Zero(static_cast<Eigen::Index>(n_states) * n_actions, n_states);
  mdp.hidden_reward = Matrix::Zero(n_states, n_actions);
  mdp.initial_dist = Vector::Zero(n_states);
  mdp.terminal.assign(n_states, 0);
  return mdp;
}

}  // namespace

EnvInstance::EnvInstance(Kind kind, EnumeratedMdp mdp) : kind_(kind), mdp_(std::move(mdp)), rng_(0) {
  mdp_.validate();
}

EnvInstance EnvInstance::chain(int length, int horizon, bool distractor) {
  if (length < 2) throw std::invalid_argument("chain: length must be at least 2");
  if (horizon <= 0) horizon = length;
  EnumeratedMdp mdp = make_deterministic(length, 2, horizon);
  mdp.initial_dist(0) = 1.0;
  mdp.terminal[length - 1] = 1;
  for (int s = 0; s < length; ++s) {
    if (mdp.terminal[s]) {
      mdp.transition(mdp.row(s, 0), s) = 1.0;
      mdp.transition(mdp.row(s, 1), s) = 1.0;
      continue;
    }
    mdp.transition(mdp.row(s, 0), std::max(0, s - 1)) = 1.0;
    mdp.transition(mdp.row(s, 1), s + 1) = 1.0;
  }
  mdp.hidden_reward(length - 2, 1) = 1.0;
  if (distractor) mdp.hidden_reward(0, 0) = 0.01;
  return EnvInstance(Kind::kChain, std::move(mdp));
}

EnvInstance EnvInstance::key_door_grid(int width, int height, int horizon, int start_cell,
                                       int key_cell, int door_cell) {
  const int cells = width * height;
  if (width < 2 || height < 2) throw std::invalid_argument("key_door_grid: grid too small");
  if (key_cell < 0) key_cell = (height / 2) * width + width / 2;  // center
  if (door_cell < 0) door_cell = cells - 1;                       // far corner
  if (start_cell == key_cell || key_cell == door_cell || start_cell == door_cell)
    throw std::invalid_argument("key_door_grid: start, key and door must be distinct cells");

  const int n_states = cells * 2;  // (cell, has_key)
  EnumeratedMdp mdp = make_deterministic(n_states, 4, horizon);
  const auto state_of = [&](int cell, int key) { return key * cells + cell; };
  mdp.initial_dist(state_of(start_cell, 0)) = 1.0;
  const int goal = state_of(door_cell, 1);
  mdp.terminal[goal] = 1;

  const int dx[4] = {0, 1, 0, -1};
  const int dy[4] = {-1, 0, 1, 0};  // up, right, down, left
  for (int key = 0; key < 2; ++key) {
    for (int cell = 0; cell < cells; ++cell) {
      const int s = state_of(cell, key);
      if (mdp.terminal[s]) {
        for (int a = 0; a < 4; ++a) mdp.transition(mdp.row(s, a), s) = 1.0;
        continue;
      }
      const int x = cell % width, y = cell / width;
      for (int a = 0; a < 4; ++a) {
        int nx = x + dx[a], ny = y + dy[a];
        if (nx < 0 || nx >= width || ny < 0 || ny >= height) {
          nx = x;
          ny = y;
        }
        const int ncell = ny * width + nx;
        int nkey = key;
        if (ncell == key_cell) nkey = 1;
        const int s2 = state_of(ncell, nkey);
        mdp.transition(mdp.row(s, a), s2) = 1.0;
        if (s2 == goal) mdp.hidden_reward(s, a) = 1.0;
      }
    }
  }
  return EnvInstance(Kind::kKeyDoorGrid, std::move(mdp));
}

EnvInstance EnvInstance::point_maze_grid(int horizon) {
  // 5x5 grid, wall block rows 0..2 x cols 1..3; the free cells form a U.
  const int width = 5, height = 5;
  const auto blocked = [&](int x, int y) { return y <= 2 && x >= 1 && x <= 3; };
  const int start = 0;           // (0,0), tip of the left arm
  const int goal_cell = 4;       // (4,0), tip of the right arm
  const int n_states = width * height;
  EnumeratedMdp mdp = make_deterministic(n_states, 4, horizon);
  mdp.initial_dist(start) = 1.0;
  mdp.terminal[goal_cell] = 1;

  const int dx[4] = {0, 1, 0, -1};
  const int dy[4] = {-1, 0, 1, 0};  // up, right, down, left
  for (int cell = 0; cell < n_states; ++cell) {
    const int x = cell % width, y = cell / width;
    if (mdp.terminal[cell] || blocked(x, y)) {
      for (int a = 0; a < 4; ++a) mdp.transition(mdp.row(cell, a), cell) = 1.0;
      continue;
    }
    for (int a = 0; a < 4; ++a) {
      int nx = x + dx[a], ny = y + dy[a];
      if (nx < 0 || nx >= width || ny < 0 || ny >= height || blocked(nx, ny)) {
        nx = x;
        ny = y;
      }
      const int ncell = ny * width + nx;
      mdp.transition(mdp.row(cell, a), ncell) = 1.0;
      if (ncell == goal_cell) mdp.hidden_reward(cell, a) = 1.0;
    }
  }
  return EnvInstance(Kind::kPointMazeGrid, std::move(mdp));
}

EnvInstance EnvInstance::custom(EnumeratedMdp mdp) { return EnvInstance(Kind::kCustom, std::move(mdp)); }

int EnvInstance::reset(uint64_t seed) {
  rng_ = nn::make_rng(seed);
  state_ = nn::sample_discrete(rng_, mdp_.initial_dist.data(), mdp_.n_states);
  episode_ = Trajectory{};
  episode_.states.push_back(state_);
  hidden_sum_ = 0.0;
  steps_ = 0;
  started_ = true;
  done_ = mdp_.is_terminal(state_);
  return state_;
}

std::pair<int, bool> EnvInstance::step(int action) {
  if (!started_) throw std::logic_error("step: reset() must be called first");
  if (done_) throw std::logic_error("step: episode is over");
  if (action < 0 || action >= mdp_.n_actions) throw std::invalid_argument("step: action out of range");

  hidden_sum_ += mdp_.hidden_reward(state_, action);
  const Eigen::Index r = mdp_.row(state_, action);
  // row() of an RowMajor-agnostic matrix isn't contiguous; copy once
  Vector probs = mdp_.transition.row(r).transpose();
  const int next = nn::sample_discrete(rng_, probs.data(), mdp_.n_states);

  episode_.actions.push_back(action);
  episode_.states.push_back(next);
  state_ = next;
  ++steps_;
  done_ = mdp_.is_terminal(next) || steps_ >= mdp_.horizon;
  if (done_) episode_.episodic_return = hidden_sum_;
  return {next, done_};
}

double EnvInstance::finish_episode() const {
  if (!done_) throw std::logic_error("finish_episode: episode still active");
  return hidden_sum_;
}

EnvInstance::Kind parse_env_kind(const std::string& name) {
  if (name == "chain") return EnvInstance::Kind::kChain;
  if (name == "key_door_grid") return EnvInstance::Kind::kKeyDoorGrid;
  if (name == "point_maze_grid") return EnvInstance::Kind::kPointMazeGrid;
  if (name == "custom") return EnvInstance::Kind::kCustom;
  throw std::invalid_argument("unknown environment kind: " + name);
}

}  // namespace diaster::env
