#pragma once

#include <string>
#include <utility>

#include "diaster/env/mdp.hpp"
#include "diaster/nn/rng.hpp"

namespace diaster::env {

/// Episodic-reward environment over an enumerated MDP. The agent-facing
/// surface (reset/step/finish_episode) never exposes a per-step reward:
/// step returns only (next_state, done), and the scalar return becomes
/// available once the episode is over. The underlying tables stay private
/// to oracles and tests via underlying().
class EnvInstance {
 public:
  enum class Kind { kChain, kKeyDoorGrid, kPointMazeGrid, kCustom };

  /// Delayed chain of `length` cells, actions {0: left, 1: right}; reward 1
  /// for stepping onto the rightmost cell, which is terminal. Horizon
  /// defaults to `length`. `distractor` adds a 0.01 lure on (0, left).
  static EnvInstance chain(int length, int horizon = -1, bool distractor = false);

  /// width x height grid; the door pays 1 only if the key cell was visited
  /// first. States are (cell, key flag); actions {up, right, down, left}.
  static EnvInstance key_door_grid(int width, int height, int horizon,
                                   int start_cell = 0, int key_cell = -1, int door_cell = -1);

  /// 5x5 grid with a 3x3 wall block leaving a U-shaped corridor; start at
  /// one arm tip, goal at the other. Default horizon 16.
  static EnvInstance point_maze_grid(int horizon = 16);

  static EnvInstance custom(EnumeratedMdp mdp);

  /// Starts a new episode: reseeds the rng and draws s0 from rho0.
  int reset(uint64_t seed);

  /// Advances one step; returns (next_state, done). No reward is exposed.
  /// Throws if the action is out of range or the episode is over/not started.
  std::pair<int, bool> step(int action);

  /// The episodic return; only valid once done. Throws mid-episode.
  double finish_episode() const;

  bool started() const { return started_; }
  bool done() const { return done_; }
  int state() const { return state_; }
  int horizon() const { return mdp_.horizon; }
  int n_states() const { return mdp_.n_states; }
  int n_actions() const { return mdp_.n_actions; }
  Kind kind() const { return kind_; }

  /// The episode recorded so far (complete once done).
  const Trajectory& episode() const { return episode_; }

  /// Oracle access to the hidden tables; not part of the agent surface.
  const EnumeratedMdp& underlying() const { return mdp_; }

 private:
  EnvInstance(Kind kind, EnumeratedMdp mdp);

  Kind kind_;
  EnumeratedMdp mdp_;
  nn::Rng rng_;
  Trajectory episode_;
  double hidden_sum_ = 0.0;
  int state_ = 0;
  int steps_ = 0;
  bool started_ = false;
  bool done_ = false;
};

EnvInstance::Kind parse_env_kind(const std::string& name);

}  // namespace diaster::env
