#pragma once

#include <deque>
#include <vector>

#include "diaster/env/mdp.hpp"
#include "diaster/nn/rng.hpp"
#include "diaster/rd/methods.hpp"

namespace diaster::rl {

using env::Trajectory;

/// Ring store of complete trajectories with their episodic returns, indexed
/// both per trajectory and per transition. Capacity is counted in
/// transitions (default 1e6); the oldest trajectories are evicted whole.
/// Return extremes are tracked over everything ever stored (IRCR contract).
class ReplayBuffer {
 public:
  explicit ReplayBuffer(size_t transition_capacity = 1'000'000);

  /// Stores a complete trajectory; throws on an incomplete one or one
  /// longer than the whole buffer.
  void push(Trajectory traj);

  size_t n_trajectories() const { return trajs_.size(); }
  size_t n_transitions() const { return total_transitions_; }
  bool empty() const { return trajs_.empty(); }

  const Trajectory& trajectory(size_t i) const { return trajs_.at(i); }

  const Trajectory& sample_trajectory(nn::Rng& rng) const;

  struct TransitionRef {
    const Trajectory* traj = nullptr;
    int t = 0;
  };
  /// Uniform over all stored transitions.
  TransitionRef sample_transition(nn::Rng& rng) const;

  rd::BufferStats stats() const { return stats_; }

 private:
  size_t capacity_;
  std::deque<Trajectory> trajs_;
  std::deque<size_t> lengths_;
  size_t total_transitions_ = 0;
  rd::BufferStats stats_;
};

}  // namespace diaster::rl
