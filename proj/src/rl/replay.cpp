#include "diaster/rl/replay.hpp"

#include <algorithm>
#include <stdexcept>

namespace diaster::rl {

ReplayBuffer::ReplayBuffer(size_t transition_capacity) : capacity_(transition_capacity) {
  if (capacity_ == 0) throw std::invalid_argument("ReplayBuffer: capacity must be positive");
}

void ReplayBuffer::push(Trajectory traj) {
  if (!traj.complete()) throw std::invalid_argument("ReplayBuffer::push: trajectory is incomplete");
  const size_t len = static_cast<size_t>(traj.length());
  if (len > capacity_)
    throw std::invalid_argument("ReplayBuffer::push: trajectory longer than the buffer capacity");
  if (!stats_.any) {
    stats_.r_min = stats_.r_max = traj.episodic_return;
    stats_.any = true;
  } else {
    stats_.r_min = std::min(stats_.r_min, traj.episodic_return);
    stats_.r_max = std::max(stats_.r_max, traj.episodic_return);
  }
  while (total_transitions_ + len > capacity_) {
    total_transitions_ -= lengths_.front();
    lengths_.pop_front();
    trajs_.pop_front();
  }
  trajs_.push_back(std::move(traj));
  lengths_.push_back(len);
  total_transitions_ += len;
}

const Trajectory& ReplayBuffer::sample_trajectory(nn::Rng& rng) const {
  if (trajs_.empty()) throw std::logic_error("ReplayBuffer: sampling from an empty buffer");
  return trajs_[nn::uniform_int(rng, 0, static_cast<int>(trajs_.size()) - 1)];
}

ReplayBuffer::TransitionRef ReplayBuffer::sample_transition(nn::Rng& rng) const {
  if (total_transitions_ == 0) throw std::logic_error("ReplayBuffer: sampling from an empty buffer");
  size_t target = static_cast<size_t>(
      nn::uniform_int(rng, 0, static_cast<int>(total_transitions_) - 1));
  for (size_t i = 0; i < lengths_.size(); ++i) {
    if (target < lengths_[i]) return {&trajs_[i], static_cast<int>(target)};
    target -= lengths_[i];
  }
  throw std::logic_error("ReplayBuffer: transition index walk failed");
}

}  // namespace diaster::rl
