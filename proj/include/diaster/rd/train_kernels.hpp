#pragma once

#include <vector>

#include "diaster/rd/losses.hpp"
#include "diaster/rd/methods.hpp"

namespace diaster::rd {

/// Batch-gradient kernels for the decomposition losses. Each kernel writes
/// the mean loss gradient over the batch into the model's gradient buffers
/// (overwriting, not accumulating) and returns the mean loss.
///
/// Two implementations share one contract:
///   - *_serial: the reference — items processed one after another.
///   - the `parallel` flag on the main entry points: items fan out over
///     OpenMP threads, each computing its gradient into an item-indexed
///     slot; slots are reduced in item order. Results are bit-identical to
///     the serial path for any thread count, which the test suite asserts.
///
/// Per-item inputs are parallel arrays: batch[i] with cuts[i] / steps[i] /
/// subsets[i].

double psi_batch_grad(SubTrajModel& psi, const std::vector<const Trajectory*>& batch,
                      const std::vector<std::vector<int>>& cuts, bool parallel);
double psi_batch_grad_serial(SubTrajModel& psi, const std::vector<const Trajectory*>& batch,
                             const std::vector<std::vector<int>>& cuts);

double phi_batch_grad(StepRewardModel& phi, const SubTrajModel& psi,
                      const std::vector<const Trajectory*>& batch, const std::vector<int>& steps,
                      bool parallel);
double phi_batch_grad_serial(StepRewardModel& phi, const SubTrajModel& psi,
                             const std::vector<const Trajectory*>& batch,
                             const std::vector<int>& steps);

double rudder_batch_grad(RudderModel& g, const std::vector<const Trajectory*>& batch, bool parallel);
double rudder_batch_grad_serial(RudderModel& g, const std::vector<const Trajectory*>& batch);

double rrd_batch_grad(StepRewardModel& phi, const std::vector<const Trajectory*>& batch,
                      const std::vector<std::vector<int>>& subsets, bool parallel);
double rrd_batch_grad_serial(StepRewardModel& phi, const std::vector<const Trajectory*>& batch,
                             const std::vector<std::vector<int>>& subsets);

}  // namespace diaster::rd
