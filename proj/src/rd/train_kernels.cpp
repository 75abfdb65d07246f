#include "diaster/rd/train_kernels.hpp"

#include <algorithm>
#include <stdexcept>

#include "diaster/parallel.hpp"

namespace diaster::rd {

namespace {

using nn::Matrix;
using nn::ParamList;

// Slot-based batch gradient: item i's gradient lands in slots[i]; the
// reduction runs in ascending item order so the result does not depend on
// the schedule. `Model` must be copy-constructible (thread-local replicas).
template <typename Model, typename ItemFn>
double slot_batch_grad(Model& model, ParamList params, long n, bool parallel, const ItemFn& item) {
  if (n == 0) throw std::invalid_argument("batch gradient: empty batch");
  std::vector<std::vector<Matrix>> slots(n);
  std::vector<double> losses(static_cast<size_t>(n), 0.0);

#ifdef _OPENMP
  if (parallel && n > 1) {
    const int nt = std::min<long>(max_threads(), n);
    std::vector<Model> replicas(nt, model);
    std::vector<ParamList> replica_params;
    replica_params.reserve(nt);
    for (auto& r : replicas) replica_params.push_back(r.params());
#pragma omp parallel for schedule(static) num_threads(nt)
    for (long i = 0; i < n; ++i) {
      const int tid = omp_get_thread_num();
      ParamList& ps = replica_params[tid];
      nn::zero_grads(ps);
      losses[i] = item(replicas[tid], i);
      auto& slot = slots[i];
      slot.reserve(ps.size());
      for (const nn::Param* p : ps) slot.push_back(p->grad);
    }
  } else
#endif
  {
    (void)parallel;
    for (long i = 0; i < n; ++i) {
      nn::zero_grads(params);
      losses[i] = item(model, i);
      auto& slot = slots[i];
      slot.reserve(params.size());
      for (const nn::Param* p : params) slot.push_back(p->grad);
    }
  }

  nn::zero_grads(params);
  const double inv = 1.0 / static_cast<double>(n);
  for (long i = 0; i < n; ++i)
    for (size_t p = 0; p < params.size(); ++p) params[p]->grad += slots[i][p];
  for (nn::Param* p : params) p->grad *= inv;

  double mean = 0.0;
  for (double l : losses) mean += l;
  return mean * inv;
}

}  // namespace

double psi_batch_grad(SubTrajModel& psi, const std::vector<const Trajectory*>& batch,
                      const std::vector<std::vector<int>>& cuts, bool parallel) {
  if (batch.size() != cuts.size()) throw std::invalid_argument("psi_batch_grad: cuts per item required");
  return slot_batch_grad(psi, psi.params(), static_cast<long>(batch.size()), parallel,
                         [&](SubTrajModel& m, long i) {
                           return multicut_return_loss_grad(m, *batch[i], cuts[i]);
                         });
}

double psi_batch_grad_serial(SubTrajModel& psi, const std::vector<const Trajectory*>& batch,
                             const std::vector<std::vector<int>>& cuts) {
  if (batch.empty() || batch.size() != cuts.size())
    throw std::invalid_argument("psi_batch_grad_serial: bad batch");
  ParamList params = psi.params();
  nn::zero_grads(params);
  double mean = 0.0;
  for (size_t i = 0; i < batch.size(); ++i) mean += multicut_return_loss_grad(psi, *batch[i], cuts[i]);
  const double inv = 1.0 / static_cast<double>(batch.size());
  for (nn::Param* p : params) p->grad *= inv;
  return mean * inv;
}

double phi_batch_grad(StepRewardModel& phi, const SubTrajModel& psi,
                      const std::vector<const Trajectory*>& batch, const std::vector<int>& steps,
                      bool parallel) {
  if (batch.size() != steps.size()) throw std::invalid_argument("phi_batch_grad: one step per item required");
  return slot_batch_grad(phi, phi.params(), static_cast<long>(batch.size()), parallel,
                         [&](StepRewardModel& m, long i) {
                           return step_loss_grad(m, psi, *batch[i], steps[i]);
                         });
}

double phi_batch_grad_serial(StepRewardModel& phi, const SubTrajModel& psi,
                             const std::vector<const Trajectory*>& batch,
                             const std::vector<int>& steps) {
  if (batch.empty() || batch.size() != steps.size())
    throw std::invalid_argument("phi_batch_grad_serial: bad batch");
  ParamList params = phi.params();
  nn::zero_grads(params);
  double mean = 0.0;
  for (size_t i = 0; i < batch.size(); ++i) mean += step_loss_grad(phi, psi, *batch[i], steps[i]);
  const double inv = 1.0 / static_cast<double>(batch.size());
  for (nn::Param* p : params) p->grad *= inv;
  return mean * inv;
}

double rudder_batch_grad(RudderModel& g, const std::vector<const Trajectory*>& batch, bool parallel) {
  return slot_batch_grad(g, g.params(), static_cast<long>(batch.size()), parallel,
                         [&](RudderModel& m, long i) { return rudder_loss_grad(m.scorer(), *batch[i]); });
}

double rudder_batch_grad_serial(RudderModel& g, const std::vector<const Trajectory*>& batch) {
  if (batch.empty()) throw std::invalid_argument("rudder_batch_grad_serial: empty batch");
  ParamList params = g.params();
  nn::zero_grads(params);
  double mean = 0.0;
  for (const Trajectory* tau : batch) mean += rudder_loss_grad(g.scorer(), *tau);
  const double inv = 1.0 / static_cast<double>(batch.size());
  for (nn::Param* p : params) p->grad *= inv;
  return mean * inv;
}

double rrd_batch_grad(StepRewardModel& phi, const std::vector<const Trajectory*>& batch,
                      const std::vector<std::vector<int>>& subsets, bool parallel) {
  if (batch.size() != subsets.size()) throw std::invalid_argument("rrd_batch_grad: one subset per item required");
  return slot_batch_grad(phi, phi.params(), static_cast<long>(batch.size()), parallel,
                         [&](StepRewardModel& m, long i) {
                           return rrd_loss_grad(m, *batch[i], subsets[i]);
                         });
}

double rrd_batch_grad_serial(StepRewardModel& phi, const std::vector<const Trajectory*>& batch,
                             const std::vector<std::vector<int>>& subsets) {
  if (batch.empty() || batch.size() != subsets.size())
    throw std::invalid_argument("rrd_batch_grad_serial: bad batch");
  ParamList params = phi.params();
  nn::zero_grads(params);
  double mean = 0.0;
  for (size_t i = 0; i < batch.size(); ++i) mean += rrd_loss_grad(phi, *batch[i], subsets[i]);
  const double inv = 1.0 / static_cast<double>(batch.size());
  for (nn::Param* p : params) p->grad *= inv;
  return mean * inv;
}

}  // namespace diaster::rd
