#pragma once

#include <vector>

#include "diaster/nn/autodiff.hpp"
#include "diaster/rd/step_model.hpp"
#include "diaster/rd/subtraj_model.hpp"

namespace diaster::rd {

/// Squared residual of the two-segment return decomposition at cut c:
/// (R_sub(tau_{0:c}) + R_sub(tau_{c:T}) - R_ep)^2. Valid for 0 <= c <= T;
/// the empty side contributes exactly 0.
double return_loss(const SubTrajModel& psi, const Trajectory& tau, int cut);

/// Same value; also accumulates d(loss)/d(psi) into psi's gradients.
double return_loss_grad(SubTrajModel& psi, const Trajectory& tau, int cut);

/// Generalized residual over m+1 segments delimited by strictly increasing
/// cuts in (0, T). m = 0 regresses the whole-trajectory score on R_ep;
/// m = 1 coincides with return_loss; m = T-1 is step-wise decomposition.
double multicut_return_loss(const SubTrajModel& psi, const Trajectory& tau,
                            const std::vector<int>& cuts);
double multicut_return_loss_grad(SubTrajModel& psi, const Trajectory& tau,
                                 const std::vector<int>& cuts);

/// Step-reward prediction loss on the prefix tau_{0:t+1}:
/// (r_phi(s_t, a_t) - (R_sub(tau_{0:t+1}) - R_sub(tau_{0:t})))^2.
/// The target treats psi as a constant: no gradient reaches psi.
double step_loss(const StepRewardModel& phi, const SubTrajModel& psi, const Trajectory& tau, int t);
double step_loss_grad(StepRewardModel& phi, const SubTrajModel& psi, const Trajectory& tau, int t);

/// Recurrent return-prediction loss (RUDDER-style baseline): mean over steps
/// of (g(tau_{0:t+1}) - R_ep)^2, where g reads out every prefix.
double rudder_loss(const SubTrajModel& g, const Trajectory& tau);
double rudder_loss_grad(SubTrajModel& g, const Trajectory& tau);

/// Randomized-subsequence decomposition loss (RRD baseline):
/// (mean_{t in idx} r_phi(s_t, a_t) - R_ep / T)^2 over a sampled index set.
/// With idx = all steps it reduces to whole-trajectory mean regression.
double rrd_loss(const StepRewardModel& phi, const Trajectory& tau, const std::vector<int>& idx);
double rrd_loss_grad(StepRewardModel& phi, const Trajectory& tau, const std::vector<int>& idx);

/// LossGraph adapters used by grad_check and the gradient suite.
nn::LossGraph make_return_loss(SubTrajModel& psi, const Trajectory& tau, int cut);
nn::LossGraph make_multicut_loss(SubTrajModel& psi, const Trajectory& tau, std::vector<int> cuts);
nn::LossGraph make_step_loss(StepRewardModel& phi, const SubTrajModel& psi, const Trajectory& tau, int t);
nn::LossGraph make_rudder_loss(SubTrajModel& g, const Trajectory& tau);
nn::LossGraph make_rrd_loss(StepRewardModel& phi, const Trajectory& tau, std::vector<int> idx);

}  // namespace diaster::rd
