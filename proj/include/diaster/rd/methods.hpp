#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "diaster/rd/step_model.hpp"
#include "diaster/rd/subtraj_model.hpp"

namespace diaster::rd {

/// Reward-redistribution method tags. All methods expose one relabeling
/// interface: (trajectory, buffer stats) -> per-step proxy rewards.
enum class Method {
  kDiaster,        // r_phi(s_t, a_t) from the trained step model
  kDiasterNoStep,  // raw prefix differences of R_sub (history-dependent)
  kRudderLite,     // differences of a per-prefix return predictor
  kIrcr,           // normalized episodic return at every step
  kRrd,            // step model trained on random subsequences
  kEpisodicMc,     // R_ep at the final step, 0 elsewhere (no decomposition)
};

Method parse_method(const std::string& name);
std::string method_name(Method m);

/// Running extremes of every return ever stored in the replay buffer.
struct BufferStats {
  double r_min = 0.0;
  double r_max = 0.0;
  bool any = false;
};

/// RUDDER-style per-prefix return predictor. Unlike the sub-trajectory
/// model, the empty prefix scores readout(h0) rather than a hardwired 0, so
/// a constant predictor redistributes nothing.
class RudderModel {
 public:
  RudderModel(const SaEncoder& enc, int hidden_dim, nn::Rng& rng)
      : scorer_(enc, hidden_dim, rng, "rudder") {}

  /// Predictions g(tau_{0:k}) for k = 0..len; element 0 is readout(h0).
  std::vector<double> prefix_predictions(const Trajectory& tau) const;

  SubTrajModel& scorer() { return scorer_; }
  const SubTrajModel& scorer() const { return scorer_; }
  nn::ParamList params() { return scorer_.params(); }

 private:
  SubTrajModel scorer_;
};

/// The models a method needs; unused slots stay null.
struct MethodModels {
  Method method = Method::kDiaster;
  std::unique_ptr<SubTrajModel> psi;
  std::unique_ptr<StepRewardModel> phi;
  std::unique_ptr<RudderModel> rudder;
  std::unique_ptr<StepRewardModel> rrd_phi;
};

/// Per-step proxy rewards for a complete trajectory under `method`.
/// IRCR with an empty buffer or r_max == r_min falls back to all zeros.
std::vector<double> relabel(const MethodModels& models, const Trajectory& tau,
                            const BufferStats& stats);

/// Proxy reward for a single transition (tau's step t), matching relabel.
double relabel_step(const MethodModels& models, const Trajectory& tau, int t,
                    const BufferStats& stats);

}  // namespace diaster::rd
