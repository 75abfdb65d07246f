#include "diaster/rd/methods.hpp"

#include <stdexcept>

namespace diaster::rd {

Method parse_method(const std::string& name) {
  if (name == "diaster") return Method::kDiaster;
  if (name == "diaster_no_step") return Method::kDiasterNoStep;
  if (name == "rudder_lite") return Method::kRudderLite;
  if (name == "ircr") return Method::kIrcr;
  if (name == "rrd") return Method::kRrd;
  if (name == "episodic_mc") return Method::kEpisodicMc;
  throw std::invalid_argument("unknown method: " + name);
}

std::string method_name(Method m) {
  switch (m) {
    case Method::kDiaster: return "diaster";
    case Method::kDiasterNoStep: return "diaster_no_step";
    case Method::kRudderLite: return "rudder_lite";
    case Method::kIrcr: return "ircr";
    case Method::kRrd: return "rrd";
    case Method::kEpisodicMc: return "episodic_mc";
  }
  throw std::logic_error("unknown method tag");
}

std::vector<double> RudderModel::prefix_predictions(const Trajectory& tau) const {
  std::vector<double> pred = scorer_.prefix_rewards(tau);
  pred[0] = scorer_.readout(Vector::Zero(scorer_.hidden_dim()));
  return pred;
}

std::vector<double> relabel(const MethodModels& models, const Trajectory& tau,
                            const BufferStats& stats) {
  if (!tau.complete()) throw std::invalid_argument("relabel: trajectory is incomplete");
  const int len = tau.length();
  std::vector<double> rewards(len, 0.0);
  switch (models.method) {
    case Method::kDiaster: {
      if (!models.phi) throw std::logic_error("relabel: diaster needs the step model");
      for (int t = 0; t < len; ++t)
        rewards[t] = models.phi->reward(tau.states[t], tau.actions[t], t);
      break;
    }
    case Method::kDiasterNoStep: {
      if (!models.psi) throw std::logic_error("relabel: diaster_no_step needs the sub-trajectory model");
      const std::vector<double> prefix = models.psi->prefix_rewards(tau);
      for (int t = 0; t < len; ++t) rewards[t] = prefix[t + 1] - prefix[t];
      break;
    }
    case Method::kRudderLite: {
      if (!models.rudder) throw std::logic_error("relabel: rudder_lite needs the return predictor");
      const std::vector<double> pred = models.rudder->prefix_predictions(tau);
      for (int t = 0; t < len; ++t) rewards[t] = pred[t + 1] - pred[t];
      break;
    }
    case Method::kIrcr: {
      if (!stats.any || stats.r_max == stats.r_min) break;  // defined fallback: all zero
      const double norm = (tau.episodic_return - stats.r_min) / (stats.r_max - stats.r_min);
      for (int t = 0; t < len; ++t) rewards[t] = norm;
      break;
    }
    case Method::kRrd: {
      if (!models.rrd_phi) throw std::logic_error("relabel: rrd needs its step model");
      for (int t = 0; t < len; ++t)
        rewards[t] = models.rrd_phi->reward(tau.states[t], tau.actions[t], t);
      break;
    }
    case Method::kEpisodicMc: {
      rewards[len - 1] = tau.episodic_return;
      break;
    }
  }
  return rewards;
}

double relabel_step(const MethodModels& models, const Trajectory& tau, int t,
                    const BufferStats& stats) {
  if (t < 0 || t >= tau.length()) throw std::invalid_argument("relabel_step: step out of range");
  switch (models.method) {
    case Method::kDiaster:
      return models.phi->reward(tau.states[t], tau.actions[t], t);
    case Method::kRrd:
      return models.rrd_phi->reward(tau.states[t], tau.actions[t], t);
    case Method::kIrcr: {
      if (!stats.any || stats.r_max == stats.r_min) return 0.0;
      return (tau.episodic_return - stats.r_min) / (stats.r_max - stats.r_min);
    }
    case Method::kEpisodicMc:
      return (t == tau.length() - 1) ? tau.episodic_return : 0.0;
    case Method::kDiasterNoStep:
    case Method::kRudderLite:
      // history-dependent: need the whole prefix anyway
      return relabel(models, tau, stats)[t];
  }
  throw std::logic_error("unknown method tag");
}

}  // namespace diaster::rd
