#include "diaster/rd/step_model.hpp"

#include <stdexcept>

namespace diaster::rd {

StepRewardModel::StepRewardModel(const SaEncoder& enc, const std::vector<int>& hidden, nn::Rng& rng,
                                 bool time_feature, int horizon, const std::string& name_prefix,
                                 nn::Activation act)
    : enc_(enc),
      time_feature_(time_feature),
      horizon_(horizon),
      net_(enc.dim() + (time_feature ? 1 : 0), hidden, 1, act, rng, name_prefix) {
  if (time_feature && horizon <= 0)
    throw std::invalid_argument("StepRewardModel: time feature needs a positive horizon");
}

Vector StepRewardModel::encode(int s, int a, int t) const {
  Vector x(net_.input_dim());
  if (time_feature_) {
    Vector sa(enc_.dim());
    enc_.encode_into(s, a, sa);
    x.head(enc_.dim()) = sa;
    x(enc_.dim()) = static_cast<double>(t) / horizon_;
  } else {
    enc_.encode_into(s, a, x);
  }
  return x;
}

double StepRewardModel::reward(int s, int a, int t) const { return net_.forward(encode(s, a, t))(0); }

double StepRewardModel::reward(int s, int a, int t, Cache& cache) const {
  return net_.forward(encode(s, a, t), cache.net)(0);
}

void StepRewardModel::backward(const Cache& cache, double dscore) {
  Vector dy(1);
  dy(0) = dscore;
  net_.backward(cache.net, dy);
}

}  // namespace diaster::rd
