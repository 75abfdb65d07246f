#pragma once

#include "diaster/nn/dense.hpp"
#include "diaster/rd/encoder.hpp"

namespace diaster::rd {

/// Markovian step-reward model: a feed-forward scalar over the encoded
/// (s, a) pair, independent of history. The optional time feature appends
/// t / horizon to the input (off by default; the definition it approximates
/// is time-free).
class StepRewardModel {
 public:
  StepRewardModel(const SaEncoder& enc, const std::vector<int>& hidden, nn::Rng& rng,
                  bool time_feature = false, int horizon = 0,
                  const std::string& name_prefix = "phi",
                  nn::Activation act = nn::Activation::kRelu);

  double reward(int s, int a, int t = 0) const;

  struct Cache {
    nn::DenseNet::Cache net;
  };
  double reward(int s, int a, int t, Cache& cache) const;
  void backward(const Cache& cache, double dscore);

  nn::ParamList params() { return net_.params(); }
  const SaEncoder& encoder() const { return enc_; }
  bool time_feature() const { return time_feature_; }

 private:
  Vector encode(int s, int a, int t) const;

  SaEncoder enc_;
  bool time_feature_;
  int horizon_;
  nn::DenseNet net_;
};

}  // namespace diaster::rd
