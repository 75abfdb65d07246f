#pragma once

#include <vector>

#include "diaster/env/mdp.hpp"
#include "diaster/nn/gru.hpp"
#include "diaster/rd/encoder.hpp"

namespace diaster::rd {

using env::Trajectory;
using nn::ParamList;
using nn::Vector;

/// Recurrent sub-trajectory reward model: a GRU over the segment's encoded
/// state-action pairs with a linear scalar read-out of the final hidden
/// state. The empty segment scores exactly 0 by construction — the network
/// is bypassed, not asked to learn it.
class SubTrajModel {
 public:
  SubTrajModel(const SaEncoder& enc, int hidden_dim, nn::Rng& rng,
               const std::string& name_prefix = "psi");

  /// R_sub of the contiguous slice [begin, end) of tau. begin == end is the
  /// empty segment and returns 0 for every parameterization.
  double segment_reward(const Trajectory& tau, int begin, int end) const;

  /// R_sub(tau_{0:k}) for every k in [0, len]; element 0 is exactly 0. One
  /// recurrent pass over the episode, reading out at each step.
  std::vector<double> prefix_rewards(const Trajectory& tau) const;

  /// Prefix scores over an explicit pair sequence (used by the exact
  /// enumeration oracles, which do not materialize Trajectory objects).
  double pairs_reward(const std::vector<int>& states, const std::vector<int>& actions) const;

  struct SeqCache {
    int begin = 0, end = 0;
    std::vector<nn::GruCell::StepCache> steps;
    std::vector<Vector> hidden;  // hidden[i] = state after step i
  };

  /// Forward pass that retains what the backward pass needs.
  double segment_reward(const Trajectory& tau, int begin, int end, SeqCache& cache) const;
  std::vector<double> prefix_rewards(const Trajectory& tau, SeqCache& cache) const;

  /// Backpropagation through time from a scalar seed on the segment's
  /// read-out. No-op for an empty segment.
  void backward_segment(const SeqCache& cache, double dscore);

  /// BPTT with one seed per prefix read-out (dscores[k] seeds R_sub(tau_{0:k+1})).
  void backward_prefixes(const SeqCache& cache, const std::vector<double>& dscores);

  ParamList params();
  const SaEncoder& encoder() const { return enc_; }
  int hidden_dim() const { return cell_.hidden_dim(); }
  nn::GruCell& cell() { return cell_; }
  const nn::GruCell& cell() const { return cell_; }

  /// Read-out applied to a hidden state: w . h + b.
  double readout(const Vector& h) const;

 private:
  void run(const Trajectory& tau, int begin, int end, SeqCache* cache, Vector& h) const;

  SaEncoder enc_;
  nn::GruCell cell_;
  nn::Param readout_w_, readout_b_;
};

}  // namespace diaster::rd
