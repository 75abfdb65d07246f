#pragma once

#include <vector>

#include "diaster/nn/rng.hpp"

namespace diaster::rd {

/// Draws m distinct cut points uniformly without replacement, sorted
/// ascending. The default support is {1, ..., T-1}; include_zero widens it
/// to {0, ..., T-1} (0 is a valid degenerate cut: the leading segment is
/// empty and scores 0). Requires 0 <= m <= T-1.
std::vector<int> sample_cut_points(int horizon, int m, nn::Rng& rng, bool include_zero = false);

}  // namespace diaster::rd
