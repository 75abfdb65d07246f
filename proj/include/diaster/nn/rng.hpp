#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace diaster::nn {

using Rng = std::mt19937_64;

/// splitmix64 step; used to derive independent child seeds from a master seed.
uint64_t splitmix64(uint64_t& state);

/// Deterministic child seed for a named stream (seed, tag, index).
uint64_t derive_seed(uint64_t master, std::string_view tag, uint64_t index = 0);

Rng make_rng(uint64_t seed);

/// Uniform double in [lo, hi).
double uniform(Rng& rng, double lo = 0.0, double hi = 1.0);

/// Uniform integer in [lo, hi] inclusive.
int uniform_int(Rng& rng, int lo, int hi);

/// Samples an index from a discrete distribution given by `probs` (sums to 1).
int sample_discrete(Rng& rng, const double* probs, int n);

}  // namespace diaster::nn
