#include "diaster/nn/rng.hpp"

#include <stdexcept>

namespace diaster::nn {

uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t derive_seed(uint64_t master, std::string_view tag, uint64_t index) {
  uint64_t state = master;
  for (char c : tag) state = splitmix64(state) ^ static_cast<uint64_t>(static_cast<unsigned char>(c));
  state ^= 0x51d2cc3ab3a716c9ULL * (index + 1);
  return splitmix64(state);
}

Rng make_rng(uint64_t seed) { return Rng(seed); }

double uniform(Rng& rng, double lo, double hi) {
  // 53-bit mantissa; avoids distribution-object portability concerns
  double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

int uniform_int(Rng& rng, int lo, int hi) {
  if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
  uint64_t span = static_cast<uint64_t>(hi) - static_cast<uint64_t>(lo) + 1;
  uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return lo + static_cast<int>(draw % span);
}

int sample_discrete(Rng& rng, const double* probs, int n) {
  double u = uniform(rng);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    acc += probs[i];
    if (u < acc) return i;
  }
  // guard against accumulated rounding at u ~ 1
  for (int i = n - 1; i >= 0; --i)
    if (probs[i] > 0.0) return i;
  return n - 1;
}

}  // namespace diaster::nn
