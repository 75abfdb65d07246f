#include "diaster/rd/cuts.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace diaster::rd {

std::vector<int> sample_cut_points(int horizon, int m, nn::Rng& rng, bool include_zero) {
  if (horizon < 1) throw std::invalid_argument("sample_cut_points: horizon must be positive");
  if (m < 0 || m > horizon - 1)
    throw std::invalid_argument("sample_cut_points: m must be in [0, T-1], got m=" + std::to_string(m) +
                                " with T=" + std::to_string(horizon));
  const int lo = include_zero ? 0 : 1;
  std::vector<int> pool(horizon - lo);
  std::iota(pool.begin(), pool.end(), lo);
  // partial Fisher-Yates: the first m entries are a uniform m-subset
  for (int i = 0; i < m; ++i) {
    const int j = nn::uniform_int(rng, i, static_cast<int>(pool.size()) - 1);
    std::swap(pool[i], pool[j]);
  }
  std::vector<int> cuts(pool.begin(), pool.begin() + m);
  std::sort(cuts.begin(), cuts.end());
  return cuts;
}

}  // namespace diaster::rd
