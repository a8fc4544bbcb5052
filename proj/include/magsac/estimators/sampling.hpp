#ifndef MAGSAC_ESTIMATORS_SAMPLING_HPP_
#define MAGSAC_ESTIMATORS_SAMPLING_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "magsac/core/errors.hpp"

namespace magsac {

using Rng = std::mt19937_64;

/// m distinct indices drawn uniformly from [0, n).
inline void draw_minimal_sample(Rng& rng, std::size_t n, std::size_t m, std::vector<std::size_t>& out) {
  if (m > n) throw Error(ErrorCode::kInvalidArgument, "sample size exceeds point count");
  out.clear();
  if (m == n) {
    out.resize(n);
    std::iota(out.begin(), out.end(), std::size_t{0});
    return;
  }
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  while (out.size() < m) {
    const std::size_t i = pick(rng);
    if (std::find(out.begin(), out.end(), i) == out.end()) out.push_back(i);
  }
}

inline std::vector<std::size_t> draw_minimal_sample(Rng& rng, std::size_t n, std::size_t m) {
  std::vector<std::size_t> out;
  draw_minimal_sample(rng, n, m, out);
  return out;
}

/// s distinct elements of `pool` (partial Fisher-Yates over a copy).
inline std::vector<std::size_t> draw_subset(Rng& rng, std::vector<std::size_t> pool, std::size_t s) {
  s = std::min(s, pool.size());
  for (std::size_t i = 0; i < s; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(s);
  return pool;
}

}  // namespace magsac

#endif  // MAGSAC_ESTIMATORS_SAMPLING_HPP_
