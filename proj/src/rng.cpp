#include "lungrad/rng.hpp"

#include <cmath>
#include <numbers>

namespace lungrad {

double SplitMix64::next_gaussian() {
  // Box-Muller on two fresh uniforms; u1 nudged away from 0.
  double u1 = next_double();
  double u2 = next_double();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<int> SplitMix64::sample_without_replacement(int n, int k) {
  std::vector<int> pool(n);
  for (int i = 0; i < n; ++i) pool[i] = i;
  if (k > n) k = n;
  for (int i = 0; i < k; ++i) {
    int j = i + static_cast<int>(next_below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace lungrad
