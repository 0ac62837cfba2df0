#pragma once

#include <cstdint>
#include <vector>

namespace lungrad {

/// Deterministic 64-bit generator (splitmix64). Used everywhere instead of
/// std:: distributions so that streams are identical across platforms and
/// independent of thread scheduling: each parallel unit (tree, subject, ...)
/// derives its own stream from a root seed and a unit index.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t next_below(std::uint64_t bound) {
    // Rejection sampling keeps the distribution exactly uniform.
    std::uint64_t threshold = (0ULL - bound) % bound;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  /// Standard normal via Box-Muller (deterministic, no cached spare).
  double next_gaussian();

  /// Partial Fisher-Yates: first k elements of a shuffled [0, n) range.
  std::vector<int> sample_without_replacement(int n, int k);

 private:
  std::uint64_t state_;
};

/// Stream for a (seed, unit) pair; mixes the unit index through the generator
/// so neighboring seeds do not produce correlated streams.
inline SplitMix64 derive_stream(std::uint64_t seed, std::uint64_t unit) {
  SplitMix64 mixer(seed ^ (0x632be59bd9b4e019ULL * (unit + 1)));
  return SplitMix64(mixer.next_u64());
}

}  // namespace lungrad
