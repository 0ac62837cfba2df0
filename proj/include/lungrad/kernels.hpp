#pragma once

#include <span>

#include "lungrad/volume.hpp"

namespace lungrad {

/// Execution policy for the data-parallel kernels. Serial is the reference
/// path; Parallel uses OpenMP over independent output lines/slabs, so both
/// produce bit-identical results (each output element is accumulated by
/// exactly one thread in a fixed order).
enum class Exec { Serial, Parallel };

/// Reflect an index into [0, n) with half-sample symmetry (edge repeated):
/// -1 -> 0, -2 -> 1, n -> n-1, ...
inline int reflect_index(int i, int n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2 * n - 1 - i;
  }
  return i;
}

/// 1D correlation along one axis with symmetric-reflection boundaries:
///   out[i] = sum_t taps[t] * in[reflect(i + t - anchor)]
/// axis: 0=x, 1=y, 2=z. in and out must not alias.
void convolve_axis(const Dims& dims, std::span<const double> in, std::span<double> out, int axis,
                   std::span<const double> taps, int anchor, Exec exec);

/// 6-neighbor discrete Laplacian with per-axis 1/spacing^2 scaling and
/// symmetric-reflection boundaries.
void laplacian6(const Dims& dims, const Spacing& spacing, std::span<const double> in, std::span<double> out,
                Exec exec);

/// max |v| over the span (exact under any reduction order).
double max_abs(std::span<const double> values, Exec exec);

/// out[i] = f(in[i]); f must be a pure function.
template <typename F>
void transform_pointwise(std::span<const double> in, std::span<double> out, F f, Exec exec) {
  const std::int64_t n = static_cast<std::int64_t>(in.size());
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = f(in[static_cast<std::size_t>(i)]);
  } else {
    for (std::int64_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = f(in[static_cast<std::size_t>(i)]);
  }
}

}  // namespace lungrad
