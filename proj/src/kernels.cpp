#include "lungrad/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace lungrad {

namespace {

// One output line along `axis`; the line is gathered into a contiguous
// buffer, convolved, and scattered back. Buffers are caller-provided so the
// parallel loops can reuse per-thread scratch.
void convolve_line(const double* in, double* out, int n, std::size_t stride, std::span<const double> taps,
                   int anchor, std::vector<double>& scratch) {
  scratch.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) scratch[static_cast<std::size_t>(i)] = in[static_cast<std::size_t>(i) * stride];
  const int t_count = static_cast<int>(taps.size());
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int t = 0; t < t_count; ++t) {
      acc += taps[static_cast<std::size_t>(t)] * scratch[static_cast<std::size_t>(reflect_index(i + t - anchor, n))];
    }
    out[static_cast<std::size_t>(i) * stride] = acc;
  }
}

}  // namespace

void convolve_axis(const Dims& dims, std::span<const double> in, std::span<double> out, int axis,
                   std::span<const double> taps, int anchor, Exec exec) {
  const int nx = dims.nx, ny = dims.ny, nz = dims.nz;
  const std::size_t sx = 1;
  const std::size_t sy = static_cast<std::size_t>(nx);
  const std::size_t sz = static_cast<std::size_t>(nx) * ny;

  int line_len;
  std::size_t line_stride;
  // The two non-axis dimensions index the set of lines.
  std::size_t a_count, a_stride, b_count, b_stride;
  switch (axis) {
    case 0:
      line_len = nx;
      line_stride = sx;
      a_count = static_cast<std::size_t>(ny);
      a_stride = sy;
      b_count = static_cast<std::size_t>(nz);
      b_stride = sz;
      break;
    case 1:
      line_len = ny;
      line_stride = sy;
      a_count = static_cast<std::size_t>(nx);
      a_stride = sx;
      b_count = static_cast<std::size_t>(nz);
      b_stride = sz;
      break;
    default:
      line_len = nz;
      line_stride = sz;
      a_count = static_cast<std::size_t>(nx);
      a_stride = sx;
      b_count = static_cast<std::size_t>(ny);
      b_stride = sy;
      break;
  }

  const std::int64_t n_lines = static_cast<std::int64_t>(a_count * b_count);
  if (exec == Exec::Parallel) {
#pragma omp parallel
    {
      std::vector<double> scratch;
#pragma omp for schedule(static)
      for (std::int64_t line = 0; line < n_lines; ++line) {
        std::size_t a = static_cast<std::size_t>(line) % a_count;
        std::size_t b = static_cast<std::size_t>(line) / a_count;
        std::size_t base = a * a_stride + b * b_stride;
        convolve_line(in.data() + base, out.data() + base, line_len, line_stride, taps, anchor, scratch);
      }
    }
  } else {
    std::vector<double> scratch;
    for (std::int64_t line = 0; line < n_lines; ++line) {
      std::size_t a = static_cast<std::size_t>(line) % a_count;
      std::size_t b = static_cast<std::size_t>(line) / a_count;
      std::size_t base = a * a_stride + b * b_stride;
      convolve_line(in.data() + base, out.data() + base, line_len, line_stride, taps, anchor, scratch);
    }
  }
}

namespace {

inline double laplacian_at(const Dims& d, const double inv_sp2[3], std::span<const double> in, int x, int y, int z) {
  auto at = [&](int xi, int yi, int zi) {
    return in[static_cast<std::size_t>(xi) +
              static_cast<std::size_t>(d.nx) * (static_cast<std::size_t>(yi) + static_cast<std::size_t>(d.ny) * zi)];
  };
  const double c = at(x, y, z);
  double acc = 0.0;
  acc += (at(reflect_index(x - 1, d.nx), y, z) - 2.0 * c + at(reflect_index(x + 1, d.nx), y, z)) * inv_sp2[0];
  acc += (at(x, reflect_index(y - 1, d.ny), z) - 2.0 * c + at(x, reflect_index(y + 1, d.ny), z)) * inv_sp2[1];
  acc += (at(x, y, reflect_index(z - 1, d.nz)) - 2.0 * c + at(x, y, reflect_index(z + 1, d.nz))) * inv_sp2[2];
  return acc;
}

}  // namespace

void laplacian6(const Dims& dims, const Spacing& spacing, std::span<const double> in, std::span<double> out,
                Exec exec) {
  const double inv_sp2[3] = {1.0 / (spacing.sx * spacing.sx), 1.0 / (spacing.sy * spacing.sy),
                             1.0 / (spacing.sz * spacing.sz)};
  const std::int64_t nz = dims.nz;
  auto do_slab = [&](int z) {
    std::size_t idx = static_cast<std::size_t>(dims.nx) * dims.ny * static_cast<std::size_t>(z);
    for (int y = 0; y < dims.ny; ++y) {
      for (int x = 0; x < dims.nx; ++x, ++idx) {
        out[idx] = laplacian_at(dims, inv_sp2, in, x, y, z);
      }
    }
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t z = 0; z < nz; ++z) do_slab(static_cast<int>(z));
  } else {
    for (std::int64_t z = 0; z < nz; ++z) do_slab(static_cast<int>(z));
  }
}

double max_abs(std::span<const double> values, Exec exec) {
  const std::int64_t n = static_cast<std::int64_t>(values.size());
  double result = 0.0;
  if (exec == Exec::Parallel) {
#pragma omp parallel for reduction(max : result) schedule(static)
    for (std::int64_t i = 0; i < n; ++i) result = std::max(result, std::abs(values[static_cast<std::size_t>(i)]));
  } else {
    for (std::int64_t i = 0; i < n; ++i) result = std::max(result, std::abs(values[static_cast<std::size_t>(i)]));
  }
  return result;
}

}  // namespace lungrad
