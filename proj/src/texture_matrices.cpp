#include <algorithm>
#include <cmath>

#include "lungrad/texture.hpp"

namespace lungrad {

GrayVolume discretize(const VoxelVolume& volume, const LabelMask& mask, double bin_width) {
  if (!(bin_width > 0.0)) throw Error(ErrorCode::NonPositiveBinWidth, "bin_width must be > 0");
  return discretize(volume, mask, Discretization::fixed_width(bin_width));
}

GrayVolume discretize(const VoxelVolume& volume, const LabelMask& mask, const Discretization& disc) {
  validate_alignment(volume, mask);
  if (disc.mode == Discretization::Mode::FixedWidth && !(disc.bin_width > 0.0)) {
    throw Error(ErrorCode::NonPositiveBinWidth, "bin_width must be > 0");
  }
  if (disc.mode == Discretization::Mode::FixedCount && disc.bin_count < 1) {
    throw Error(ErrorCode::InvalidSpec, "bin_count must be >= 1");
  }

  const auto& values = volume.values();
  const auto& labels = mask.labels();
  double lo = 0.0, hi = 0.0;
  bool seen = false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (labels[i] == 0) continue;
    if (!seen) {
      lo = hi = values[i];
      seen = true;
    } else {
      lo = std::min(lo, values[i]);
      hi = std::max(hi, values[i]);
    }
  }
  if (!seen) throw Error(ErrorCode::EmptyMask, "cannot discretize an empty mask");

  GrayVolume gray;
  gray.dims = volume.dims();
  gray.spacing = volume.spacing();
  gray.bin_origin = lo;
  gray.levels.assign(values.size(), 0);

  if (hi == lo) {
    gray.ng = 1;
    gray.bin_width = disc.mode == Discretization::Mode::FixedWidth ? disc.bin_width : 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (labels[i] != 0) gray.levels[i] = 1;
    }
    return gray;
  }

  double width;
  int ng;
  if (disc.mode == Discretization::Mode::FixedWidth) {
    width = disc.bin_width;
    // The max value keeps its own bin when the range is an exact multiple
    // of the width, so ng is floor(range/width)+1 rather than ceil.
    ng = static_cast<int>(std::floor((hi - lo) / width)) + 1;
  } else {
    ng = disc.bin_count;
    width = (hi - lo) / ng;
  }
  gray.ng = ng;
  gray.bin_width = width;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (labels[i] == 0) continue;
    int level = static_cast<int>(std::floor((values[i] - lo) / width)) + 1;
    gray.levels[i] = std::clamp(level, 1, ng);
  }
  return gray;
}

const std::vector<std::array<int, 3>>& texture_directions() {
  // One representative per +-pair of the 26-neighborhood, ordered with the
  // z component dominant, then y, then x.
  static const std::vector<std::array<int, 3>> dirs = [] {
    std::vector<std::array<int, 3>> d;
    for (int dz = -1; dz <= 1; ++dz) {
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (dz > 0 || (dz == 0 && dy > 0) || (dz == 0 && dy == 0 && dx > 0)) {
            d.push_back({dx, dy, dz});
          }
        }
      }
    }
    return d;
  }();
  return dirs;
}

namespace {

inline bool in_bounds(const Dims& d, int x, int y, int z) {
  return x >= 0 && x < d.nx && y >= 0 && y < d.ny && z >= 0 && z < d.nz;
}

}  // namespace

std::vector<CountMatrix> glcm_matrices(const GrayVolume& gray) {
  const auto& dirs = texture_directions();
  const Dims& d = gray.dims;
  std::vector<CountMatrix> out(dirs.size());
  for (std::size_t di = 0; di < dirs.size(); ++di) {
    auto [dx, dy, dz] = dirs[di];
    CountMatrix m(static_cast<std::size_t>(gray.ng),
                  std::vector<std::int64_t>(static_cast<std::size_t>(gray.ng), 0));
    for (int z = 0; z < d.nz; ++z) {
      for (int y = 0; y < d.ny; ++y) {
        for (int x = 0; x < d.nx; ++x) {
          std::int32_t i = gray.at(x, y, z);
          if (i == 0) continue;
          int x2 = x + dx, y2 = y + dy, z2 = z + dz;
          if (!in_bounds(d, x2, y2, z2)) continue;
          std::int32_t j = gray.at(x2, y2, z2);
          if (j == 0) continue;
          ++m[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)];
          ++m[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(i - 1)];
        }
      }
    }
    out[di] = std::move(m);
  }
  return out;
}

std::vector<CountMatrix> glrlm_matrices(const GrayVolume& gray) {
  const auto& dirs = texture_directions();
  const Dims& d = gray.dims;
  std::vector<CountMatrix> out(dirs.size());
  const int max_len = std::max({d.nx, d.ny, d.nz});
  for (std::size_t di = 0; di < dirs.size(); ++di) {
    auto [dx, dy, dz] = dirs[di];
    CountMatrix m(static_cast<std::size_t>(gray.ng), std::vector<std::int64_t>(static_cast<std::size_t>(max_len), 0));
    int longest = 0;
    for (int z = 0; z < d.nz; ++z) {
      for (int y = 0; y < d.ny; ++y) {
        for (int x = 0; x < d.nx; ++x) {
          std::int32_t level = gray.at(x, y, z);
          if (level == 0) continue;
          // Only maximal runs count: skip unless this voxel starts the run.
          int px = x - dx, py = y - dy, pz = z - dz;
          if (in_bounds(d, px, py, pz) && gray.at(px, py, pz) == level) continue;
          int len = 1;
          int cx = x + dx, cy = y + dy, cz = z + dz;
          while (in_bounds(d, cx, cy, cz) && gray.at(cx, cy, cz) == level) {
            ++len;
            cx += dx;
            cy += dy;
            cz += dz;
          }
          ++m[static_cast<std::size_t>(level - 1)][static_cast<std::size_t>(len - 1)];
          longest = std::max(longest, len);
        }
      }
    }
    for (auto& row : m) row.resize(static_cast<std::size_t>(std::max(longest, 1)));
    out[di] = std::move(m);
  }
  return out;
}

CountMatrix glszm_matrix(const GrayVolume& gray) {
  const Dims& d = gray.dims;
  std::vector<char> visited(gray.levels.size(), 0);
  std::vector<std::pair<std::int32_t, std::int64_t>> zones;  // (level, size)
  std::vector<std::array<int, 3>> stack;
  std::int64_t max_size = 1;

  for (int z = 0; z < d.nz; ++z) {
    for (int y = 0; y < d.ny; ++y) {
      for (int x = 0; x < d.nx; ++x) {
        std::size_t idx0 = static_cast<std::size_t>(x) +
                           static_cast<std::size_t>(d.nx) * (static_cast<std::size_t>(y) + static_cast<std::size_t>(d.ny) * z);
        std::int32_t level = gray.levels[idx0];
        if (level == 0 || visited[idx0]) continue;
        visited[idx0] = 1;
        stack.clear();
        stack.push_back({x, y, z});
        std::int64_t size = 0;
        while (!stack.empty()) {
          auto [cx, cy, cz] = stack.back();
          stack.pop_back();
          ++size;
          for (int dz = -1; dz <= 1; ++dz) {
            for (int dy = -1; dy <= 1; ++dy) {
              for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0 && dz == 0) continue;
                int nx = cx + dx, ny = cy + dy, nz = cz + dz;
                if (!in_bounds(d, nx, ny, nz)) continue;
                std::size_t nidx = static_cast<std::size_t>(nx) +
                                   static_cast<std::size_t>(d.nx) *
                                       (static_cast<std::size_t>(ny) + static_cast<std::size_t>(d.ny) * nz);
                if (visited[nidx] || gray.levels[nidx] != level) continue;
                visited[nidx] = 1;
                stack.push_back({nx, ny, nz});
              }
            }
          }
        }
        zones.emplace_back(level, size);
        max_size = std::max(max_size, size);
      }
    }
  }

  CountMatrix m(static_cast<std::size_t>(gray.ng), std::vector<std::int64_t>(static_cast<std::size_t>(max_size), 0));
  for (auto [level, size] : zones) {
    ++m[static_cast<std::size_t>(level - 1)][static_cast<std::size_t>(size - 1)];
  }
  return m;
}

CountMatrix gldm_matrix(const GrayVolume& gray, int alpha) {
  const Dims& d = gray.dims;
  CountMatrix m(static_cast<std::size_t>(gray.ng), std::vector<std::int64_t>(27, 0));
  for (int z = 0; z < d.nz; ++z) {
    for (int y = 0; y < d.ny; ++y) {
      for (int x = 0; x < d.nx; ++x) {
        std::int32_t level = gray.at(x, y, z);
        if (level == 0) continue;
        int dep = 0;
        for (int dz = -1; dz <= 1; ++dz) {
          for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
              if (dx == 0 && dy == 0 && dz == 0) continue;
              int nx = x + dx, ny = y + dy, nz = z + dz;
              if (!in_bounds(d, nx, ny, nz)) continue;
              std::int32_t nl = gray.at(nx, ny, nz);
              if (nl == 0) continue;
              if (std::abs(nl - level) <= alpha) ++dep;
            }
          }
        }
        ++m[static_cast<std::size_t>(level - 1)][static_cast<std::size_t>(dep)];
      }
    }
  }
  return m;
}

NgtdmTable ngtdm_table(const GrayVolume& gray) {
  const Dims& d = gray.dims;
  NgtdmTable table;
  table.s.assign(static_cast<std::size_t>(gray.ng), 0.0);
  table.n.assign(static_cast<std::size_t>(gray.ng), 0);
  for (int z = 0; z < d.nz; ++z) {
    for (int y = 0; y < d.ny; ++y) {
      for (int x = 0; x < d.nx; ++x) {
        std::int32_t level = gray.at(x, y, z);
        if (level == 0) continue;
        double sum = 0.0;
        int count = 0;
        for (int dz = -1; dz <= 1; ++dz) {
          for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
              if (dx == 0 && dy == 0 && dz == 0) continue;
              int nx = x + dx, ny = y + dy, nz = z + dz;
              if (!in_bounds(d, nx, ny, nz)) continue;
              std::int32_t nl = gray.at(nx, ny, nz);
              if (nl == 0) continue;
              sum += nl;
              ++count;
            }
          }
        }
        if (count == 0) continue;  // voxels with no in-mask neighbor are excluded
        table.s[static_cast<std::size_t>(level - 1)] += std::abs(level - sum / count);
        ++table.n[static_cast<std::size_t>(level - 1)];
      }
    }
  }
  return table;
}

}  // namespace lungrad
