#pragma once

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "lungrad/rng.hpp"
#include "lungrad/volume.hpp"

namespace lungrad::test {

inline VoxelVolume random_volume(Dims dims, Spacing spacing, std::uint64_t seed, double lo = -1000.0,
                                 double hi = 400.0) {
  SplitMix64 rng(seed);
  std::vector<double> values(dims.voxel_count());
  for (double& v : values) v = lo + (hi - lo) * rng.next_double();
  return VoxelVolume(dims, spacing, std::move(values), "test");
}

inline LabelMask random_binary_mask(Dims dims, Spacing spacing, std::uint64_t seed, double density = 0.5) {
  SplitMix64 rng(seed);
  std::vector<std::int32_t> labels(dims.voxel_count());
  bool any = false;
  for (auto& l : labels) {
    l = rng.next_double() < density ? 1 : 0;
    any = any || l;
  }
  if (!any) labels[0] = 1;
  return LabelMask(dims, spacing, std::move(labels), MaskSemantics::BinaryOpacity, "test");
}

inline LabelMask full_mask(Dims dims, Spacing spacing) {
  return LabelMask(dims, spacing, std::vector<std::int32_t>(dims.voxel_count(), 1), MaskSemantics::BinaryOpacity,
                   "test");
}

inline bool close_rel(double a, double b, double tol) {
  double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) <= tol * scale || std::abs(a - b) <= tol;
}

/// Unique scratch directory under the build tree.
inline std::string scratch_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("lungrad_test_" + tag);
  std::filesystem::create_directories(dir);
  return dir.string();
}

}  // namespace lungrad::test
