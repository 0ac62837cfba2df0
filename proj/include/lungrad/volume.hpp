#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "lungrad/error.hpp"

namespace lungrad {

struct Dims {
  int nx = 0, ny = 0, nz = 0;

  bool operator==(const Dims&) const = default;
  std::size_t voxel_count() const {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) * static_cast<std::size_t>(nz);
  }
};

struct Spacing {
  double sx = 1.0, sy = 1.0, sz = 1.0;

  bool operator==(const Spacing&) const = default;
  double voxel_volume() const { return sx * sy * sz; }
};

/// 3D scalar grid (HU or filtered intensity), x-fastest storage.
class VoxelVolume {
 public:
  VoxelVolume() = default;
  VoxelVolume(Dims dims, Spacing spacing, std::vector<double> values, std::string frame_id = {});

  const Dims& dims() const { return dims_; }
  const Spacing& spacing() const { return spacing_; }
  const std::string& frame_id() const { return frame_id_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& mutable_values() { return values_; }

  std::size_t index(int x, int y, int z) const {
    return static_cast<std::size_t>(x) +
           static_cast<std::size_t>(dims_.nx) * (static_cast<std::size_t>(y) + static_cast<std::size_t>(dims_.ny) * z);
  }
  double at(int x, int y, int z) const { return values_[index(x, y, z)]; }

 private:
  Dims dims_;
  Spacing spacing_;
  std::vector<double> values_;
  std::string frame_id_;
};

enum class MaskSemantics { LobeMap, BinaryOpacity };

/// Integer-labeled grid aligned with a VoxelVolume.
/// LobeMap: 0 background, 1..5 lobes. BinaryOpacity: 0/1.
class LabelMask {
 public:
  LabelMask() = default;
  LabelMask(Dims dims, Spacing spacing, std::vector<std::int32_t> labels, MaskSemantics semantics,
            std::string frame_id = {});

  const Dims& dims() const { return dims_; }
  const Spacing& spacing() const { return spacing_; }
  const std::string& frame_id() const { return frame_id_; }
  MaskSemantics semantics() const { return semantics_; }
  const std::vector<std::int32_t>& labels() const { return labels_; }

  std::size_t index(int x, int y, int z) const {
    return static_cast<std::size_t>(x) +
           static_cast<std::size_t>(dims_.nx) * (static_cast<std::size_t>(y) + static_cast<std::size_t>(dims_.ny) * z);
  }
  std::int32_t at(int x, int y, int z) const { return labels_[index(x, y, z)]; }

  std::size_t nonzero_count() const;

 private:
  Dims dims_;
  Spacing spacing_;
  std::vector<std::int32_t> labels_;
  MaskSemantics semantics_ = MaskSemantics::BinaryOpacity;
  std::string frame_id_;
};

/// Proof that a volume and its masks share one grid; extraction entry points
/// revalidate internally, so the token is mostly useful for early failure.
struct AlignmentToken {
  Dims dims;
  Spacing spacing;
  std::string frame_id;
};

/// Relative spacing tolerance for alignment checks.
inline constexpr double kSpacingRelTol = 1e-6;

AlignmentToken validate_alignment(const VoxelVolume& volume, const std::vector<const LabelMask*>& masks);
AlignmentToken validate_alignment(const VoxelVolume& volume, const LabelMask& mask);

struct BoundingBox {
  int x0 = 0, x1 = 0;  // inclusive
  int y0 = 0, y1 = 0;
  int z0 = 0, z1 = 0;
};

/// Tight bounding box of nonzero labels; throws EmptyMask.
BoundingBox mask_bbox(const LabelMask& mask);

/// Crops both grids to the nonzero-label bounding box dilated by
/// margin_voxels, clamped to the volume bounds.
std::pair<VoxelVolume, LabelMask> crop_to_mask_bbox(const VoxelVolume& volume, const LabelMask& mask,
                                                    int margin_voxels);

}  // namespace lungrad
