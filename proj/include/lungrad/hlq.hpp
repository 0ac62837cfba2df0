#pragma once

#include <array>
#include <string>
#include <vector>

#include "lungrad/features.hpp"
#include "lungrad/volume.hpp"

namespace lungrad {

/// Four half-open HU bands: (-inf, -750), [-750, -300), [-300, 50),
/// [50, +inf) -- normal lung, ground glass opacity, consolidation,
/// calcification. Boundary values belong to the upper band.
struct HuPartition {
  static constexpr std::array<double, 3> boundaries = {-750.0, -300.0, 50.0};

  /// 1-based band index for a HU value.
  static int band(double hu) {
    if (hu < boundaries[0]) return 1;
    if (hu < boundaries[1]) return 2;
    if (hu < boundaries[2]) return 3;
    return 4;
  }
};

/// Binary voxel selection over an aligned grid.
struct BinaryRoi {
  std::vector<std::uint8_t> in;

  std::size_t count() const;
};

/// The 8 regions of interest: whole lung, left/right lung, lobes 1-5.
/// Right lung = lobes 1-3, left lung = lobes 4-5.
struct RoiSet {
  static constexpr int kCount = 8;
  std::array<BinaryRoi, kCount> rois;

  static const std::array<std::string, kCount>& names();
};

RoiSet build_rois(const LabelMask& lobe_mask);

/// Voxels of `roi` whose HU falls in band hu_index (1..4).
BinaryRoi component_mask(const VoxelVolume& volume, const BinaryRoi& roi, int hu_index);

/// Volume of pulmonary opacities: |component AND opacity| * voxel volume (mm^3).
double vpo(const LabelMask& opacity_mask, const BinaryRoi& component, const Spacing& spacing);

/// Ratio of pulmonary opacities: vpo / component volume; 0 for an empty component.
double rpo(const LabelMask& opacity_mask, const BinaryRoi& component, const Spacing& spacing);

/// The 64 hierarchical lobe-wise quantification features, named
/// "<ROI> VPO HU<k>" / "<ROI> RPO HU<k>", ROI-major then band then kind.
FeatureVector extract_hlq(const VoxelVolume& volume, const LabelMask& lobe_mask, const LabelMask& opacity_mask);

std::vector<std::string> hlq_feature_names();

}  // namespace lungrad
