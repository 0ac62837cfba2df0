#include "lungrad/volume.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lungrad {

namespace {

void check_grid(const Dims& dims, const Spacing& spacing, std::size_t n_values) {
  if (dims.nx < 1 || dims.ny < 1 || dims.nz < 1) {
    std::ostringstream msg;
    msg << "dims (" << dims.nx << ", " << dims.ny << ", " << dims.nz << ") must all be >= 1";
    throw Error(ErrorCode::CorruptHeader, msg.str());
  }
  for (double s : {spacing.sx, spacing.sy, spacing.sz}) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw Error(ErrorCode::CorruptHeader, "spacing components must be finite and > 0");
    }
  }
  if (n_values != dims.voxel_count()) {
    throw Error(ErrorCode::CorruptHeader, "value count does not match dims");
  }
}

}  // namespace

VoxelVolume::VoxelVolume(Dims dims, Spacing spacing, std::vector<double> values, std::string frame_id)
    : dims_(dims), spacing_(spacing), values_(std::move(values)), frame_id_(std::move(frame_id)) {
  check_grid(dims_, spacing_, values_.size());
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteData, "volume contains NaN/Inf");
  }
}

LabelMask::LabelMask(Dims dims, Spacing spacing, std::vector<std::int32_t> labels, MaskSemantics semantics,
                     std::string frame_id)
    : dims_(dims), spacing_(spacing), labels_(std::move(labels)), semantics_(semantics), frame_id_(std::move(frame_id)) {
  check_grid(dims_, spacing_, labels_.size());
  const std::int32_t max_label = semantics_ == MaskSemantics::LobeMap ? 5 : 1;
  for (std::int32_t l : labels_) {
    if (l < 0 || l > max_label) {
      std::ostringstream msg;
      msg << "label " << l << " outside [0, " << max_label << "]";
      throw Error(ErrorCode::LabelOutOfRange, msg.str());
    }
  }
}

std::size_t LabelMask::nonzero_count() const {
  return static_cast<std::size_t>(std::count_if(labels_.begin(), labels_.end(), [](std::int32_t l) { return l != 0; }));
}

namespace {

bool spacing_close(double a, double b) {
  double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= kSpacingRelTol * scale;
}

}  // namespace

AlignmentToken validate_alignment(const VoxelVolume& volume, const std::vector<const LabelMask*>& masks) {
  for (const LabelMask* mask : masks) {
    if (mask->dims() != volume.dims()) {
      throw Error(ErrorCode::DimsMismatch, "mask dims differ from volume dims");
    }
    const Spacing& a = volume.spacing();
    const Spacing& b = mask->spacing();
    if (!spacing_close(a.sx, b.sx) || !spacing_close(a.sy, b.sy) || !spacing_close(a.sz, b.sz)) {
      throw Error(ErrorCode::SpacingMismatch, "mask spacing differs from volume spacing");
    }
    if (!volume.frame_id().empty() && !mask->frame_id().empty() && volume.frame_id() != mask->frame_id()) {
      throw Error(ErrorCode::FrameMismatch,
                  "frame '" + mask->frame_id() + "' does not match '" + volume.frame_id() + "'");
    }
  }
  return AlignmentToken{volume.dims(), volume.spacing(), volume.frame_id()};
}

AlignmentToken validate_alignment(const VoxelVolume& volume, const LabelMask& mask) {
  return validate_alignment(volume, std::vector<const LabelMask*>{&mask});
}

BoundingBox mask_bbox(const LabelMask& mask) {
  const Dims& d = mask.dims();
  BoundingBox box{d.nx, -1, d.ny, -1, d.nz, -1};
  const auto& labels = mask.labels();
  std::size_t idx = 0;
  for (int z = 0; z < d.nz; ++z) {
    for (int y = 0; y < d.ny; ++y) {
      for (int x = 0; x < d.nx; ++x, ++idx) {
        if (labels[idx] == 0) continue;
        box.x0 = std::min(box.x0, x);
        box.x1 = std::max(box.x1, x);
        box.y0 = std::min(box.y0, y);
        box.y1 = std::max(box.y1, y);
        box.z0 = std::min(box.z0, z);
        box.z1 = std::max(box.z1, z);
      }
    }
  }
  if (box.x1 < 0) throw Error(ErrorCode::EmptyMask, "mask has no nonzero voxel");
  return box;
}

std::pair<VoxelVolume, LabelMask> crop_to_mask_bbox(const VoxelVolume& volume, const LabelMask& mask,
                                                    int margin_voxels) {
  validate_alignment(volume, mask);
  BoundingBox box = mask_bbox(mask);
  const Dims& d = volume.dims();
  box.x0 = std::max(0, box.x0 - margin_voxels);
  box.y0 = std::max(0, box.y0 - margin_voxels);
  box.z0 = std::max(0, box.z0 - margin_voxels);
  box.x1 = std::min(d.nx - 1, box.x1 + margin_voxels);
  box.y1 = std::min(d.ny - 1, box.y1 + margin_voxels);
  box.z1 = std::min(d.nz - 1, box.z1 + margin_voxels);

  Dims cd{box.x1 - box.x0 + 1, box.y1 - box.y0 + 1, box.z1 - box.z0 + 1};
  std::vector<double> values(cd.voxel_count());
  std::vector<std::int32_t> labels(cd.voxel_count());
  std::size_t out = 0;
  for (int z = box.z0; z <= box.z1; ++z) {
    for (int y = box.y0; y <= box.y1; ++y) {
      for (int x = box.x0; x <= box.x1; ++x, ++out) {
        std::size_t in = volume.index(x, y, z);
        values[out] = volume.values()[in];
        labels[out] = mask.labels()[in];
      }
    }
  }
  return {VoxelVolume(cd, volume.spacing(), std::move(values), volume.frame_id()),
          LabelMask(cd, mask.spacing(), std::move(labels), mask.semantics(), mask.frame_id())};
}

}  // namespace lungrad
