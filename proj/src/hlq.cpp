#include "lungrad/hlq.hpp"

#include <algorithm>

namespace lungrad {

std::size_t BinaryRoi::count() const {
  return static_cast<std::size_t>(std::count(in.begin(), in.end(), std::uint8_t{1}));
}

const std::array<std::string, RoiSet::kCount>& RoiSet::names() {
  static const std::array<std::string, kCount> n = {"Whole Lung", "Left Lung", "Right Lung", "Lobe#1",
                                                    "Lobe#2",     "Lobe#3",    "Lobe#4",     "Lobe#5"};
  return n;
}

RoiSet build_rois(const LabelMask& lobe_mask) {
  if (lobe_mask.semantics() != MaskSemantics::LobeMap) {
    throw Error(ErrorCode::InvalidSpec, "build_rois requires LobeMap semantics");
  }
  const auto& labels = lobe_mask.labels();
  RoiSet set;
  for (auto& roi : set.rois) roi.in.assign(labels.size(), 0);
  bool any = false;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    std::int32_t l = labels[i];
    if (l == 0) continue;
    any = true;
    set.rois[0].in[i] = 1;                                    // whole lung
    set.rois[l >= 4 ? 1 : 2].in[i] = 1;                       // left = lobes 4-5, right = lobes 1-3
    set.rois[static_cast<std::size_t>(2 + l)].in[i] = 1;      // Lobe#l
  }
  if (!any) throw Error(ErrorCode::EmptyMask, "lobe mask has no labeled voxel");
  return set;
}

BinaryRoi component_mask(const VoxelVolume& volume, const BinaryRoi& roi, int hu_index) {
  if (hu_index < 1 || hu_index > 4) throw Error(ErrorCode::InvalidSpec, "hu_index must be 1..4");
  if (roi.in.size() != volume.values().size()) {
    throw Error(ErrorCode::DimsMismatch, "roi grid does not match volume grid");
  }
  BinaryRoi out;
  out.in.assign(roi.in.size(), 0);
  for (std::size_t i = 0; i < roi.in.size(); ++i) {
    if (roi.in[i] && HuPartition::band(volume.values()[i]) == hu_index) out.in[i] = 1;
  }
  return out;
}

namespace {

std::size_t intersection_count(const LabelMask& opacity_mask, const BinaryRoi& component) {
  if (component.in.size() != opacity_mask.labels().size()) {
    throw Error(ErrorCode::DimsMismatch, "component grid does not match opacity grid");
  }
  std::size_t n = 0;
  for (std::size_t i = 0; i < component.in.size(); ++i) {
    if (component.in[i] && opacity_mask.labels()[i] != 0) ++n;
  }
  return n;
}

}  // namespace

double vpo(const LabelMask& opacity_mask, const BinaryRoi& component, const Spacing& spacing) {
  return static_cast<double>(intersection_count(opacity_mask, component)) * spacing.voxel_volume();
}

double rpo(const LabelMask& opacity_mask, const BinaryRoi& component, const Spacing& /*spacing cancels*/) {
  std::size_t denom = component.count();
  if (denom == 0) return 0.0;
  return static_cast<double>(intersection_count(opacity_mask, component)) / static_cast<double>(denom);
}

std::vector<std::string> hlq_feature_names() {
  std::vector<std::string> names;
  names.reserve(64);
  for (const auto& roi : RoiSet::names()) {
    for (int hu = 1; hu <= 4; ++hu) {
      names.push_back(roi + " VPO HU" + std::to_string(hu));
      names.push_back(roi + " RPO HU" + std::to_string(hu));
    }
  }
  return names;
}

FeatureVector extract_hlq(const VoxelVolume& volume, const LabelMask& lobe_mask, const LabelMask& opacity_mask) {
  validate_alignment(volume, {&lobe_mask, &opacity_mask});
  RoiSet rois = build_rois(lobe_mask);
  FeatureVector out;
  out.names = hlq_feature_names();
  out.values.reserve(64);
  for (const auto& roi : rois.rois) {
    for (int hu = 1; hu <= 4; ++hu) {
      BinaryRoi component = component_mask(volume, roi, hu);
      out.values.push_back(vpo(opacity_mask, component, volume.spacing()));
      out.values.push_back(rpo(opacity_mask, component, volume.spacing()));
    }
  }
  return out;
}

}  // namespace lungrad
