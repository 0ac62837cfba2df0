#pragma once

#include <cstdint>
#include <vector>

#include "lungrad/features.hpp"
#include "lungrad/filterbank.hpp"
#include "lungrad/volume.hpp"

namespace lungrad {

/// Gray-level discretization of masked intensities. Levels are 1..ng inside
/// the mask, 0 outside.
struct GrayVolume {
  Dims dims;
  Spacing spacing;
  std::vector<std::int32_t> levels;
  int ng = 0;
  double bin_width = 0.0;
  double bin_origin = 0.0;  // lowest masked intensity

  std::int32_t at(int x, int y, int z) const {
    return levels[static_cast<std::size_t>(x) +
                  static_cast<std::size_t>(dims.nx) * (static_cast<std::size_t>(y) + static_cast<std::size_t>(dims.ny) * z)];
  }
};

/// Gray-level binning rule. FixedWidth bins the masked range with a given
/// HU width (default for the unfiltered image); FixedCount spreads a fixed
/// number of bins over the masked range (default for filtered images, whose
/// ranges vary wildly).
struct Discretization {
  enum class Mode { FixedWidth, FixedCount };
  Mode mode = Mode::FixedWidth;
  double bin_width = 25.0;
  int bin_count = 32;

  static Discretization fixed_width(double w) { return {Mode::FixedWidth, w, 0}; }
  static Discretization fixed_count(int n) { return {Mode::FixedCount, 0.0, n}; }
};

/// level(v) = floor((x(v) - min_masked) / bin_width) + 1; the max value gets
/// one bin of its own when the range is an exact multiple of the width.
GrayVolume discretize(const VoxelVolume& volume, const LabelMask& mask, double bin_width);
GrayVolume discretize(const VoxelVolume& volume, const LabelMask& mask, const Discretization& disc);

/// The 13 unique distance-1 direction offsets of the 26-neighborhood
/// (one representative per +-pair), in a fixed documented order.
const std::vector<std::array<int, 3>>& texture_directions();

using CountMatrix = std::vector<std::vector<std::int64_t>>;  // [level-1][second index]

/// Symmetric co-occurrence counts per direction; matrix is ng x ng.
std::vector<CountMatrix> glcm_matrices(const GrayVolume& gray);
/// Run-length counts per direction; matrix is ng x max_run_length.
std::vector<CountMatrix> glrlm_matrices(const GrayVolume& gray);
/// Zone-size counts over 26-connected equal-level zones; ng x max_zone_size.
CountMatrix glszm_matrix(const GrayVolume& gray);
/// Dependence counts (alpha level tolerance); ng x 27 columns indexed by
/// dependence+1.
CountMatrix gldm_matrix(const GrayVolume& gray, int alpha);

struct NgtdmTable {
  std::vector<double> s;        // per-level summed |i - neighborhood mean|
  std::vector<std::int64_t> n;  // per-level count of valid voxels
};
/// 26-neighborhood gray-tone difference sums; voxels with no in-mask
/// neighbor are excluded.
NgtdmTable ngtdm_table(const GrayVolume& gray);

FeatureVector first_order_features(const VoxelVolume& volume, const LabelMask& mask,
                                   const Discretization& entropy_disc = {});
FeatureVector glcm_features(const GrayVolume& gray);
FeatureVector glrlm_features(const GrayVolume& gray);
FeatureVector glszm_features(const GrayVolume& gray);
FeatureVector ngtdm_features(const GrayVolume& gray);
FeatureVector gldm_features(const GrayVolume& gray, int alpha = 0);

/// Family feature-name lists (canonical order).
const std::vector<std::string>& first_order_feature_names();
const std::vector<std::string>& glcm_feature_names();
const std::vector<std::string>& glrlm_feature_names();
const std::vector<std::string>& glszm_feature_names();
const std::vector<std::string>& ngtdm_feature_names();
const std::vector<std::string>& gldm_feature_names();

struct WlrConfig {
  Discretization original_disc = Discretization::fixed_width(25.0);
  Discretization filtered_disc = Discretization::fixed_count(32);
  int gldm_alpha = 0;
  bool parallel = true;  // parallelize across the 18 filter variants
};

/// The full whole-lung radiomics bank: 17 shape features on the mask plus
/// 93 texture features (18 first-order + 24 GLCM + 16 GLRLM + 16 GLSZM +
/// 5 NGTDM + 14 GLDM) for each of the 18 filter variants; 1691 values named
/// `<filter>-<family>-<feature>`. The volume is cropped to the mask bounding
/// box before filtering, so results depend only on the masked region.
FeatureVector extract_wlr(const VoxelVolume& volume, const LabelMask& opacity_mask, const WlrConfig& config = {});

/// All 1691 names in extraction order.
std::vector<std::string> wlr_feature_names();

/// Markdown document listing every feature with its formula conventions.
std::string feature_dictionary_markdown();

}  // namespace lungrad
