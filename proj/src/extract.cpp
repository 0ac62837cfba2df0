#include <sstream>

#include "lungrad/shape.hpp"
#include "lungrad/texture.hpp"

namespace lungrad {

namespace {

/// The 93 texture features for one filtered variant, in family order.
std::vector<double> texture_block(const VoxelVolume& filtered, const LabelMask& mask, const Discretization& disc,
                                  int gldm_alpha) {
  std::vector<double> out;
  out.reserve(93);
  FeatureVector fo = first_order_features(filtered, mask, disc);
  out.insert(out.end(), fo.values.begin(), fo.values.end());
  GrayVolume gray = discretize(filtered, mask, disc);
  for (const FeatureVector& fv :
       {glcm_features(gray), glrlm_features(gray), glszm_features(gray), ngtdm_features(gray),
        gldm_features(gray, gldm_alpha)}) {
    out.insert(out.end(), fv.values.begin(), fv.values.end());
  }
  return out;
}

}  // namespace

std::vector<std::string> wlr_feature_names() {
  std::vector<std::string> names;
  names.reserve(1691);
  for (const auto& n : shape_feature_names()) names.push_back("Original-Shape-" + n);
  struct Family {
    const char* tag;
    const std::vector<std::string>* features;
  };
  const Family families[] = {{"FirstOrder", &first_order_feature_names()}, {"GLCM", &glcm_feature_names()},
                             {"GLRLM", &glrlm_feature_names()},            {"GLSZM", &glszm_feature_names()},
                             {"NGTDM", &ngtdm_feature_names()},            {"GLDM", &gldm_feature_names()}};
  for (const FilterSpec& spec : enumerate_filter_bank()) {
    std::string prefix = spec.canonical_name();
    for (const auto& fam : families) {
      for (const auto& f : *fam.features) {
        names.push_back(prefix + "-" + fam.tag + "-" + f);
      }
    }
  }
  return names;
}

FeatureVector extract_wlr(const VoxelVolume& volume, const LabelMask& opacity_mask, const WlrConfig& config) {
  validate_alignment(volume, opacity_mask);
  // Crop to the mask bounding box: bounds matrix cost and makes the result
  // independent of context outside the masked region.
  auto [cropped, mask] = crop_to_mask_bbox(volume, opacity_mask, 0);

  const std::vector<FilterSpec> bank = enumerate_filter_bank();
  std::vector<std::vector<double>> blocks(bank.size());

  const std::int64_t n_jobs = static_cast<std::int64_t>(bank.size());
  std::exception_ptr failure;
  // Filter variants are independent; inner kernels run serially so results
  // do not depend on the thread count.
#pragma omp parallel for schedule(dynamic) if (config.parallel)
  for (std::int64_t j = 0; j < n_jobs; ++j) {
    try {
      const FilterSpec& spec = bank[static_cast<std::size_t>(j)];
      VoxelVolume filtered = apply_filter(cropped, spec, Exec::Serial);
      const Discretization& disc =
          spec.kind == FilterKind::Original ? config.original_disc : config.filtered_disc;
      blocks[static_cast<std::size_t>(j)] = texture_block(filtered, mask, disc, config.gldm_alpha);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  FeatureVector out;
  out.names = wlr_feature_names();
  out.values.reserve(out.names.size());
  FeatureVector shape = shape_features(mask);
  out.values.insert(out.values.end(), shape.values.begin(), shape.values.end());
  for (const auto& block : blocks) {
    out.values.insert(out.values.end(), block.begin(), block.end());
  }
  return out;
}

std::string feature_dictionary_markdown() {
  std::ostringstream doc;
  doc << "# Feature dictionary\n\n";
  doc << "All 1691 whole-lung radiomics feature names, in extraction order, with the\n"
         "conventions they are computed under. Names follow `<filter>-<family>-<feature>`.\n\n";
  doc << "## Conventions\n\n";
  doc << "- Internal scalar type: 64-bit float. Grids are x-fastest with voxel centers\n"
         "  at `index * spacing` (mm).\n";
  doc << "- The volume is cropped to the opacity-mask bounding box before any filtering,\n"
         "  so every feature depends only on the masked region and spacing.\n";
  doc << "- Discretization: `level = floor((x - min_masked)/width) + 1`. The original\n"
         "  image uses a fixed bin width (default 25 HU); filtered images use a fixed\n"
         "  bin count (default 32 equal-width bins over the masked range). A constant\n"
         "  region gets a single level.\n";
  doc << "- Intensity filters (max = max|x| over the volume; all are the identity when\n"
         "  max = 0): Square `x^2/max`; Sqrt `sign(x)*sqrt(max*|x|)`; Logarithm\n"
         "  `sign(x)*log(|x|+1)` rescaled so the output max equals max; Exponential\n"
         "  `exp(x*ln(max)/max)`.\n";
  doc << "- LoG: Gaussian smoothing with physical sigma (mm), per-axis taps truncated at\n"
         "  radius `ceil(4*sigma/spacing)` and renormalized, then the 6-neighbor Laplacian\n"
         "  scaled by 1/spacing^2 per axis. Boundaries reflect symmetrically (edge sample\n"
         "  repeated).\n";
  doc << "- Wavelet: single-level undecimated separable transform, Coiflet-1 analysis\n"
         "  filters, symmetric reflection, tap offsets -2..3. Sub-band letter i applies\n"
         "  L or H along axis i in (x, y, z) order.\n";
  doc << "- Texture matrices use the 13 unique distance-1 3D directions; GLCM and GLRLM\n"
         "  features are computed per direction and averaged (GLCM directions without any\n"
         "  voxel pair are skipped; if none has a pair the constant-region values apply).\n";
  doc << "- GLSZM zones and NGTDM/GLDM neighborhoods use 26-connectivity; GLDM alpha\n"
         "  defaults to 0; the GLDM column index is dependence+1.\n";
  doc << "- Entropies use log base 2 and skip zero cells. Percentiles interpolate\n"
         "  linearly between closest ranks. StandardDeviation/Variance/Skewness/Kurtosis\n"
         "  are population moments; Kurtosis is non-excess (3 for a Gaussian); skewness\n"
         "  and kurtosis of a constant region are 0 by convention.\n";
  doc << "- Degenerate conventions: GLCM Correlation and MCC are 1 when only one gray\n"
         "  level is present; Imc1/Imc2/InverseVariance fall back to 0; NGTDM features\n"
         "  with a zero denominator are 0, except Coarseness which is capped at 1e6;\n"
         "  Elongation/Flatness are 1 for a degenerate (single-voxel) covariance.\n";
  doc << "- Shape: marching-cubes surface of the binary mask at iso-level 0.5 (vertices\n"
         "  at voxel-edge midpoints, mask padded by one voxel so surfaces close at the\n"
         "  border; ambiguous faces always separate the inside corners). MeshVolume via\n"
         "  the divergence theorem; Maximum2DDiameter{Slice,Column,Row} are the largest\n"
         "  vertex distances within planes of equal z, y, x respectively; axis lengths\n"
         "  are 4*sqrt(eigenvalue) of the voxel-coordinate covariance.\n\n";
  doc << "## Names\n\n";
  int i = 0;
  for (const auto& name : wlr_feature_names()) {
    doc << ++i << ". `" << name << "`\n";
  }
  return doc.str();
}

}  // namespace lungrad
