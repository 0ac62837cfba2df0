#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lungrad/clinical.hpp"
#include "lungrad/features.hpp"
#include "lungrad/volume.hpp"

namespace lungrad {

/// Phantom cohort: ellipsoidal 5-lobe lungs with planted opacity blobs whose
/// per-component volumes are tallied exhaustively during construction, plus
/// a clinical table. Labels follow a logistic model over declared features.
struct PhantomSpec {
  int n_subjects = 60;
  Dims dims{48, 48, 32};
  Spacing spacing{1.0, 1.0, 1.0};
  std::uint64_t seed = 0;

  // Opacity blobs: per-subject severity in [0,1] scales the blob volume
  // between these bounds (as a fraction of the lung volume).
  double blob_fraction_min = 0.02;
  double blob_fraction_max = 0.35;
  bool plant_consolidation = true;  // add a HU3-band blob for severe subjects

  // Label model: logit = bias + severity_effect*(2*severity-1)
  //                    + age_effect*z_age + spo2_effect*z_spo2
  double bias = 0.0;
  double severity_effect = 6.0;
  double age_effect = 1.0;
  double spo2_effect = -1.0;

  double missing_rate = 0.10;  // MCAR missingness for temperature/spo2

  /// Exact voxel count for the first blob of every subject (0 = off); used
  /// by oracle tests that need a planted component of known volume.
  std::int64_t exact_blob_voxels = 0;
};

struct PhantomSubject {
  std::string id;
  VoxelVolume volume;
  LabelMask lobes;
  LabelMask opacity;
  /// Ground truth tallied voxel-by-voxel during painting (independent of
  /// the hlq module): counts[roi][band] over the 8 ROIs and 4 HU bands,
  /// and opacity_counts[roi][band] for the opacity intersection.
  std::array<std::array<std::int64_t, 4>, 8> component_counts{};
  std::array<std::array<std::int64_t, 4>, 8> opacity_counts{};
  double severity = 0.0;
  int label = 0;
};

struct PhantomCohort {
  std::vector<PhantomSubject> subjects;
  ClinicalTable clinical;
};

PhantomCohort synth_cohort(const PhantomSpec& spec);

/// Writes volumes/masks (.nii.gz), clinical.csv, manifest.json and
/// ground_truth.json under dir. Returns the manifest path.
std::string write_cohort(const PhantomCohort& cohort, const std::string& dir);

/// Tabular synthetic cohort: standard-normal noise columns; each
/// informative column is shifted by `effect` for positive subjects.
/// Labels are balanced Bernoulli(0.5).
struct TabularCohort {
  FeatureTable features;
  std::vector<int> labels;
};

TabularCohort make_tabular_cohort(std::size_t n, std::size_t d, const std::vector<std::size_t>& informative,
                                  double effect, std::uint64_t seed);

}  // namespace lungrad
