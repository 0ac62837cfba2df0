#pragma once

#include <string>

#include "lungrad/volume.hpp"

namespace lungrad {

/// Scalar storage types supported on disk.
enum class ScalarType { UInt8, Int16, Int32, Float32, Float64 };

/// Loads a volume from NIfTI-1 (.nii / .nii.gz) or the raw format
/// (<stem>.bin + <stem>.json sidecar; pass either file). Integer storage
/// widens to double; scl_slope / scl_inter are honored on NIfTI read.
VoxelVolume load_volume(const std::string& path);

/// As load_volume, then validates labels against the given semantics.
LabelMask load_mask(const std::string& path, MaskSemantics semantics);

/// Writes NIfTI-1, optionally gzip-compressed when the path ends in .gz.
/// frame_id is stored in the descrip field and recovered on read.
void save_volume_nifti(const VoxelVolume& volume, const std::string& path, ScalarType dtype = ScalarType::Float64);
void save_mask_nifti(const LabelMask& mask, const std::string& path);

/// Writes <stem>.bin + <stem>.json (pass the .bin or .json path, or the stem).
void save_volume_raw(const VoxelVolume& volume, const std::string& path, ScalarType dtype = ScalarType::Float64);
void save_mask_raw(const LabelMask& mask, const std::string& path);

}  // namespace lungrad
