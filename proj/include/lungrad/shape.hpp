#pragma once

#include <array>
#include <vector>

#include "lungrad/features.hpp"
#include "lungrad/volume.hpp"

namespace lungrad {

struct TriangleMesh {
  std::vector<std::array<double, 3>> vertices;   // physical mm coordinates
  std::vector<std::array<std::size_t, 3>> triangles;
};

/// Marching-cubes surface of the nonzero-label region at iso-level 0.5.
/// Voxel centers sit at index*spacing; the grid is zero-padded so surfaces
/// close at the volume border.
TriangleMesh marching_cubes_mask(const LabelMask& mask);

double mesh_volume(const TriangleMesh& mesh);
double mesh_surface_area(const TriangleMesh& mesh);

/// The 17 3D shape features: MeshVolume, VoxelVolume, SurfaceArea,
/// SurfaceVolumeRatio, Sphericity, Compactness1, Compactness2,
/// SphericalDisproportion, Maximum3DDiameter, Maximum2DDiameter{Slice,
/// Column,Row}, Major/Minor/LeastAxisLength, Elongation, Flatness.
FeatureVector shape_features(const LabelMask& mask);

const std::vector<std::string>& shape_feature_names();

}  // namespace lungrad
