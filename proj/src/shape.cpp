#include "lungrad/shape.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <unordered_map>

namespace lungrad {

namespace {

// Cube corners are indexed cx + 2*cy + 4*cz. Cube edges are indexed by
// their axis and the two fixed coordinates of the remaining axes (cyclic
// order: axis a pairs with (u, v) = (a+1, a+2) mod 3):
//   edge_id = 4*a + 2*cv + cu
// A crossing vertex sits at the edge midpoint.
struct EdgeInfo {
  int axis;
  int cu, cv;  // coordinates along the two non-axis axes
};

constexpr int other_u(int axis) { return (axis + 1) % 3; }
constexpr int other_v(int axis) { return (axis + 2) % 3; }

int corner_coord(int corner, int axis) { return (corner >> axis) & 1; }

int edge_between(int c0, int c1) {
  int diff = c0 ^ c1;
  int axis = diff == 1 ? 0 : diff == 2 ? 1 : 2;
  int cu = corner_coord(c0, other_u(axis));
  int cv = corner_coord(c0, other_v(axis));
  return 4 * axis + 2 * cv + cu;
}

EdgeInfo edge_info(int edge_id) {
  EdgeInfo info;
  info.axis = edge_id / 4;
  info.cu = edge_id & 1;
  info.cv = (edge_id >> 1) & 1;
  return info;
}

/// Per-configuration triangle lists (edge-id triples), generated once from
/// marching squares on each cube face. Faces are walked CCW as seen from
/// outside the cube; on a face, each maximal run of inside corners is cut
/// off by a segment from its last exit crossing back to its first entry
/// crossing (backward pairing). This resolves ambiguous faces by always
/// separating the inside corners, identically from both neighboring cubes,
/// so the global mesh is watertight and consistently oriented.
struct CaseTable {
  std::array<std::vector<std::array<int, 3>>, 256> triangles;
};

const CaseTable& case_table() {
  static const CaseTable table = [] {
    CaseTable t;
    for (int config = 0; config < 256; ++config) {
      auto inside = [&](int corner) { return (config >> corner) & 1; };

      // Directed boundary segments (from-edge -> to-edge) over all 6 faces.
      std::array<int, 12> next_edge;
      next_edge.fill(-1);
      for (int n = 0; n < 3; ++n) {
        for (int s = 0; s < 2; ++s) {
          // Polygon corners CCW viewed from outside the cube.
          int u = other_u(n), v = other_v(n);
          std::array<int, 4> quad;
          auto corner_of = [&](int cu, int cv) { return (s << n) | (cu << u) | (cv << v); };
          if (s == 1) {
            quad = {corner_of(0, 0), corner_of(1, 0), corner_of(1, 1), corner_of(0, 1)};
          } else {
            quad = {corner_of(0, 0), corner_of(0, 1), corner_of(1, 1), corner_of(1, 0)};
          }
          // Classify the 4 polygon edges.
          std::array<int, 4> kind;  // 0 none, 1 exit (in->out), 2 entry (out->in)
          for (int e = 0; e < 4; ++e) {
            bool a = inside(quad[static_cast<std::size_t>(e)]);
            bool b = inside(quad[static_cast<std::size_t>((e + 1) % 4)]);
            kind[static_cast<std::size_t>(e)] = a == b ? 0 : (a ? 1 : 2);
          }
          for (int e = 0; e < 4; ++e) {
            if (kind[static_cast<std::size_t>(e)] != 1) continue;
            for (int back = 1; back <= 3; ++back) {
              int e2 = (e - back + 4) % 4;
              if (kind[static_cast<std::size_t>(e2)] == 2) {
                int from = edge_between(quad[static_cast<std::size_t>(e)], quad[static_cast<std::size_t>((e + 1) % 4)]);
                int to = edge_between(quad[static_cast<std::size_t>(e2)], quad[static_cast<std::size_t>((e2 + 1) % 4)]);
                next_edge[static_cast<std::size_t>(from)] = to;
                break;
              }
            }
          }
        }
      }

      // Chain segments into closed loops and fan-triangulate.
      std::array<bool, 12> used{};
      for (int start = 0; start < 12; ++start) {
        if (next_edge[static_cast<std::size_t>(start)] < 0 || used[static_cast<std::size_t>(start)]) continue;
        std::vector<int> loop;
        int cur = start;
        do {
          loop.push_back(cur);
          used[static_cast<std::size_t>(cur)] = true;
          cur = next_edge[static_cast<std::size_t>(cur)];
        } while (cur != start);
        for (std::size_t i = 1; i + 1 < loop.size(); ++i) {
          t.triangles[static_cast<std::size_t>(config)].push_back({loop[0], loop[i], loop[i + 1]});
        }
      }
    }
    return t;
  }();
  return table;
}

}  // namespace

TriangleMesh marching_cubes_mask(const LabelMask& mask) {
  const Dims& d = mask.dims();
  const Spacing& sp = mask.spacing();
  const auto& table = case_table();

  TriangleMesh mesh;
  // Keys are doubled index-space coordinates (+2 offset for the pad), so
  // vertices on shared cube edges dedupe exactly.
  std::unordered_map<std::uint64_t, std::size_t> vertex_ids;

  auto mask_at = [&](int x, int y, int z) -> int {
    if (x < 0 || x >= d.nx || y < 0 || y >= d.ny || z < 0 || z >= d.nz) return 0;
    return mask.labels()[mask.index(x, y, z)] != 0 ? 1 : 0;
  };

  const double spacing[3] = {sp.sx, sp.sy, sp.sz};
  // Cubes span corners (x..x+1, y..y+1, z..z+1) of the grid padded by one.
  for (int z = -1; z < d.nz; ++z) {
    for (int y = -1; y < d.ny; ++y) {
      for (int x = -1; x < d.nx; ++x) {
        int config = 0;
        for (int c = 0; c < 8; ++c) {
          if (mask_at(x + corner_coord(c, 0), y + corner_coord(c, 1), z + corner_coord(c, 2))) config |= 1 << c;
        }
        if (config == 0 || config == 255) continue;
        const auto& tris = table.triangles[static_cast<std::size_t>(config)];
        const int base[3] = {x, y, z};
        for (const auto& tri : tris) {
          std::array<std::size_t, 3> ids;
          for (int k = 0; k < 3; ++k) {
            EdgeInfo e = edge_info(tri[static_cast<std::size_t>(k)]);
            // Doubled index coordinates of the edge midpoint.
            int coord2[3];
            coord2[e.axis] = 2 * base[e.axis] + 1;
            coord2[other_u(e.axis)] = 2 * (base[other_u(e.axis)] + e.cu);
            coord2[other_v(e.axis)] = 2 * (base[other_v(e.axis)] + e.cv);
            std::uint64_t key = 0;
            for (int a = 0; a < 3; ++a) {
              key = (key << 21) | static_cast<std::uint64_t>(coord2[a] + 4);
            }
            auto [it, inserted] = vertex_ids.try_emplace(key, mesh.vertices.size());
            if (inserted) {
              mesh.vertices.push_back({0.5 * coord2[0] * spacing[0], 0.5 * coord2[1] * spacing[1],
                                       0.5 * coord2[2] * spacing[2]});
            }
            ids[static_cast<std::size_t>(k)] = it->second;
          }
          mesh.triangles.push_back(ids);
        }
      }
    }
  }
  return mesh;
}

namespace {

std::array<double, 3> sub(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

std::array<double, 3> cross(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double dot(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

}  // namespace

double mesh_volume(const TriangleMesh& mesh) {
  double six_volume = 0.0;
  for (const auto& tri : mesh.triangles) {
    const auto& a = mesh.vertices[tri[0]];
    const auto& b = mesh.vertices[tri[1]];
    const auto& c = mesh.vertices[tri[2]];
    six_volume += dot(a, cross(b, c));
  }
  return std::abs(six_volume) / 6.0;
}

double mesh_surface_area(const TriangleMesh& mesh) {
  double area = 0.0;
  for (const auto& tri : mesh.triangles) {
    auto ab = sub(mesh.vertices[tri[1]], mesh.vertices[tri[0]]);
    auto ac = sub(mesh.vertices[tri[2]], mesh.vertices[tri[0]]);
    auto n = cross(ab, ac);
    area += 0.5 * std::sqrt(dot(n, n));
  }
  return area;
}

namespace {

/// Max pairwise squared distance between two 2D point sets (full scan).
double max_pair_dist2(const std::vector<std::array<double, 3>>& pts, const std::vector<std::size_t>& a,
                      const std::vector<std::size_t>& b, bool same) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::size_t j0 = same ? i + 1 : 0;
    for (std::size_t j = j0; j < b.size(); ++j) {
      const auto& p = pts[a[i]];
      const auto& q = pts[b[j]];
      double dx = p[0] - q[0], dy = p[1] - q[1], dz = p[2] - q[2];
      best = std::max(best, dx * dx + dy * dy + dz * dz);
    }
  }
  return best;
}

/// Max pairwise distance among vertices sharing the same coordinate along
/// `axis` (grouping by exact coordinate; vertices lie on half-voxel grid).
double max_planar_diameter(const std::vector<std::array<double, 3>>& pts, int axis) {
  std::unordered_map<long long, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    long long key = std::llround(pts[i][static_cast<std::size_t>(axis)] * 1024.0);
    groups[key].push_back(i);
  }
  double best = 0.0;
  for (const auto& [key, group] : groups) {
    best = std::max(best, max_pair_dist2(pts, group, group, true));
  }
  return std::sqrt(best);
}

/// 2D convex hull (monotone chain) of points projected to (x, y).
std::vector<std::size_t> hull_2d(const std::vector<std::array<double, 3>>& pts, std::vector<std::size_t> idx) {
  if (idx.size() < 3) return idx;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return pts[a][0] != pts[b][0] ? pts[a][0] < pts[b][0] : pts[a][1] < pts[b][1];
  });
  auto cross2 = [&](std::size_t o, std::size_t a, std::size_t b) {
    return (pts[a][0] - pts[o][0]) * (pts[b][1] - pts[o][1]) - (pts[a][1] - pts[o][1]) * (pts[b][0] - pts[o][0]);
  };
  std::vector<std::size_t> hull(2 * idx.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    while (k >= 2 && cross2(hull[k - 2], hull[k - 1], idx[i]) <= 0) --k;
    hull[k++] = idx[i];
  }
  for (std::size_t i = idx.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross2(hull[k - 2], hull[k - 1], idx[i]) <= 0) --k;
    hull[k++] = idx[i];
  }
  hull.resize(k > 1 ? k - 1 : k);
  return hull;
}

double max_3d_diameter(const std::vector<std::array<double, 3>>& pts) {
  // Prune to per-slice 2D hulls: diameter endpoints are planar-extreme in
  // their own slice for any fixed slice pair.
  std::unordered_map<long long, std::vector<std::size_t>> slices;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    slices[std::llround(pts[i][2] * 1024.0)].push_back(i);
  }
  std::vector<std::size_t> candidates;
  for (auto& [key, group] : slices) {
    auto hull = hull_2d(pts, std::move(group));
    candidates.insert(candidates.end(), hull.begin(), hull.end());
  }
  return std::sqrt(max_pair_dist2(pts, candidates, candidates, true));
}

}  // namespace

FeatureVector shape_features(const LabelMask& mask) {
  const Spacing& sp = mask.spacing();
  std::size_t n_voxels = mask.nonzero_count();
  if (n_voxels == 0) throw Error(ErrorCode::EmptyMask, "shape features need a nonempty mask");

  TriangleMesh mesh = marching_cubes_mask(mask);
  const double volume = mesh_volume(mesh);
  const double area = mesh_surface_area(mesh);
  const double voxel_volume = static_cast<double>(n_voxels) * sp.voxel_volume();

  const double pi = std::numbers::pi;
  const double sphere_term = std::cbrt(36.0 * pi * volume * volume);
  const double sphericity = sphere_term / area;

  // Principal axes from the population covariance of voxel-center physical
  // coordinates. lambda_1 >= lambda_2 >= lambda_3.
  const Dims& d = mask.dims();
  double mean[3] = {0, 0, 0};
  {
    std::size_t idx = 0;
    for (int z = 0; z < d.nz; ++z) {
      for (int y = 0; y < d.ny; ++y) {
        for (int x = 0; x < d.nx; ++x, ++idx) {
          if (mask.labels()[idx] == 0) continue;
          mean[0] += x * sp.sx;
          mean[1] += y * sp.sy;
          mean[2] += z * sp.sz;
        }
      }
    }
  }
  for (double& m : mean) m /= static_cast<double>(n_voxels);
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  {
    std::size_t idx = 0;
    for (int z = 0; z < d.nz; ++z) {
      for (int y = 0; y < d.ny; ++y) {
        for (int x = 0; x < d.nx; ++x, ++idx) {
          if (mask.labels()[idx] == 0) continue;
          Eigen::Vector3d p(x * sp.sx - mean[0], y * sp.sy - mean[1], z * sp.sz - mean[2]);
          cov += p * p.transpose();
        }
      }
    }
  }
  cov /= static_cast<double>(n_voxels);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
  double l3 = std::max(0.0, eig.eigenvalues()[0]);
  double l2 = std::max(0.0, eig.eigenvalues()[1]);
  double l1 = std::max(0.0, eig.eigenvalues()[2]);

  FeatureVector out;
  out.append("MeshVolume", volume);
  out.append("VoxelVolume", voxel_volume);
  out.append("SurfaceArea", area);
  out.append("SurfaceVolumeRatio", area / volume);
  out.append("Sphericity", sphericity);
  out.append("Compactness1", volume / (std::sqrt(pi) * std::pow(area, 1.5)));
  out.append("Compactness2", 36.0 * pi * volume * volume / (area * area * area));
  out.append("SphericalDisproportion", area / sphere_term);
  out.append("Maximum3DDiameter", max_3d_diameter(mesh.vertices));
  out.append("Maximum2DDiameterSlice", max_planar_diameter(mesh.vertices, 2));
  out.append("Maximum2DDiameterColumn", max_planar_diameter(mesh.vertices, 1));
  out.append("Maximum2DDiameterRow", max_planar_diameter(mesh.vertices, 0));
  out.append("MajorAxisLength", 4.0 * std::sqrt(l1));
  out.append("MinorAxisLength", 4.0 * std::sqrt(l2));
  out.append("LeastAxisLength", 4.0 * std::sqrt(l3));
  out.append("Elongation", l1 > 0.0 ? std::sqrt(l2 / l1) : 1.0);
  out.append("Flatness", l1 > 0.0 ? std::sqrt(l3 / l1) : 1.0);
  return out;
}

const std::vector<std::string>& shape_feature_names() {
  static const std::vector<std::string> names = {
      "MeshVolume",          "VoxelVolume",           "SurfaceArea",            "SurfaceVolumeRatio",
      "Sphericity",          "Compactness1",          "Compactness2",           "SphericalDisproportion",
      "Maximum3DDiameter",   "Maximum2DDiameterSlice", "Maximum2DDiameterColumn", "Maximum2DDiameterRow",
      "MajorAxisLength",     "MinorAxisLength",       "LeastAxisLength",        "Elongation",
      "Flatness"};
  return names;
}

}  // namespace lungrad
