#pragma once

// Brute-force texture oracles, independent of the library's accumulation
// paths: pair/run/zone inventories are rebuilt from first principles
// (exhaustive pair scans, definition-based run tests, union-find zones) and
// features are recomputed by direct formula transliteration.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <vector>

#include "lungrad/texture.hpp"

namespace lungrad::oracle {

struct Coord {
  int x, y, z;
};

inline std::vector<Coord> masked_coords(const GrayVolume& g) {
  std::vector<Coord> out;
  for (int z = 0; z < g.dims.nz; ++z) {
    for (int y = 0; y < g.dims.ny; ++y) {
      for (int x = 0; x < g.dims.nx; ++x) {
        if (g.at(x, y, z) != 0) out.push_back({x, y, z});
      }
    }
  }
  return out;
}

/// GLCM by exhaustive scan over all ordered voxel pairs.
inline CountMatrix glcm_bruteforce(const GrayVolume& g, const std::array<int, 3>& dir) {
  auto coords = masked_coords(g);
  CountMatrix m(static_cast<std::size_t>(g.ng), std::vector<std::int64_t>(static_cast<std::size_t>(g.ng), 0));
  for (const Coord& a : coords) {
    for (const Coord& b : coords) {
      bool forward = b.x - a.x == dir[0] && b.y - a.y == dir[1] && b.z - a.z == dir[2];
      bool backward = a.x - b.x == dir[0] && a.y - b.y == dir[1] && a.z - b.z == dir[2];
      if (forward || backward) {
        ++m[static_cast<std::size_t>(g.at(a.x, a.y, a.z) - 1)][static_cast<std::size_t>(g.at(b.x, b.y, b.z) - 1)];
      }
    }
  }
  return m;
}

/// GLRLM by testing the run-of-length-L-starting-at-v predicate for every
/// voxel and length.
inline CountMatrix glrlm_bruteforce(const GrayVolume& g, const std::array<int, 3>& dir) {
  const Dims& d = g.dims;
  auto level_at = [&](int x, int y, int z) -> int {
    if (x < 0 || x >= d.nx || y < 0 || y >= d.ny || z < 0 || z >= d.nz) return 0;
    return g.at(x, y, z);
  };
  int max_len = std::max({d.nx, d.ny, d.nz});
  CountMatrix m(static_cast<std::size_t>(g.ng), std::vector<std::int64_t>(static_cast<std::size_t>(max_len), 0));
  int longest = 1;
  for (int z = 0; z < d.nz; ++z) {
    for (int y = 0; y < d.ny; ++y) {
      for (int x = 0; x < d.nx; ++x) {
        int level = level_at(x, y, z);
        if (level == 0) continue;
        for (int len = 1; len <= max_len; ++len) {
          bool is_run = level_at(x - dir[0], y - dir[1], z - dir[2]) != level;
          for (int k = 0; k < len && is_run; ++k) {
            is_run = level_at(x + k * dir[0], y + k * dir[1], z + k * dir[2]) == level;
          }
          if (is_run && level_at(x + len * dir[0], y + len * dir[1], z + len * dir[2]) == level) is_run = false;
          if (is_run) {
            ++m[static_cast<std::size_t>(level - 1)][static_cast<std::size_t>(len - 1)];
            longest = std::max(longest, len);
          }
        }
      }
    }
  }
  for (auto& row : m) row.resize(static_cast<std::size_t>(longest));
  return m;
}

/// GLSZM via union-find over 26-connected equal-level voxels.
inline CountMatrix glszm_bruteforce(const GrayVolume& g) {
  auto coords = masked_coords(g);
  std::vector<std::size_t> parent(coords.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  };
  for (std::size_t i = 0; i < coords.size(); ++i) {
    for (std::size_t j = i + 1; j < coords.size(); ++j) {
      if (std::abs(coords[i].x - coords[j].x) <= 1 && std::abs(coords[i].y - coords[j].y) <= 1 &&
          std::abs(coords[i].z - coords[j].z) <= 1 &&
          g.at(coords[i].x, coords[i].y, coords[i].z) == g.at(coords[j].x, coords[j].y, coords[j].z)) {
        parent[find(i)] = find(j);
      }
    }
  }
  std::map<std::size_t, std::int64_t> zone_sizes;
  for (std::size_t i = 0; i < coords.size(); ++i) ++zone_sizes[find(i)];
  std::int64_t max_size = 1;
  for (const auto& [root, size] : zone_sizes) max_size = std::max(max_size, size);
  CountMatrix m(static_cast<std::size_t>(g.ng), std::vector<std::int64_t>(static_cast<std::size_t>(max_size), 0));
  for (const auto& [root, size] : zone_sizes) {
    int level = g.at(coords[root].x, coords[root].y, coords[root].z);
    ++m[static_cast<std::size_t>(level - 1)][static_cast<std::size_t>(size - 1)];
  }
  return m;
}

/// GLDM dependence counts by scanning the whole coordinate list per voxel.
inline CountMatrix gldm_bruteforce(const GrayVolume& g, int alpha) {
  auto coords = masked_coords(g);
  CountMatrix m(static_cast<std::size_t>(g.ng), std::vector<std::int64_t>(27, 0));
  for (const Coord& a : coords) {
    int dep = 0;
    for (const Coord& b : coords) {
      if (a.x == b.x && a.y == b.y && a.z == b.z) continue;
      if (std::abs(a.x - b.x) <= 1 && std::abs(a.y - b.y) <= 1 && std::abs(a.z - b.z) <= 1 &&
          std::abs(g.at(a.x, a.y, a.z) - g.at(b.x, b.y, b.z)) <= alpha) {
        ++dep;
      }
    }
    ++m[static_cast<std::size_t>(g.at(a.x, a.y, a.z) - 1)][static_cast<std::size_t>(dep)];
  }
  return m;
}

inline NgtdmTable ngtdm_bruteforce(const GrayVolume& g) {
  auto coords = masked_coords(g);
  NgtdmTable table;
  table.s.assign(static_cast<std::size_t>(g.ng), 0.0);
  table.n.assign(static_cast<std::size_t>(g.ng), 0);
  for (const Coord& a : coords) {
    double sum = 0.0;
    int count = 0;
    for (const Coord& b : coords) {
      if (a.x == b.x && a.y == b.y && a.z == b.z) continue;
      if (std::abs(a.x - b.x) <= 1 && std::abs(a.y - b.y) <= 1 && std::abs(a.z - b.z) <= 1) {
        sum += g.at(b.x, b.y, b.z);
        ++count;
      }
    }
    if (count == 0) continue;
    int level = g.at(a.x, a.y, a.z);
    table.s[static_cast<std::size_t>(level - 1)] += std::abs(level - sum / count);
    ++table.n[static_cast<std::size_t>(level - 1)];
  }
  return table;
}

// ---- feature recomputation by direct formula transliteration ----

inline double olog2(double p) { return std::log2(p); }

inline std::vector<double> glcm_features_from_counts(const CountMatrix& counts, int ng) {
  double total = 0.0;
  for (const auto& row : counts) {
    for (auto c : row) total += static_cast<double>(c);
  }
  auto p = [&](int i, int j) {
    return static_cast<double>(counts[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)]) / total;
  };
  std::vector<double> px(static_cast<std::size_t>(ng) + 1, 0.0);
  for (int i = 1; i <= ng; ++i) {
    for (int j = 1; j <= ng; ++j) px[static_cast<std::size_t>(i)] += p(i, j);
  }
  double mu = 0.0;
  for (int i = 1; i <= ng; ++i) mu += i * px[static_cast<std::size_t>(i)];
  double sigma2 = 0.0;
  for (int i = 1; i <= ng; ++i) sigma2 += (i - mu) * (i - mu) * px[static_cast<std::size_t>(i)];

  double autocorr = 0, prominence = 0, shade = 0, tendency = 0, contrast = 0, diff_avg = 0;
  double joint_energy = 0, joint_entropy = 0, idm = 0, idmn = 0, idf = 0, idn = 0, inv_var = 0, max_prob = 0;
  double sum_avg = 0, sum_squares = 0, hxy1 = 0, hxy2 = 0;
  std::vector<double> psum(static_cast<std::size_t>(2 * ng + 1), 0.0), pdiff(static_cast<std::size_t>(ng), 0.0);
  for (int i = 1; i <= ng; ++i) {
    for (int j = 1; j <= ng; ++j) {
      double pij = p(i, j);
      if (pij > 0) {
        psum[static_cast<std::size_t>(i + j)] += pij;
        pdiff[static_cast<std::size_t>(std::abs(i - j))] += pij;
        autocorr += i * j * pij;
        prominence += std::pow(i + j - 2 * mu, 4.0) * pij;
        shade += std::pow(i + j - 2 * mu, 3.0) * pij;
        tendency += std::pow(i + j - 2 * mu, 2.0) * pij;
        contrast += (i - j) * (i - j) * pij;
        joint_energy += pij * pij;
        joint_entropy -= pij * olog2(pij);
        idm += pij / (1.0 + (i - j) * (i - j));
        idmn += pij / (1.0 + static_cast<double>((i - j) * (i - j)) / (static_cast<double>(ng) * ng));
        idf += pij / (1.0 + std::abs(i - j));
        idn += pij / (1.0 + static_cast<double>(std::abs(i - j)) / ng);
        if (i != j) inv_var += pij / ((i - j) * (i - j));
        max_prob = std::max(max_prob, pij);
        sum_squares += (i - mu) * (i - mu) * pij;
        hxy1 -= pij * olog2(px[static_cast<std::size_t>(i)] * px[static_cast<std::size_t>(j)]);
      }
      double q = px[static_cast<std::size_t>(i)] * px[static_cast<std::size_t>(j)];
      if (q > 0) hxy2 -= q * olog2(q);
    }
  }
  double corr = sigma2 > 0 ? (autocorr - mu * mu) / sigma2 : 1.0;
  for (int k = 0; k < ng; ++k) diff_avg += k * pdiff[static_cast<std::size_t>(k)];
  double diff_var = 0, diff_entropy = 0;
  for (int k = 0; k < ng; ++k) {
    diff_var += (k - diff_avg) * (k - diff_avg) * pdiff[static_cast<std::size_t>(k)];
    if (pdiff[static_cast<std::size_t>(k)] > 0) {
      diff_entropy -= pdiff[static_cast<std::size_t>(k)] * olog2(pdiff[static_cast<std::size_t>(k)]);
    }
  }
  double sum_entropy = 0;
  for (int k = 2; k <= 2 * ng; ++k) {
    sum_avg += k * psum[static_cast<std::size_t>(k)];
    if (psum[static_cast<std::size_t>(k)] > 0) {
      sum_entropy -= psum[static_cast<std::size_t>(k)] * olog2(psum[static_cast<std::size_t>(k)]);
    }
  }
  double hx = 0;
  for (int i = 1; i <= ng; ++i) {
    if (px[static_cast<std::size_t>(i)] > 0) hx -= px[static_cast<std::size_t>(i)] * olog2(px[static_cast<std::size_t>(i)]);
  }
  double imc1 = hx > 0 ? (joint_entropy - hxy1) / hx : 0.0;
  double imc2 = std::sqrt(std::max(0.0, 1.0 - std::exp2(-2.0 * (hxy2 - joint_entropy))));

  std::vector<int> present;
  for (int i = 1; i <= ng; ++i) {
    if (px[static_cast<std::size_t>(i)] > 0) present.push_back(i);
  }
  double mcc = 1.0;
  if (present.size() >= 2) {
    Eigen::MatrixXd q_matrix(present.size(), present.size());
    for (std::size_t a = 0; a < present.size(); ++a) {
      for (std::size_t b = 0; b < present.size(); ++b) {
        double acc = 0.0;
        for (std::size_t k = 0; k < present.size(); ++k) {
          acc += p(present[a], present[k]) * p(present[b], present[k]) /
                 (px[static_cast<std::size_t>(present[a])] * px[static_cast<std::size_t>(present[k])]);
        }
        q_matrix(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = acc;
      }
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(q_matrix, false);
    std::vector<double> ev;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) ev.push_back(solver.eigenvalues()[i].real());
    std::sort(ev.begin(), ev.end(), std::greater<>());
    mcc = std::sqrt(std::max(0.0, ev[1]));
  }
  return {autocorr, mu,    prominence, shade, tendency, contrast, corr, diff_avg, diff_entropy, diff_var,
          joint_energy, joint_entropy, imc1, imc2, idm, idmn, idf, idn, inv_var, max_prob,
          sum_avg,  sum_entropy, sum_squares, mcc};
}

/// Shared GLRLM/GLSZM-style features from a (level, size) count matrix.
inline std::vector<double> runlike_features_from_counts(const CountMatrix& counts, bool gldm_shape) {
  double n = 0.0, np = 0.0;
  const std::size_t rows = counts.size();
  const std::size_t cols = counts.empty() ? 0 : counts[0].size();
  std::vector<double> row_sum(rows, 0.0), col_sum(cols, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      double c = static_cast<double>(counts[i][j]);
      n += c;
      np += gldm_shape ? c : c * static_cast<double>(j + 1);
      row_sum[i] += c;
      col_sum[j] += c;
    }
  }
  double sre = 0, lre = 0, entropy = 0, lgl = 0, hgl = 0, srlgl = 0, srhgl = 0, lrlgl = 0, lrhgl = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      double c = static_cast<double>(counts[i][j]);
      if (c == 0) continue;
      double pv = c / n;
      double iv = static_cast<double>(i + 1), jv = static_cast<double>(j + 1);
      sre += pv / (jv * jv);
      lre += pv * jv * jv;
      entropy -= pv * olog2(pv);
      lgl += pv / (iv * iv);
      hgl += pv * iv * iv;
      srlgl += pv / (iv * iv * jv * jv);
      srhgl += pv * iv * iv / (jv * jv);
      lrlgl += pv * jv * jv / (iv * iv);
      lrhgl += pv * iv * iv * jv * jv;
    }
  }
  double gln = 0, rln = 0;
  for (double rs : row_sum) gln += rs * rs;
  for (double cs : col_sum) rln += cs * cs;
  gln /= n;
  rln /= n;
  double mu_i = 0, mu_j = 0;
  for (std::size_t i = 0; i < rows; ++i) mu_i += static_cast<double>(i + 1) * row_sum[i] / n;
  for (std::size_t j = 0; j < cols; ++j) mu_j += static_cast<double>(j + 1) * col_sum[j] / n;
  double glv = 0, jvvar = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    glv += (static_cast<double>(i + 1) - mu_i) * (static_cast<double>(i + 1) - mu_i) * row_sum[i] / n;
  }
  for (std::size_t j = 0; j < cols; ++j) {
    jvvar += (static_cast<double>(j + 1) - mu_j) * (static_cast<double>(j + 1) - mu_j) * col_sum[j] / n;
  }
  if (gldm_shape) {
    return {sre, lre, gln, rln, rln / n, glv, jvvar, entropy, lgl, hgl, srlgl, srhgl, lrlgl, lrhgl};
  }
  return {sre, lre, gln, gln / n, rln, rln / n, n / np, glv, jvvar, entropy, lgl, hgl, srlgl, srhgl, lrlgl, lrhgl};
}

inline std::vector<double> ngtdm_features_from_table(const NgtdmTable& t, int ng) {
  double n = 0;
  for (auto c : t.n) n += static_cast<double>(c);
  if (n == 0) return {1e6, 0, 0, 0, 0};
  std::vector<double> p(static_cast<std::size_t>(ng), 0.0);
  int present = 0;
  double s_total = 0;
  for (int i = 0; i < ng; ++i) {
    p[static_cast<std::size_t>(i)] = static_cast<double>(t.n[static_cast<std::size_t>(i)]) / n;
    if (t.n[static_cast<std::size_t>(i)] > 0) ++present;
    s_total += t.s[static_cast<std::size_t>(i)];
  }
  double denom = 0;
  for (int i = 0; i < ng; ++i) denom += p[static_cast<std::size_t>(i)] * t.s[static_cast<std::size_t>(i)];
  double coarseness = denom == 0 ? 1e6 : 1.0 / denom;
  double contrast = 0;
  if (present > 1) {
    double pair = 0;
    for (int i = 1; i <= ng; ++i) {
      for (int j = 1; j <= ng; ++j) {
        if (t.n[static_cast<std::size_t>(i - 1)] && t.n[static_cast<std::size_t>(j - 1)]) {
          pair += p[static_cast<std::size_t>(i - 1)] * p[static_cast<std::size_t>(j - 1)] * (i - j) * (i - j);
        }
      }
    }
    contrast = pair / (static_cast<double>(present) * (present - 1)) * (s_total / n);
  }
  double busy_denom = 0, complexity = 0, strength_num = 0;
  for (int i = 1; i <= ng; ++i) {
    if (!t.n[static_cast<std::size_t>(i - 1)]) continue;
    for (int j = 1; j <= ng; ++j) {
      if (!t.n[static_cast<std::size_t>(j - 1)]) continue;
      double pi = p[static_cast<std::size_t>(i - 1)], pj = p[static_cast<std::size_t>(j - 1)];
      busy_denom += std::abs(i * pi - j * pj);
      complexity += std::abs(i - j) * (pi * t.s[static_cast<std::size_t>(i - 1)] + pj * t.s[static_cast<std::size_t>(j - 1)]) / (pi + pj);
      strength_num += (pi + pj) * (i - j) * (i - j);
    }
  }
  double busyness = busy_denom == 0 ? 0 : denom / busy_denom;
  complexity /= n;
  double strength = s_total == 0 ? 0 : strength_num / s_total;
  return {coarseness, contrast, busyness, complexity, strength};
}

}  // namespace lungrad::oracle
