#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "lungrad/texture.hpp"

namespace lungrad {

namespace {

constexpr double kCoarsenessCap = 1e6;

inline double log2_safe(double p) { return std::log2(p); }

double entropy_bits(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * log2_safe(v);
  }
  return h;
}

/// Sorted-copy percentile with linear interpolation between closest ranks.
double percentile_sorted(const std::vector<double>& sorted, double pct) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  double rank = pct / 100.0 * static_cast<double>(n - 1);
  std::size_t lo = static_cast<std::size_t>(std::floor(rank));
  if (lo >= n - 1) return sorted[n - 1];
  double frac = rank - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

std::array<double, 24> glcm_features_one(const CountMatrix& counts, int ng) {
  std::int64_t total = 0;
  for (const auto& row : counts) {
    for (std::int64_t c : row) total += c;
  }
  const double tot = static_cast<double>(total);

  // Normalized joint distribution and marginals.
  std::vector<double> px(static_cast<std::size_t>(ng), 0.0);
  std::vector<double> p_sum(static_cast<std::size_t>(2 * ng + 1), 0.0);   // index i+j in [2, 2ng]
  std::vector<double> p_diff(static_cast<std::size_t>(ng), 0.0);          // index |i-j| in [0, ng-1]
  double joint_energy = 0.0, joint_entropy = 0.0, max_prob = 0.0;
  double autocorr = 0.0, contrast = 0.0;
  double idm = 0.0, idmn = 0.0, id = 0.0, idn = 0.0, inverse_variance = 0.0;
  double hxy1 = 0.0;

  for (int i = 1; i <= ng; ++i) {
    for (int j = 1; j <= ng; ++j) {
      double p = static_cast<double>(counts[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)]) / tot;
      if (p == 0.0) continue;
      px[static_cast<std::size_t>(i - 1)] += p;
      p_sum[static_cast<std::size_t>(i + j)] += p;
      p_diff[static_cast<std::size_t>(std::abs(i - j))] += p;
      joint_energy += p * p;
      joint_entropy -= p * log2_safe(p);
      max_prob = std::max(max_prob, p);
      autocorr += p * i * j;
      double dij = static_cast<double>(i - j);
      contrast += p * dij * dij;
      idm += p / (1.0 + dij * dij);
      idmn += p / (1.0 + dij * dij / (static_cast<double>(ng) * ng));
      id += p / (1.0 + std::abs(dij));
      idn += p / (1.0 + std::abs(dij) / ng);
      if (i != j) inverse_variance += p / (dij * dij);
    }
  }

  double mu = 0.0;
  for (int i = 1; i <= ng; ++i) mu += i * px[static_cast<std::size_t>(i - 1)];
  double sigma2 = 0.0;
  for (int i = 1; i <= ng; ++i) {
    sigma2 += (i - mu) * (i - mu) * px[static_cast<std::size_t>(i - 1)];
  }

  double cluster_tendency = 0.0, cluster_shade = 0.0, cluster_prominence = 0.0, sum_squares = 0.0;
  for (int i = 1; i <= ng; ++i) {
    for (int j = 1; j <= ng; ++j) {
      double p = static_cast<double>(counts[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)]) / tot;
      if (p == 0.0) continue;
      double dev = i + j - 2.0 * mu;
      cluster_tendency += dev * dev * p;
      cluster_shade += dev * dev * dev * p;
      cluster_prominence += dev * dev * dev * dev * p;
      sum_squares += (i - mu) * (i - mu) * p;
      hxy1 -= p * log2_safe(px[static_cast<std::size_t>(i - 1)] * px[static_cast<std::size_t>(j - 1)]);
    }
  }

  double correlation = sigma2 > 0.0 ? (autocorr - mu * mu) / sigma2 : 1.0;

  double diff_avg = 0.0;
  for (int k = 0; k < ng; ++k) diff_avg += k * p_diff[static_cast<std::size_t>(k)];
  double diff_var = 0.0;
  for (int k = 0; k < ng; ++k) {
    diff_var += (k - diff_avg) * (k - diff_avg) * p_diff[static_cast<std::size_t>(k)];
  }
  double diff_entropy = entropy_bits(p_diff);

  double sum_avg = 0.0;
  for (int k = 2; k <= 2 * ng; ++k) sum_avg += k * p_sum[static_cast<std::size_t>(k)];
  double sum_entropy = entropy_bits(p_sum);

  double hx = entropy_bits(px);
  double hxy2 = 0.0;
  for (int i = 1; i <= ng; ++i) {
    for (int j = 1; j <= ng; ++j) {
      double q = px[static_cast<std::size_t>(i - 1)] * px[static_cast<std::size_t>(j - 1)];
      if (q > 0.0) hxy2 -= q * log2_safe(q);
    }
  }
  double imc1 = hx > 0.0 ? (joint_entropy - hxy1) / hx : 0.0;
  double imc2 = std::sqrt(std::max(0.0, 1.0 - std::exp2(-2.0 * (hxy2 - joint_entropy))));

  // MCC: sqrt of the second-largest eigenvalue of Q over present levels.
  double mcc = 1.0;
  {
    std::vector<int> present;
    for (int i = 1; i <= ng; ++i) {
      if (px[static_cast<std::size_t>(i - 1)] > 0.0) present.push_back(i);
    }
    const std::size_t m = present.size();
    if (m >= 2) {
      Eigen::MatrixXd q_matrix(m, m);
      for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
          double acc = 0.0;
          for (std::size_t k = 0; k < m; ++k) {
            double pik =
                static_cast<double>(counts[static_cast<std::size_t>(present[a] - 1)][static_cast<std::size_t>(present[k] - 1)]) / tot;
            double pjk =
                static_cast<double>(counts[static_cast<std::size_t>(present[b] - 1)][static_cast<std::size_t>(present[k] - 1)]) / tot;
            acc += pik * pjk /
                   (px[static_cast<std::size_t>(present[a] - 1)] * px[static_cast<std::size_t>(present[k] - 1)]);
          }
          q_matrix(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = acc;
        }
      }
      Eigen::EigenSolver<Eigen::MatrixXd> solver(q_matrix, /*computeEigenvectors=*/false);
      std::vector<double> eigenvalues;
      for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        eigenvalues.push_back(solver.eigenvalues()[i].real());
      }
      std::sort(eigenvalues.begin(), eigenvalues.end(), std::greater<>());
      mcc = std::sqrt(std::max(0.0, eigenvalues[1]));
    }
  }

  return {autocorr,      mu,        cluster_prominence, cluster_shade, cluster_tendency, contrast,
          correlation,   diff_avg,  diff_entropy,       diff_var,      joint_energy,     joint_entropy,
          imc1,          imc2,      idm,                idmn,          id,               idn,
          inverse_variance, max_prob, sum_avg,           sum_entropy,   sum_squares,      mcc};
}

}  // namespace

FeatureVector glcm_features(const GrayVolume& gray) {
  auto matrices = glcm_matrices(gray);
  std::array<double, 24> acc{};
  int used = 0;
  for (const auto& m : matrices) {
    std::int64_t total = 0;
    for (const auto& row : m) {
      for (std::int64_t c : row) total += c;
    }
    if (total == 0) continue;  // directions without voxel pairs are skipped
    auto f = glcm_features_one(m, gray.ng);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += f[i];
    ++used;
  }
  if (used == 0) {
    // No direction has a pair (e.g. one isolated voxel): constant-region conventions.
    CountMatrix synth(static_cast<std::size_t>(gray.ng), std::vector<std::int64_t>(static_cast<std::size_t>(gray.ng), 0));
    synth[0][0] = 1;
    acc = glcm_features_one(synth, gray.ng);
    used = 1;
  }
  FeatureVector out;
  const auto& names = glcm_feature_names();
  for (std::size_t i = 0; i < names.size(); ++i) out.append(names[i], acc[i] / used);
  return out;
}

namespace {

struct RunLikeStats {
  // Shared shape of GLRLM / GLSZM / GLDM formulas: matrix over (level i,
  // second index j) with total count n and voxel count np.
  double n = 0.0;
  double np = 0.0;
  double sre = 0.0, lre = 0.0;          // 1/j^2 and j^2 emphases
  double gln = 0.0, rln = 0.0;          // squared marginal sums
  double glv = 0.0, jv = 0.0;           // variances over marginals
  double entropy = 0.0;
  double lgl = 0.0, hgl = 0.0;
  double s_lgl = 0.0, s_hgl = 0.0, l_lgl = 0.0, l_hgl = 0.0;
};

/// j_weight(j) maps the column index to the formula weight (run length,
/// zone size, dependence+1). np_weight gives voxels covered per cell.
RunLikeStats run_like_stats(const CountMatrix& counts, double (*j_weight)(std::size_t), bool np_counts_j) {
  RunLikeStats st;
  std::int64_t total = 0;
  std::vector<double> row_sums(counts.size(), 0.0);
  std::vector<double> col_sums(counts.empty() ? 0 : counts[0].size(), 0.0);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    for (std::size_t j = 0; j < counts[i].size(); ++j) {
      std::int64_t c = counts[i][j];
      if (c == 0) continue;
      total += c;
      row_sums[i] += static_cast<double>(c);
      col_sums[j] += static_cast<double>(c);
      st.np += np_counts_j ? static_cast<double>(c) * j_weight(j) : static_cast<double>(c);
    }
  }
  st.n = static_cast<double>(total);
  if (total == 0) return st;

  for (std::size_t i = 0; i < counts.size(); ++i) {
    double iv = static_cast<double>(i + 1);
    for (std::size_t j = 0; j < counts[i].size(); ++j) {
      std::int64_t c = counts[i][j];
      if (c == 0) continue;
      double p = static_cast<double>(c) / st.n;
      double jv = j_weight(j);
      st.sre += p / (jv * jv);
      st.lre += p * jv * jv;
      st.entropy -= p * log2_safe(p);
      st.lgl += p / (iv * iv);
      st.hgl += p * iv * iv;
      st.s_lgl += p / (iv * iv * jv * jv);
      st.s_hgl += p * iv * iv / (jv * jv);
      st.l_lgl += p * jv * jv / (iv * iv);
      st.l_hgl += p * iv * iv * jv * jv;
    }
  }
  for (double rs : row_sums) st.gln += rs * rs;
  for (double cs : col_sums) st.rln += cs * cs;
  st.gln /= st.n;
  st.rln /= st.n;

  double mu_i = 0.0, mu_j = 0.0;
  for (std::size_t i = 0; i < row_sums.size(); ++i) mu_i += (static_cast<double>(i + 1)) * row_sums[i] / st.n;
  for (std::size_t j = 0; j < col_sums.size(); ++j) mu_j += j_weight(j) * col_sums[j] / st.n;
  for (std::size_t i = 0; i < row_sums.size(); ++i) {
    double d = static_cast<double>(i + 1) - mu_i;
    st.glv += d * d * row_sums[i] / st.n;
  }
  for (std::size_t j = 0; j < col_sums.size(); ++j) {
    double d = j_weight(j) - mu_j;
    st.jv += d * d * col_sums[j] / st.n;
  }
  return st;
}

double weight_len(std::size_t j) { return static_cast<double>(j + 1); }

}  // namespace

FeatureVector glrlm_features(const GrayVolume& gray) {
  auto matrices = glrlm_matrices(gray);
  std::array<double, 16> acc{};
  int used = 0;
  for (const auto& m : matrices) {
    RunLikeStats st = run_like_stats(m, weight_len, /*np_counts_j=*/true);
    if (st.n == 0.0) continue;
    std::array<double, 16> f = {st.sre,
                                st.lre,
                                st.gln,
                                st.gln / st.n,
                                st.rln,
                                st.rln / st.n,
                                st.n / st.np,
                                st.glv,
                                st.jv,
                                st.entropy,
                                st.lgl,
                                st.hgl,
                                st.s_lgl,
                                st.s_hgl,
                                st.l_lgl,
                                st.l_hgl};
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += f[i];
    ++used;
  }
  FeatureVector out;
  const auto& names = glrlm_feature_names();
  for (std::size_t i = 0; i < names.size(); ++i) out.append(names[i], used ? acc[i] / used : 0.0);
  return out;
}

FeatureVector glszm_features(const GrayVolume& gray) {
  RunLikeStats st = run_like_stats(glszm_matrix(gray), weight_len, /*np_counts_j=*/true);
  FeatureVector out;
  const auto& names = glszm_feature_names();
  std::array<double, 16> f = {st.sre,
                              st.lre,
                              st.gln,
                              st.n > 0 ? st.gln / st.n : 0.0,
                              st.rln,
                              st.n > 0 ? st.rln / st.n : 0.0,
                              st.np > 0 ? st.n / st.np : 0.0,
                              st.glv,
                              st.jv,
                              st.entropy,
                              st.lgl,
                              st.hgl,
                              st.s_lgl,
                              st.s_hgl,
                              st.l_lgl,
                              st.l_hgl};
  for (std::size_t i = 0; i < names.size(); ++i) out.append(names[i], f[i]);
  return out;
}

FeatureVector gldm_features(const GrayVolume& gray, int alpha) {
  RunLikeStats st = run_like_stats(gldm_matrix(gray, alpha), weight_len, /*np_counts_j=*/false);
  FeatureVector out;
  const auto& names = gldm_feature_names();
  std::array<double, 14> f = {st.sre,
                              st.lre,
                              st.gln,
                              st.rln,
                              st.n > 0 ? st.rln / st.n : 0.0,
                              st.glv,
                              st.jv,
                              st.entropy,
                              st.lgl,
                              st.hgl,
                              st.s_lgl,
                              st.s_hgl,
                              st.l_lgl,
                              st.l_hgl};
  for (std::size_t i = 0; i < names.size(); ++i) out.append(names[i], f[i]);
  return out;
}

FeatureVector ngtdm_features(const GrayVolume& gray) {
  NgtdmTable table = ngtdm_table(gray);
  const int ng = gray.ng;
  double total = 0.0;
  for (std::int64_t c : table.n) total += static_cast<double>(c);

  double coarseness = kCoarsenessCap, contrast = 0.0, busyness = 0.0, complexity = 0.0, strength = 0.0;
  if (total > 0.0) {
    std::vector<double> p(static_cast<std::size_t>(ng), 0.0);
    int present = 0;
    double s_total = 0.0;
    for (int i = 0; i < ng; ++i) {
      p[static_cast<std::size_t>(i)] = static_cast<double>(table.n[static_cast<std::size_t>(i)]) / total;
      if (table.n[static_cast<std::size_t>(i)] > 0) ++present;
      s_total += table.s[static_cast<std::size_t>(i)];
    }

    double coarse_denom = 0.0;
    for (int i = 0; i < ng; ++i) coarse_denom += p[static_cast<std::size_t>(i)] * table.s[static_cast<std::size_t>(i)];
    coarseness = coarse_denom == 0.0 ? kCoarsenessCap : 1.0 / coarse_denom;

    if (present > 1) {
      double pair_term = 0.0;
      for (int i = 1; i <= ng; ++i) {
        if (table.n[static_cast<std::size_t>(i - 1)] == 0) continue;
        for (int j = 1; j <= ng; ++j) {
          if (table.n[static_cast<std::size_t>(j - 1)] == 0) continue;
          pair_term += p[static_cast<std::size_t>(i - 1)] * p[static_cast<std::size_t>(j - 1)] *
                       static_cast<double>(i - j) * (i - j);
        }
      }
      contrast = pair_term / (static_cast<double>(present) * (present - 1)) * (s_total / total);
    }

    double busy_denom = 0.0;
    for (int i = 1; i <= ng; ++i) {
      if (table.n[static_cast<std::size_t>(i - 1)] == 0) continue;
      for (int j = 1; j <= ng; ++j) {
        if (table.n[static_cast<std::size_t>(j - 1)] == 0) continue;
        busy_denom += std::abs(i * p[static_cast<std::size_t>(i - 1)] - j * p[static_cast<std::size_t>(j - 1)]);
      }
    }
    busyness = busy_denom == 0.0 ? 0.0 : coarse_denom / busy_denom;

    for (int i = 1; i <= ng; ++i) {
      if (table.n[static_cast<std::size_t>(i - 1)] == 0) continue;
      for (int j = 1; j <= ng; ++j) {
        if (table.n[static_cast<std::size_t>(j - 1)] == 0) continue;
        double pi = p[static_cast<std::size_t>(i - 1)], pj = p[static_cast<std::size_t>(j - 1)];
        complexity += std::abs(i - j) *
                      (pi * table.s[static_cast<std::size_t>(i - 1)] + pj * table.s[static_cast<std::size_t>(j - 1)]) /
                      (pi + pj);
      }
    }
    complexity /= total;

    if (s_total > 0.0) {
      double num = 0.0;
      for (int i = 1; i <= ng; ++i) {
        if (table.n[static_cast<std::size_t>(i - 1)] == 0) continue;
        for (int j = 1; j <= ng; ++j) {
          if (table.n[static_cast<std::size_t>(j - 1)] == 0) continue;
          num += (p[static_cast<std::size_t>(i - 1)] + p[static_cast<std::size_t>(j - 1)]) *
                 static_cast<double>(i - j) * (i - j);
        }
      }
      strength = num / s_total;
    }
  }

  FeatureVector out;
  const auto& names = ngtdm_feature_names();
  std::array<double, 5> f = {coarseness, contrast, busyness, complexity, strength};
  for (std::size_t i = 0; i < names.size(); ++i) out.append(names[i], f[i]);
  return out;
}

FeatureVector first_order_features(const VoxelVolume& volume, const LabelMask& mask,
                                   const Discretization& entropy_disc) {
  validate_alignment(volume, mask);
  std::vector<double> vals;
  for (std::size_t i = 0; i < volume.values().size(); ++i) {
    if (mask.labels()[i] != 0) vals.push_back(volume.values()[i]);
  }
  if (vals.empty()) throw Error(ErrorCode::EmptyMask, "first-order features need a nonempty mask");
  const double n = static_cast<double>(vals.size());

  double sum = 0.0, sum_sq = 0.0;
  for (double v : vals) {
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0, abs_dev = 0.0;
  for (double v : vals) {
    double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
    abs_dev += std::abs(d);
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;

  std::vector<double> sorted(vals);
  std::sort(sorted.begin(), sorted.end());
  const double p10 = percentile_sorted(sorted, 10.0);
  const double p25 = percentile_sorted(sorted, 25.0);
  const double p50 = percentile_sorted(sorted, 50.0);
  const double p75 = percentile_sorted(sorted, 75.0);
  const double p90 = percentile_sorted(sorted, 90.0);

  double robust_sum = 0.0;
  std::size_t robust_n = 0;
  for (double v : sorted) {
    if (v >= p10 && v <= p90) {
      robust_sum += v;
      ++robust_n;
    }
  }
  double robust_mad = 0.0;
  if (robust_n > 0) {
    double robust_mean = robust_sum / static_cast<double>(robust_n);
    for (double v : sorted) {
      if (v >= p10 && v <= p90) robust_mad += std::abs(v - robust_mean);
    }
    robust_mad /= static_cast<double>(robust_n);
  }

  // Entropy over the discretized histogram (log base 2).
  GrayVolume gray = discretize(volume, mask, entropy_disc);
  std::vector<double> hist(static_cast<std::size_t>(gray.ng), 0.0);
  for (std::size_t i = 0; i < gray.levels.size(); ++i) {
    if (gray.levels[i] != 0) hist[static_cast<std::size_t>(gray.levels[i] - 1)] += 1.0;
  }
  for (double& h : hist) h /= n;
  double entropy = entropy_bits(hist);

  const double voxvol = volume.spacing().voxel_volume();
  const double variance = m2;
  const double stddev = std::sqrt(variance);
  const double skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
  const double kurtosis = m2 > 0.0 ? m4 / (m2 * m2) : 0.0;  // non-excess (no -3)

  FeatureVector out;
  out.append("Energy", sum_sq);
  out.append("TotalEnergy", sum_sq * voxvol);
  out.append("Entropy", entropy);
  out.append("Minimum", sorted.front());
  out.append("10Percentile", p10);
  out.append("90Percentile", p90);
  out.append("Maximum", sorted.back());
  out.append("Mean", mean);
  out.append("Median", p50);
  out.append("InterquartileRange", p75 - p25);
  out.append("Range", sorted.back() - sorted.front());
  out.append("MeanAbsoluteDeviation", abs_dev / n);
  out.append("RobustMeanAbsoluteDeviation", robust_mad);
  out.append("RootMeanSquared", std::sqrt(sum_sq / n));
  out.append("StandardDeviation", stddev);
  out.append("Skewness", skewness);
  out.append("Kurtosis", kurtosis);
  out.append("Variance", variance);
  return out;
}

const std::vector<std::string>& first_order_feature_names() {
  static const std::vector<std::string> names = {
      "Energy",        "TotalEnergy", "Entropy",  "Minimum",
      "10Percentile",  "90Percentile", "Maximum", "Mean",
      "Median",        "InterquartileRange", "Range", "MeanAbsoluteDeviation",
      "RobustMeanAbsoluteDeviation", "RootMeanSquared", "StandardDeviation", "Skewness",
      "Kurtosis",      "Variance"};
  return names;
}

const std::vector<std::string>& glcm_feature_names() {
  static const std::vector<std::string> names = {
      "Autocorrelation", "JointAverage", "ClusterProminence", "ClusterShade", "ClusterTendency", "Contrast",
      "Correlation",     "DifferenceAverage", "DifferenceEntropy", "DifferenceVariance", "JointEnergy",
      "JointEntropy",    "Imc1", "Imc2", "Idm", "Idmn", "Id", "Idn", "InverseVariance", "MaximumProbability",
      "SumAverage",      "SumEntropy", "SumSquares", "MCC"};
  return names;
}

const std::vector<std::string>& glrlm_feature_names() {
  static const std::vector<std::string> names = {"ShortRunEmphasis",
                                                 "LongRunEmphasis",
                                                 "GrayLevelNonUniformity",
                                                 "GrayLevelNonUniformityNormalized",
                                                 "RunLengthNonUniformity",
                                                 "RunLengthNonUniformityNormalized",
                                                 "RunPercentage",
                                                 "GrayLevelVariance",
                                                 "RunVariance",
                                                 "RunEntropy",
                                                 "LowGrayLevelRunEmphasis",
                                                 "HighGrayLevelRunEmphasis",
                                                 "ShortRunLowGrayLevelEmphasis",
                                                 "ShortRunHighGrayLevelEmphasis",
                                                 "LongRunLowGrayLevelEmphasis",
                                                 "LongRunHighGrayLevelEmphasis"};
  return names;
}

const std::vector<std::string>& glszm_feature_names() {
  static const std::vector<std::string> names = {"SmallAreaEmphasis",
                                                 "LargeAreaEmphasis",
                                                 "GrayLevelNonUniformity",
                                                 "GrayLevelNonUniformityNormalized",
                                                 "SizeZoneNonUniformity",
                                                 "SizeZoneNonUniformityNormalized",
                                                 "ZonePercentage",
                                                 "GrayLevelVariance",
                                                 "ZoneVariance",
                                                 "ZoneEntropy",
                                                 "LowGrayLevelZoneEmphasis",
                                                 "HighGrayLevelZoneEmphasis",
                                                 "SmallAreaLowGrayLevelEmphasis",
                                                 "SmallAreaHighGrayLevelEmphasis",
                                                 "LargeAreaLowGrayLevelEmphasis",
                                                 "LargeAreaHighGrayLevelEmphasis"};
  return names;
}

const std::vector<std::string>& ngtdm_feature_names() {
  static const std::vector<std::string> names = {"Coarseness", "Contrast", "Busyness", "Complexity", "Strength"};
  return names;
}

const std::vector<std::string>& gldm_feature_names() {
  static const std::vector<std::string> names = {"SmallDependenceEmphasis",
                                                 "LargeDependenceEmphasis",
                                                 "GrayLevelNonUniformity",
                                                 "DependenceNonUniformity",
                                                 "DependenceNonUniformityNormalized",
                                                 "GrayLevelVariance",
                                                 "DependenceVariance",
                                                 "DependenceEntropy",
                                                 "LowGrayLevelEmphasis",
                                                 "HighGrayLevelEmphasis",
                                                 "SmallDependenceLowGrayLevelEmphasis",
                                                 "SmallDependenceHighGrayLevelEmphasis",
                                                 "LargeDependenceLowGrayLevelEmphasis",
                                                 "LargeDependenceHighGrayLevelEmphasis"};
  return names;
}

}  // namespace lungrad
