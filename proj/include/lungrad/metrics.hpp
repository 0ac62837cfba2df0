#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lungrad/error.hpp"

namespace lungrad {

/// Disjoint folds covering [0, n); per-fold class counts differ by at most
/// one from proportional. Deterministic in (labels, k, seed).
std::vector<std::vector<std::size_t>> stratified_kfold(const std::vector<int>& labels, int k, std::uint64_t seed);

/// Mann-Whitney AUC: P(score+ > score-) + 0.5 * P(tie). Exact (integer pair
/// counting), equal to the trapezoidal ROC area.
double roc_auc(const std::vector<double>& scores, const std::vector<int>& labels);

struct OperatingPoint {
  double threshold = 0.0;  // predict positive when score >= threshold
  double sensitivity = 0.0;
  double specificity = 0.0;
  double accuracy = 0.0;
  double ppv = 0.0;
};

/// Highest-sensitivity threshold (ties -> higher threshold) among distinct
/// score thresholds with PPV >= ppv_target; nullopt when unattainable.
std::optional<OperatingPoint> sensitivity_at_ppv(const std::vector<double>& scores, const std::vector<int>& labels,
                                                 double ppv_target = 0.70);

struct MeanCi {
  double mean = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

/// Student-t confidence interval: mean +- t_{(1+level)/2, n-1} * s/sqrt(n).
MeanCi mean_ci(const std::vector<double>& values, double level = 0.95);

/// One-tailed paired t-test of H1: mean(best - other) > 0.
/// p = 1 - CDF_t(t; n-1); 0.5 at t = 0; floored at 1e-12 (and capped at
/// 1 - 1e-12) for zero-variance differences.
double one_tailed_paired_ttest(const std::vector<double>& best, const std::vector<double>& other);

inline constexpr double kPValueFloor = 1e-12;

/// Student-t CDF and inverse (via the regularized incomplete beta function).
double student_t_cdf(double t, int dof);
double student_t_quantile(double p, int dof);

}  // namespace lungrad
