#include "lungrad/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lungrad/rng.hpp"

namespace lungrad {

std::vector<std::vector<std::size_t>> stratified_kfold(const std::vector<int>& labels, int k, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorCode::InvalidSpec, "k must be >= 2");
  std::vector<std::size_t> negatives, positives;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    (labels[i] ? positives : negatives).push_back(i);
  }
  for (const auto* cls : {&negatives, &positives}) {
    if (cls->size() < static_cast<std::size_t>(k)) {
      throw Error(ErrorCode::ClassTooSmall, "each class needs at least k members");
    }
  }

  std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
  SplitMix64 rng(seed);
  // Deal each shuffled class round-robin, continuing from where the
  // previous class stopped so fold totals stay balanced too.
  std::size_t next_fold = 0;
  for (auto* cls : {&negatives, &positives}) {
    for (std::size_t i = cls->size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(rng.next_below(i));
      std::swap((*cls)[i - 1], (*cls)[j]);
    }
    for (std::size_t idx : *cls) {
      folds[next_fold].push_back(idx);
      next_fold = (next_fold + 1) % static_cast<std::size_t>(k);
    }
  }
  for (auto& fold : folds) std::sort(fold.begin(), fold.end());
  return folds;
}

namespace {

void check_both_classes(const std::vector<int>& labels) {
  bool has_pos = false, has_neg = false;
  for (int l : labels) {
    (l ? has_pos : has_neg) = true;
  }
  if (!has_pos || !has_neg) throw Error(ErrorCode::SingleClass, "both classes must be present");
}

}  // namespace

double roc_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size()) throw Error(ErrorCode::LengthMismatch, "scores/labels length mismatch");
  check_both_classes(labels);

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Group by tied score; count (positive, negative) pairs exactly.
  std::int64_t wins2 = 0;  // 2 * [s+ > s-] pairs, plus ties counted once
  std::int64_t n_pos = 0, n_neg = 0;
  std::int64_t neg_below = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    std::int64_t pos_in_group = 0, neg_in_group = 0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] ? pos_in_group : neg_in_group)++;
      ++j;
    }
    wins2 += 2 * pos_in_group * neg_below + pos_in_group * neg_in_group;
    neg_below += neg_in_group;
    n_pos += pos_in_group;
    n_neg += neg_in_group;
    i = j;
  }
  return static_cast<double>(wins2) / (2.0 * static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

std::optional<OperatingPoint> sensitivity_at_ppv(const std::vector<double>& scores, const std::vector<int>& labels,
                                                 double ppv_target) {
  if (scores.size() != labels.size()) throw Error(ErrorCode::LengthMismatch, "scores/labels length mismatch");
  check_both_classes(labels);

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  const double total_pos = static_cast<double>(std::count(labels.begin(), labels.end(), 1));
  const double total = static_cast<double>(labels.size());

  std::optional<OperatingPoint> best;
  double tp = 0.0, fp = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    // Advance through one tied-score block; the threshold sits at its value.
    double threshold = scores[order[i]];
    while (i < order.size() && scores[order[i]] == threshold) {
      (labels[order[i]] ? tp : fp) += 1.0;
      ++i;
    }
    double ppv = tp / (tp + fp);
    if (ppv >= ppv_target) {
      double sensitivity = tp / total_pos;
      if (!best || sensitivity > best->sensitivity) {
        OperatingPoint op;
        op.threshold = threshold;
        op.sensitivity = sensitivity;
        double tn = (total - total_pos) - fp;
        op.specificity = total - total_pos > 0 ? tn / (total - total_pos) : 0.0;
        op.accuracy = (tp + tn) / total;
        op.ppv = ppv;
        best = op;
      }
    }
  }
  return best;
}

MeanCi mean_ci(const std::vector<double>& values, double level) {
  const std::size_t n = values.size();
  if (n < 2) throw Error(ErrorCode::TooFewValues, "mean_ci needs n >= 2");
  double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  double sd = std::sqrt(ss / static_cast<double>(n - 1));
  double t = student_t_quantile(0.5 * (1.0 + level), static_cast<int>(n - 1));
  double half = t * sd / std::sqrt(static_cast<double>(n));
  return {mean, mean - half, mean + half};
}

double one_tailed_paired_ttest(const std::vector<double>& best, const std::vector<double>& other) {
  if (best.size() != other.size()) throw Error(ErrorCode::LengthMismatch, "paired vectors differ in length");
  const std::size_t n = best.size();
  if (n < 2) throw Error(ErrorCode::TooFewValues, "paired t-test needs n >= 2");
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += best[i] - other[i];
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = best[i] - other[i] - mean;
    ss += d * d;
  }
  double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (sd == 0.0) {
    if (mean == 0.0) return 0.5;
    return mean > 0.0 ? kPValueFloor : 1.0 - kPValueFloor;
  }
  double t = mean / (sd / std::sqrt(static_cast<double>(n)));
  double p = 1.0 - student_t_cdf(t, static_cast<int>(n - 1));
  return std::clamp(p, kPValueFloor, 1.0 - kPValueFloor);
}

namespace {

/// Regularized incomplete beta I_x(a, b) by the continued-fraction method.
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kFpMin = 1e-300;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

double reg_inc_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * betacf(a, b, x) / a;
  }
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

}  // namespace

double student_t_cdf(double t, int dof) {
  if (dof < 1) throw Error(ErrorCode::InvalidSpec, "t distribution needs dof >= 1");
  double v = static_cast<double>(dof);
  double x = v / (v + t * t);
  double tail = 0.5 * reg_inc_beta(0.5 * v, 0.5, x);
  return t >= 0.0 ? 1.0 - tail : tail;
}

double student_t_quantile(double p, int dof) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::InvalidSpec, "quantile needs p in (0, 1)");
  if (p == 0.5) return 0.0;
  // Bisection on the CDF; bracket grows geometrically.
  double lo = -1.0, hi = 1.0;
  while (student_t_cdf(lo, dof) > p) lo *= 2.0;
  while (student_t_cdf(hi, dof) < p) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (student_t_cdf(mid, dof) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace lungrad
