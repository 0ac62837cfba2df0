#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lungrad/features.hpp"
#include "lungrad/forest.hpp"
#include "lungrad/metrics.hpp"

namespace lungrad {

struct ExperimentConfig {
  std::vector<std::string> feature_groups;  // informative tag, e.g. {"WLR","HLQ","DVB"}
  int n_folds = 5;
  int n_model_seeds = 5;
  int ranking_runs = 100;
  int k_max = 100;
  double ppv_target = 0.70;
  std::uint64_t base_seed = 0;
  ForestParams forest;
  /// Paper-faithful: rank and sweep K once on the full dataset, then
  /// cross-validate at the chosen K. Default (false) nests ranking and the
  /// K-sweep inside each training split (leakage-safe; the inner sweep uses
  /// a single model seed to bound cost).
  bool paper_faithful = false;

  std::uint64_t fold_seed() const { return base_seed * 0x10001ULL + 11; }
  std::uint64_t model_seed() const { return base_seed * 0x10001ULL + 22; }
  std::uint64_t rank_seed() const { return base_seed * 0x10001ULL + 33; }
};

struct ExperimentReport {
  std::vector<std::string> feature_groups;
  std::uint64_t base_seed = 0;
  bool paper_faithful = false;

  std::vector<std::vector<double>> auc;  // [seed][fold]
  double mean_auc = 0.0;
  MeanCi auc_ci;  // across the per-seed mean AUCs

  double ppv_target = 0.70;
  std::vector<std::optional<OperatingPoint>> operating_points;  // per seed, pooled CV scores
  std::optional<double> mean_sensitivity;                       // over seeds with attainable PPV
  std::optional<MeanCi> sensitivity_ci;

  int chosen_k = 0;                  // paper-faithful K, or the median split K
  std::vector<int> split_ks;         // nested mode: K per (seed, fold)
  std::vector<std::string> selected_features;  // top chosen_k names (final/full-data ranking)
  std::vector<double> selected_importance;     // matching mean importances

  std::vector<double> roc_fpr;                    // fixed grid 0, 0.01, ..., 1
  std::vector<double> roc_mean_tpr;               // vertical average over seeds
  std::vector<std::vector<double>> roc_seed_tpr;  // [seed][grid]

  std::vector<double> auc_cells() const;  // flattened in (seed, fold) order

  std::string to_json() const;
  static ExperimentReport from_json(const std::string& text);
};

/// The full protocol on a complete (post-imputation) feature table.
ExperimentReport run_experiment(const FeatureTable& features, const std::vector<int>& labels,
                                const ExperimentConfig& config);

struct TransferResult {
  double auc = 0.0;
  int chosen_k = 0;
  std::vector<std::string> shared_features;
};

/// Rank and select on the training site only, train on all of it, evaluate
/// AUC on the test site.
TransferResult transfer_experiment(const FeatureTable& train, const std::vector<int>& train_labels,
                                   const FeatureTable& test, const std::vector<int>& test_labels,
                                   const ExperimentConfig& config);

/// L2-regularized logistic regression (full-batch gradient descent,
/// backtracking line search, zero init). Features are z-scored with
/// statistics fit on the training rows of each fold.
struct LogisticFit {
  std::vector<double> weights;
  double bias = 0.0;
  bool converged = false;
  double grad_norm = 0.0;
  int iterations = 0;
};

LogisticFit logistic_fit(const std::vector<std::vector<double>>& x, const std::vector<int>& y, double lambda = 1.0,
                         double tol = 1e-8, int max_iter = 10000);
double logistic_objective(const std::vector<double>& weights, double bias, const std::vector<std::vector<double>>& x,
                          const std::vector<int>& y, double lambda);
void logistic_gradient(const std::vector<double>& weights, double bias, const std::vector<std::vector<double>>& x,
                       const std::vector<int>& y, double lambda, std::vector<double>& grad_w, double& grad_b);

/// Per-fold test AUC of the logistic baseline over the given folds.
std::vector<double> logistic_baseline(const FeatureTable& x, const std::vector<int>& y,
                                      const std::vector<std::vector<std::size_t>>& folds, double lambda = 1.0);

/// Table-6-style Markdown: one row per report, mean/CI/p for AUC and
/// sensitivity at the PPV target, and the chosen K. p-values are one-tailed
/// paired t-tests against the best row over (seed, fold) AUC cells.
std::string render_experiment_table(const std::vector<ExperimentReport>& reports);

/// Table-8-style transfer matrix with "auc (K)" cells.
std::string render_transfer_table(const std::vector<std::string>& site_names,
                                  const std::vector<std::vector<std::optional<TransferResult>>>& matrix);

}  // namespace lungrad
