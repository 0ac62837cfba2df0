#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lungrad/features.hpp"

namespace lungrad {

struct ForestParams {
  int n_trees = 100;
  int max_depth = 0;  // 0 = unlimited
  int min_samples_leaf = 1;
  int mtry = 0;  // 0 = ceil(sqrt(d))
  bool bootstrap = true;
  std::uint64_t seed = 0;
  bool parallel = true;  // parallel across trees; results are thread-count independent
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double leaf_prob = 0.0;  // class-1 probability at a leaf
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // node 0 is the root

  double predict(const double* row) const {
    int cur = 0;
    while (nodes[static_cast<std::size_t>(cur)].feature >= 0) {
      const TreeNode& n = nodes[static_cast<std::size_t>(cur)];
      cur = row[n.feature] < n.threshold ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(cur)].leaf_prob;
  }
};

struct RandomForest {
  std::vector<DecisionTree> trees;
  std::vector<std::string> feature_names;
  std::vector<double> importance_sums;  // per-feature impurity decrease summed over trees
  ForestParams params;
  std::size_t n_train = 0;

  /// Versioned JSON round-trip for transfer experiments.
  std::string to_json() const;
  static RandomForest from_json(const std::string& text);
  void save(const std::string& path) const;
  static RandomForest load(const std::string& path);
};

/// Trains a Breiman random forest: bootstrap per tree (n draws with
/// replacement), mtry features without replacement per node, best split by
/// weighted child Gini impurity with ties broken by lowest feature index
/// then lowest threshold. Per-tree RNG streams derive from (seed, tree
/// index), so the forest is identical for any thread count.
RandomForest train_forest(const FeatureTable& x, const std::vector<int>& y, const ForestParams& params);

/// Mean over trees of the class-1 leaf probability.
std::vector<double> predict_proba(const RandomForest& forest, const FeatureTable& x);

/// Mean impurity decrease per feature, normalized to sum 1 (uniform when no
/// split used any feature).
std::vector<double> gini_importance(const RandomForest& forest);

struct FeatureRanking {
  std::vector<std::string> names;             // column order of the ranked table
  std::vector<std::int64_t> summed_score;     // total rank score per feature (0 = best rank)
  std::vector<std::size_t> final_order;       // permutation, best feature first
  std::vector<double> mean_importance;        // mean normalized importance over runs
  int n_runs = 0;
};

/// Trains n_runs forests with seeds base_seed + r; each run adds every
/// feature's rank (descending importance, ties by ascending index) to its
/// summed score. Final order sorts the summed score ascending, ties by
/// ascending index.
FeatureRanking aggregate_ranks(const FeatureTable& x, const std::vector<int>& y, const ForestParams& params,
                               int n_runs = 100, std::uint64_t base_seed = 0);

struct CvProtocol {
  int n_folds = 5;
  int n_model_seeds = 5;
  std::uint64_t fold_seed = 0;
  std::uint64_t model_seed = 0;
};

struct KSweepResult {
  int best_k = 0;
  std::vector<double> mean_auc;  // indexed by K-1
};

/// For each K in 1..k_max, evaluates the top-K features by the CV protocol
/// (n_model_seeds forests x n_folds stratified folds, mean AUC over all
/// seed-fold cells); best_k maximizes mean AUC, ties to the smaller K.
KSweepResult top_k_sweep(const FeatureTable& x, const std::vector<int>& y, const FeatureRanking& ranking, int k_max,
                         const ForestParams& params, const CvProtocol& protocol);

}  // namespace lungrad
