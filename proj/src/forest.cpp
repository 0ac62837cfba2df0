#include "lungrad/forest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "lungrad/metrics.hpp"
#include "lungrad/rng.hpp"

namespace lungrad {

namespace {

struct TreeBuilder {
  const FeatureTable& x;
  const std::vector<int>& y;
  int d;
  int mtry;
  int max_depth;
  int min_samples_leaf;
  SplitMix64 rng;
  std::vector<std::size_t> sample;  // bootstrap sample indices, partitioned in place
  std::vector<std::pair<double, int>> scratch;
  DecisionTree tree;
  std::vector<double>* importance;  // per-feature impurity-decrease accumulator
  std::size_t n_root;

  static double gini(std::int64_t n0, std::int64_t n1) {
    double n = static_cast<double>(n0 + n1);
    double p0 = static_cast<double>(n0) / n;
    double p1 = static_cast<double>(n1) / n;
    return 1.0 - p0 * p0 - p1 * p1;
  }

  int build(std::size_t begin, std::size_t end, int depth) {
    std::int64_t n1 = 0;
    for (std::size_t i = begin; i < end; ++i) n1 += y[sample[i]];
    const std::int64_t n = static_cast<std::int64_t>(end - begin);
    const std::int64_t n0 = n - n1;

    int node_id = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back({});
    TreeNode& placeholder = tree.nodes.back();
    placeholder.leaf_prob = static_cast<double>(n1) / static_cast<double>(n);

    const bool pure = n0 == 0 || n1 == 0;
    const bool depth_capped = max_depth > 0 && depth >= max_depth;
    const bool too_small = n < 2 * static_cast<std::int64_t>(min_samples_leaf);
    if (pure || depth_capped || too_small) return node_id;

    // Candidate features, sorted so ties resolve to the lowest index.
    std::vector<int> features = rng.sample_without_replacement(d, mtry);
    std::sort(features.begin(), features.end());

    const double parent_gini = gini(n0, n1);
    int best_feature = -1;
    double best_threshold = 0.0;
    double best_weighted = parent_gini;
    bool found = false;

    for (int f : features) {
      scratch.clear();
      for (std::size_t i = begin; i < end; ++i) {
        scratch.emplace_back(x.value(sample[i], static_cast<std::size_t>(f)), y[sample[i]]);
      }
      std::sort(scratch.begin(), scratch.end());
      std::int64_t left0 = 0, left1 = 0;
      for (std::size_t i = 0; i + 1 < scratch.size(); ++i) {
        (scratch[i].second ? left1 : left0)++;
        if (scratch[i].first == scratch[i + 1].first) continue;
        std::int64_t l = left0 + left1;
        std::int64_t r = n - l;
        if (l < min_samples_leaf || r < min_samples_leaf) continue;
        double weighted = (static_cast<double>(l) * gini(left0, left1) +
                           static_cast<double>(r) * gini(n0 - left0, n1 - left1)) /
                          static_cast<double>(n);
        if (!found || weighted < best_weighted) {
          best_weighted = weighted;
          best_feature = f;
          best_threshold = scratch[i].first + 0.5 * (scratch[i + 1].first - scratch[i].first);
          found = true;
        }
      }
    }
    if (!found) return node_id;

    (*importance)[static_cast<std::size_t>(best_feature)] +=
        static_cast<double>(n) / static_cast<double>(n_root) * (parent_gini - best_weighted);

    auto mid_it = std::partition(sample.begin() + static_cast<std::ptrdiff_t>(begin),
                                 sample.begin() + static_cast<std::ptrdiff_t>(end), [&](std::size_t idx) {
                                   return x.value(idx, static_cast<std::size_t>(best_feature)) < best_threshold;
                                 });
    std::size_t mid = static_cast<std::size_t>(mid_it - sample.begin());

    int left = build(begin, mid, depth + 1);
    int right = build(mid, end, depth + 1);
    TreeNode& node = tree.nodes[static_cast<std::size_t>(node_id)];
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = left;
    node.right = right;
    return node_id;
  }
};

void check_training_inputs(const FeatureTable& x, const std::vector<int>& y) {
  if (x.n_rows() != y.size()) throw Error(ErrorCode::LengthMismatch, "X rows != labels");
  if (x.n_rows() < 2) throw Error(ErrorCode::TooFewValues, "need at least 2 samples");
  bool has0 = false, has1 = false;
  for (int label : y) {
    (label ? has1 : has0) = true;
  }
  if (!has0 || !has1) throw Error(ErrorCode::SingleClass, "training labels contain a single class");
  for (double v : x.data()) {
    if (std::isnan(v)) throw Error(ErrorCode::MissingValues, "X contains NaN");
  }
}

int effective_mtry(int mtry, int d) {
  if (mtry <= 0) return static_cast<int>(std::ceil(std::sqrt(static_cast<double>(d))));
  return std::min(mtry, d);
}

}  // namespace

RandomForest train_forest(const FeatureTable& x, const std::vector<int>& y, const ForestParams& params) {
  check_training_inputs(x, y);
  if (params.n_trees < 1) throw Error(ErrorCode::InvalidSpec, "n_trees must be >= 1");

  const int d = static_cast<int>(x.n_features());
  const std::size_t n = x.n_rows();
  RandomForest forest;
  forest.params = params;
  forest.feature_names = x.feature_names();
  forest.n_train = n;
  forest.trees.resize(static_cast<std::size_t>(params.n_trees));
  forest.importance_sums.assign(static_cast<std::size_t>(d), 0.0);

  std::vector<std::vector<double>> per_tree_importance(static_cast<std::size_t>(params.n_trees));

  const std::int64_t n_trees = params.n_trees;
#pragma omp parallel for schedule(dynamic) if (params.parallel)
  for (std::int64_t t = 0; t < n_trees; ++t) {
    TreeBuilder builder{x,
                        y,
                        d,
                        effective_mtry(params.mtry, d),
                        params.max_depth,
                        std::max(1, params.min_samples_leaf),
                        derive_stream(params.seed, static_cast<std::uint64_t>(t)),
                        {},
                        {},
                        {},
                        nullptr,
                        n};
    per_tree_importance[static_cast<std::size_t>(t)].assign(static_cast<std::size_t>(d), 0.0);
    builder.importance = &per_tree_importance[static_cast<std::size_t>(t)];
    builder.sample.resize(n);
    if (params.bootstrap) {
      for (std::size_t i = 0; i < n; ++i) {
        builder.sample[i] = static_cast<std::size_t>(builder.rng.next_below(n));
      }
    } else {
      std::iota(builder.sample.begin(), builder.sample.end(), std::size_t{0});
    }
    builder.build(0, n, 0);
    forest.trees[static_cast<std::size_t>(t)] = std::move(builder.tree);
  }

  // Fixed-order accumulation keeps the sums identical across thread counts.
  for (const auto& imp : per_tree_importance) {
    for (int f = 0; f < d; ++f) forest.importance_sums[static_cast<std::size_t>(f)] += imp[static_cast<std::size_t>(f)];
  }
  return forest;
}

std::vector<double> predict_proba(const RandomForest& forest, const FeatureTable& x) {
  if (x.n_features() != forest.feature_names.size()) {
    throw Error(ErrorCode::DimensionMismatch, "prediction column count differs from training");
  }
  std::vector<double> out(x.n_rows(), 0.0);
  const std::int64_t n = static_cast<std::int64_t>(x.n_rows());
#pragma omp parallel for schedule(static) if (n > 256)
  for (std::int64_t r = 0; r < n; ++r) {
    double acc = 0.0;
    for (const auto& tree : forest.trees) acc += tree.predict(x.row(static_cast<std::size_t>(r)));
    out[static_cast<std::size_t>(r)] = acc / static_cast<double>(forest.trees.size());
  }
  return out;
}

std::vector<double> gini_importance(const RandomForest& forest) {
  std::vector<double> imp(forest.importance_sums);
  for (double& v : imp) v /= static_cast<double>(forest.trees.size());
  double total = std::accumulate(imp.begin(), imp.end(), 0.0);
  if (total <= 0.0) {
    std::fill(imp.begin(), imp.end(), 1.0 / static_cast<double>(imp.size()));
  } else {
    for (double& v : imp) v /= total;
  }
  return imp;
}

FeatureRanking aggregate_ranks(const FeatureTable& x, const std::vector<int>& y, const ForestParams& params,
                               int n_runs, std::uint64_t base_seed) {
  if (n_runs < 1) throw Error(ErrorCode::InvalidSpec, "n_runs must be >= 1");
  const std::size_t d = x.n_features();
  FeatureRanking ranking;
  ranking.names = x.feature_names();
  ranking.summed_score.assign(d, 0);
  ranking.mean_importance.assign(d, 0.0);
  ranking.n_runs = n_runs;

  std::vector<std::vector<std::int64_t>> run_scores(static_cast<std::size_t>(n_runs));
  std::vector<std::vector<double>> run_importance(static_cast<std::size_t>(n_runs));

  const std::int64_t runs = n_runs;
#pragma omp parallel for schedule(dynamic) if (params.parallel)
  for (std::int64_t r = 0; r < runs; ++r) {
    ForestParams run_params = params;
    run_params.seed = base_seed + static_cast<std::uint64_t>(r);
    run_params.parallel = false;  // the runs are already parallel
    RandomForest forest = train_forest(x, y, run_params);
    std::vector<double> imp = gini_importance(forest);

    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (imp[a] != imp[b]) return imp[a] > imp[b];
      return a < b;
    });
    auto& scores = run_scores[static_cast<std::size_t>(r)];
    scores.assign(d, 0);
    for (std::size_t rank = 0; rank < d; ++rank) scores[order[rank]] = static_cast<std::int64_t>(rank);
    run_importance[static_cast<std::size_t>(r)] = std::move(imp);
  }

  for (int r = 0; r < n_runs; ++r) {
    for (std::size_t f = 0; f < d; ++f) {
      ranking.summed_score[f] += run_scores[static_cast<std::size_t>(r)][f];
      ranking.mean_importance[f] += run_importance[static_cast<std::size_t>(r)][f];
    }
  }
  for (double& v : ranking.mean_importance) v /= static_cast<double>(n_runs);

  ranking.final_order.resize(d);
  std::iota(ranking.final_order.begin(), ranking.final_order.end(), std::size_t{0});
  std::sort(ranking.final_order.begin(), ranking.final_order.end(), [&](std::size_t a, std::size_t b) {
    if (ranking.summed_score[a] != ranking.summed_score[b]) {
      return ranking.summed_score[a] < ranking.summed_score[b];
    }
    return a < b;
  });
  return ranking;
}

KSweepResult top_k_sweep(const FeatureTable& x, const std::vector<int>& y, const FeatureRanking& ranking, int k_max,
                         const ForestParams& params, const CvProtocol& protocol) {
  if (k_max < 1 || static_cast<std::size_t>(k_max) > x.n_features()) {
    throw Error(ErrorCode::InvalidSpec, "k_max must be in [1, d]");
  }
  KSweepResult result;
  result.mean_auc.assign(static_cast<std::size_t>(k_max), 0.0);

  // Folds are fixed across K so the sweep compares like against like.
  std::vector<std::vector<std::vector<std::size_t>>> folds_per_seed;
  for (int s = 0; s < protocol.n_model_seeds; ++s) {
    folds_per_seed.push_back(
        stratified_kfold(y, protocol.n_folds, protocol.fold_seed + static_cast<std::uint64_t>(s)));
  }

  std::vector<std::string> ordered_names;
  ordered_names.reserve(static_cast<std::size_t>(k_max));
  for (int k = 0; k < k_max; ++k) ordered_names.push_back(ranking.names[ranking.final_order[static_cast<std::size_t>(k)]]);
  FeatureTable ranked = x.select_columns(ordered_names);

  const std::int64_t n_k = k_max;
#pragma omp parallel for schedule(dynamic) if (params.parallel)
  for (std::int64_t k = 1; k <= n_k; ++k) {
    FeatureTable top_k =
        ranked.select_columns(std::vector<std::string>(ordered_names.begin(), ordered_names.begin() + k));
    double auc_sum = 0.0;
    int cells = 0;
    for (int s = 0; s < protocol.n_model_seeds; ++s) {
      const auto& folds = folds_per_seed[static_cast<std::size_t>(s)];
      for (int fold = 0; fold < protocol.n_folds; ++fold) {
        std::vector<std::size_t> train_rows, test_rows;
        for (int ff = 0; ff < protocol.n_folds; ++ff) {
          const auto& src = folds[static_cast<std::size_t>(ff)];
          auto& dst = ff == fold ? test_rows : train_rows;
          dst.insert(dst.end(), src.begin(), src.end());
        }
        FeatureTable x_train(top_k.feature_names()), x_test(top_k.feature_names());
        std::vector<int> y_train, y_test;
        for (std::size_t ri : train_rows) {
          x_train.add_row(top_k.subject_ids()[ri],
                          std::vector<double>(top_k.row(ri), top_k.row(ri) + top_k.n_features()));
          y_train.push_back(y[ri]);
        }
        for (std::size_t ri : test_rows) {
          x_test.add_row(top_k.subject_ids()[ri],
                         std::vector<double>(top_k.row(ri), top_k.row(ri) + top_k.n_features()));
          y_test.push_back(y[ri]);
        }
        ForestParams fold_params = params;
        fold_params.seed = protocol.model_seed + static_cast<std::uint64_t>(s);
        fold_params.parallel = false;
        RandomForest forest = train_forest(x_train, y_train, fold_params);
        auc_sum += roc_auc(predict_proba(forest, x_test), y_test);
        ++cells;
      }
    }
    result.mean_auc[static_cast<std::size_t>(k - 1)] = auc_sum / cells;
  }

  result.best_k = 1;
  for (int k = 2; k <= k_max; ++k) {
    if (result.mean_auc[static_cast<std::size_t>(k - 1)] > result.mean_auc[static_cast<std::size_t>(result.best_k - 1)]) {
      result.best_k = k;
    }
  }
  return result;
}

namespace {

using json = nlohmann::ordered_json;

}  // namespace

std::string RandomForest::to_json() const {
  json j;
  j["format"] = "lungrad-forest";
  j["version"] = 1;
  j["params"] = {{"n_trees", params.n_trees},
                 {"max_depth", params.max_depth},
                 {"min_samples_leaf", params.min_samples_leaf},
                 {"mtry", params.mtry},
                 {"bootstrap", params.bootstrap},
                 {"seed", params.seed}};
  j["n_train"] = n_train;
  j["feature_names"] = feature_names;
  j["importance_sums"] = importance_sums;
  json jtrees = json::array();
  for (const auto& tree : trees) {
    json jnodes = json::array();
    for (const auto& n : tree.nodes) {
      jnodes.push_back({n.feature, n.threshold, n.left, n.right, n.leaf_prob});
    }
    jtrees.push_back(std::move(jnodes));
  }
  j["trees"] = std::move(jtrees);
  return j.dump();
}

RandomForest RandomForest::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::CorruptHeader, std::string("forest JSON: ") + e.what());
  }
  if (j.value("format", "") != "lungrad-forest" || j.value("version", 0) != 1) {
    throw Error(ErrorCode::UnsupportedFormat, "not a version-1 lungrad forest file");
  }
  RandomForest forest;
  const auto& p = j.at("params");
  forest.params.n_trees = p.at("n_trees").get<int>();
  forest.params.max_depth = p.at("max_depth").get<int>();
  forest.params.min_samples_leaf = p.at("min_samples_leaf").get<int>();
  forest.params.mtry = p.at("mtry").get<int>();
  forest.params.bootstrap = p.at("bootstrap").get<bool>();
  forest.params.seed = p.at("seed").get<std::uint64_t>();
  forest.n_train = j.at("n_train").get<std::size_t>();
  forest.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  forest.importance_sums = j.at("importance_sums").get<std::vector<double>>();
  for (const auto& jtree : j.at("trees")) {
    DecisionTree tree;
    for (const auto& jn : jtree) {
      TreeNode n;
      n.feature = jn.at(0).get<int>();
      n.threshold = jn.at(1).get<double>();
      n.left = jn.at(2).get<int>();
      n.right = jn.at(3).get<int>();
      n.leaf_prob = jn.at(4).get<double>();
      tree.nodes.push_back(n);
    }
    forest.trees.push_back(std::move(tree));
  }
  return forest;
}

void RandomForest::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot create " + path);
  out << to_json() << "\n";
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path);
}

RandomForest RandomForest::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json(text);
}

}  // namespace lungrad
