#include "lungrad/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace lungrad {

namespace {

using json = nlohmann::ordered_json;

FeatureTable take_rows(const FeatureTable& x, const std::vector<std::size_t>& rows) {
  FeatureTable out(x.feature_names());
  for (std::size_t r : rows) {
    out.add_row(x.subject_ids()[r], std::vector<double>(x.row(r), x.row(r) + x.n_features()), x.labels()[r]);
  }
  return out;
}

std::vector<int> take_labels(const std::vector<int>& y, const std::vector<std::size_t>& rows) {
  std::vector<int> out;
  out.reserve(rows.size());
  for (std::size_t r : rows) out.push_back(y[r]);
  return out;
}

/// TPR of the score staircase evaluated on a fixed FPR grid (vertical ROC
/// averaging): tpr(f) = max tpr over operating points with fpr <= f.
std::vector<double> tpr_on_grid(const std::vector<double>& scores, const std::vector<int>& labels,
                                const std::vector<double>& grid) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  double n_pos = 0.0, n_neg = 0.0;
  for (int l : labels) {
    (l ? n_pos : n_neg) += 1.0;
  }
  std::vector<std::pair<double, double>> points;  // (fpr, tpr) staircase corners
  points.emplace_back(0.0, 0.0);
  double tp = 0.0, fp = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    double s = scores[order[i]];
    while (i < order.size() && scores[order[i]] == s) {
      (labels[order[i]] ? tp : fp) += 1.0;
      ++i;
    }
    points.emplace_back(fp / n_neg, tp / n_pos);
  }
  std::vector<double> tpr(grid.size(), 0.0);
  std::size_t pi = 0;
  double best = 0.0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    while (pi < points.size() && points[pi].first <= grid[g] + 1e-12) {
      best = std::max(best, points[pi].second);
      ++pi;
    }
    tpr[g] = best;
  }
  return tpr;
}

struct SplitSelection {
  std::vector<std::string> features;
  int k = 0;
};

/// Rank on the given rows and sweep K with an inner CV over those rows.
SplitSelection select_on_rows(const FeatureTable& x, const std::vector<int>& y,
                              const std::vector<std::size_t>& rows, const ExperimentConfig& config,
                              int inner_model_seeds) {
  FeatureTable x_fit = take_rows(x, rows);
  std::vector<int> y_fit = take_labels(y, rows);
  FeatureRanking ranking = aggregate_ranks(x_fit, y_fit, config.forest, config.ranking_runs, config.rank_seed());
  int k_max = std::min<int>(config.k_max, static_cast<int>(x.n_features()));
  CvProtocol protocol{config.n_folds, inner_model_seeds, config.fold_seed() ^ 0x5555, config.model_seed() ^ 0x5555};
  KSweepResult sweep = top_k_sweep(x_fit, y_fit, ranking, k_max, config.forest, protocol);
  SplitSelection sel;
  sel.k = sweep.best_k;
  for (int i = 0; i < sweep.best_k; ++i) {
    sel.features.push_back(ranking.names[ranking.final_order[static_cast<std::size_t>(i)]]);
  }
  return sel;
}

}  // namespace

std::vector<double> ExperimentReport::auc_cells() const {
  std::vector<double> cells;
  for (const auto& per_seed : auc) cells.insert(cells.end(), per_seed.begin(), per_seed.end());
  return cells;
}

ExperimentReport run_experiment(const FeatureTable& features, const std::vector<int>& labels,
                                const ExperimentConfig& config) {
  if (features.n_rows() != labels.size()) throw Error(ErrorCode::LengthMismatch, "rows != labels");
  for (double v : features.data()) {
    if (std::isnan(v)) throw Error(ErrorCode::MissingValues, "features must be complete (impute first)");
  }

  ExperimentReport report;
  report.feature_groups = config.feature_groups;
  report.base_seed = config.base_seed;
  report.paper_faithful = config.paper_faithful;
  report.ppv_target = config.ppv_target;

  FeatureRanking full_ranking;
  SplitSelection global_selection;
  if (config.paper_faithful) {
    full_ranking = aggregate_ranks(features, labels, config.forest, config.ranking_runs, config.rank_seed());
    int k_max = std::min<int>(config.k_max, static_cast<int>(features.n_features()));
    CvProtocol protocol{config.n_folds, config.n_model_seeds, config.fold_seed(), config.model_seed()};
    KSweepResult sweep = top_k_sweep(features, labels, full_ranking, k_max, config.forest, protocol);
    global_selection.k = sweep.best_k;
    for (int i = 0; i < sweep.best_k; ++i) {
      global_selection.features.push_back(full_ranking.names[full_ranking.final_order[static_cast<std::size_t>(i)]]);
    }
    report.chosen_k = sweep.best_k;
    report.selected_features = global_selection.features;
    for (int i = 0; i < sweep.best_k; ++i) {
      report.selected_importance.push_back(
          full_ranking.mean_importance[full_ranking.final_order[static_cast<std::size_t>(i)]]);
    }
  }

  report.roc_fpr.resize(101);
  for (int g = 0; g <= 100; ++g) report.roc_fpr[static_cast<std::size_t>(g)] = g / 100.0;

  for (int s = 0; s < config.n_model_seeds; ++s) {
    auto folds = stratified_kfold(labels, config.n_folds, config.fold_seed() + static_cast<std::uint64_t>(s));
    std::vector<double> fold_auc;
    std::vector<double> pooled_scores(features.n_rows(), 0.0);
    for (int fold = 0; fold < config.n_folds; ++fold) {
      std::vector<std::size_t> train_rows, test_rows;
      for (int ff = 0; ff < config.n_folds; ++ff) {
        auto& dst = ff == fold ? test_rows : train_rows;
        dst.insert(dst.end(), folds[static_cast<std::size_t>(ff)].begin(), folds[static_cast<std::size_t>(ff)].end());
      }

      SplitSelection selection;
      if (config.paper_faithful) {
        selection = global_selection;
      } else {
        selection = select_on_rows(features, labels, train_rows, config, /*inner_model_seeds=*/1);
        report.split_ks.push_back(selection.k);
      }

      FeatureTable x_sel = features.select_columns(selection.features);
      FeatureTable x_train = take_rows(x_sel, train_rows);
      FeatureTable x_test = take_rows(x_sel, test_rows);
      std::vector<int> y_train = take_labels(labels, train_rows);
      std::vector<int> y_test = take_labels(labels, test_rows);

      ForestParams params = config.forest;
      params.seed = config.model_seed() + static_cast<std::uint64_t>(s);
      RandomForest forest = train_forest(x_train, y_train, params);
      std::vector<double> scores = predict_proba(forest, x_test);
      fold_auc.push_back(roc_auc(scores, y_test));
      for (std::size_t i = 0; i < test_rows.size(); ++i) pooled_scores[test_rows[i]] = scores[i];
    }
    report.auc.push_back(fold_auc);
    report.operating_points.push_back(sensitivity_at_ppv(pooled_scores, labels, config.ppv_target));
    report.roc_seed_tpr.push_back(tpr_on_grid(pooled_scores, labels, report.roc_fpr));
  }

  // Aggregate.
  std::vector<double> seed_means;
  double total = 0.0;
  int cells = 0;
  for (const auto& per_seed : report.auc) {
    double m = std::accumulate(per_seed.begin(), per_seed.end(), 0.0) / static_cast<double>(per_seed.size());
    seed_means.push_back(m);
    total = std::accumulate(per_seed.begin(), per_seed.end(), total);
    cells += static_cast<int>(per_seed.size());
  }
  report.mean_auc = total / cells;
  report.auc_ci = seed_means.size() >= 2 ? mean_ci(seed_means) : MeanCi{seed_means[0], seed_means[0], seed_means[0]};

  std::vector<double> sens;
  for (const auto& op : report.operating_points) {
    if (op) sens.push_back(op->sensitivity);
  }
  if (!sens.empty()) {
    report.mean_sensitivity = std::accumulate(sens.begin(), sens.end(), 0.0) / static_cast<double>(sens.size());
    if (sens.size() >= 2) report.sensitivity_ci = mean_ci(sens);
  }

  report.roc_mean_tpr.assign(report.roc_fpr.size(), 0.0);
  for (const auto& tpr : report.roc_seed_tpr) {
    for (std::size_t g = 0; g < tpr.size(); ++g) report.roc_mean_tpr[g] += tpr[g];
  }
  for (double& v : report.roc_mean_tpr) v /= static_cast<double>(report.roc_seed_tpr.size());

  if (!config.paper_faithful) {
    std::vector<int> ks = report.split_ks;
    std::sort(ks.begin(), ks.end());
    report.chosen_k = ks[ks.size() / 2];
    // Report the full-data ranking's top-K as the representative selection.
    full_ranking = aggregate_ranks(features, labels, config.forest, config.ranking_runs, config.rank_seed());
    for (int i = 0; i < report.chosen_k; ++i) {
      std::size_t f = full_ranking.final_order[static_cast<std::size_t>(i)];
      report.selected_features.push_back(full_ranking.names[f]);
      report.selected_importance.push_back(full_ranking.mean_importance[f]);
    }
  }
  return report;
}

TransferResult transfer_experiment(const FeatureTable& train, const std::vector<int>& train_labels,
                                   const FeatureTable& test, const std::vector<int>& test_labels,
                                   const ExperimentConfig& config) {
  std::vector<std::string> shared;
  for (const auto& name : train.feature_names()) {
    if (test.column_index(name) >= 0) shared.push_back(name);
  }
  if (shared.empty()) throw Error(ErrorCode::NoSharedFeatures, "train and test share no feature names");

  FeatureTable x_train = train.select_columns(shared);
  FeatureTable x_test = test.select_columns(shared);

  FeatureRanking ranking = aggregate_ranks(x_train, train_labels, config.forest, config.ranking_runs, config.rank_seed());
  int k_max = std::min<int>(config.k_max, static_cast<int>(shared.size()));
  CvProtocol protocol{config.n_folds, config.n_model_seeds, config.fold_seed(), config.model_seed()};
  KSweepResult sweep = top_k_sweep(x_train, train_labels, ranking, k_max, config.forest, protocol);

  std::vector<std::string> top;
  for (int i = 0; i < sweep.best_k; ++i) {
    top.push_back(ranking.names[ranking.final_order[static_cast<std::size_t>(i)]]);
  }
  ForestParams params = config.forest;
  params.seed = config.model_seed();
  RandomForest forest = train_forest(x_train.select_columns(top), train_labels, params);
  std::vector<double> scores = predict_proba(forest, x_test.select_columns(top));

  TransferResult result;
  result.auc = roc_auc(scores, test_labels);
  result.chosen_k = sweep.best_k;
  result.shared_features = std::move(shared);
  return result;
}

double logistic_objective(const std::vector<double>& weights, double bias, const std::vector<std::vector<double>>& x,
                          const std::vector<int>& y, double lambda) {
  double obj = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double z = bias;
    for (std::size_t f = 0; f < weights.size(); ++f) z += weights[f] * x[i][f];
    double yz = (y[i] ? 1.0 : -1.0) * z;
    // log(1 + exp(-yz)) without overflow
    obj += yz > 0.0 ? std::log1p(std::exp(-yz)) : -yz + std::log1p(std::exp(yz));
  }
  double reg = 0.0;
  for (double w : weights) reg += w * w;
  return obj + 0.5 * lambda * reg;
}

void logistic_gradient(const std::vector<double>& weights, double bias, const std::vector<std::vector<double>>& x,
                       const std::vector<int>& y, double lambda, std::vector<double>& grad_w, double& grad_b) {
  grad_w.assign(weights.size(), 0.0);
  grad_b = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double z = bias;
    for (std::size_t f = 0; f < weights.size(); ++f) z += weights[f] * x[i][f];
    double yi = y[i] ? 1.0 : -1.0;
    double s = 1.0 / (1.0 + std::exp(yi * z));  // sigmoid(-y z)
    double coeff = -yi * s;
    for (std::size_t f = 0; f < weights.size(); ++f) grad_w[f] += coeff * x[i][f];
    grad_b += coeff;
  }
  for (std::size_t f = 0; f < weights.size(); ++f) grad_w[f] += lambda * weights[f];
}

LogisticFit logistic_fit(const std::vector<std::vector<double>>& x, const std::vector<int>& y, double lambda,
                         double tol, int max_iter) {
  const std::size_t d = x.empty() ? 0 : x[0].size();
  LogisticFit fit;
  fit.weights.assign(d, 0.0);
  fit.bias = 0.0;

  std::vector<double> grad_w;
  double grad_b = 0.0;
  double obj = logistic_objective(fit.weights, fit.bias, x, y, lambda);
  for (int it = 0; it < max_iter; ++it) {
    logistic_gradient(fit.weights, fit.bias, x, y, lambda, grad_w, grad_b);
    double norm2 = grad_b * grad_b;
    for (double g : grad_w) norm2 += g * g;
    fit.grad_norm = std::sqrt(norm2);
    fit.iterations = it;
    if (fit.grad_norm <= tol) {
      fit.converged = true;
      return fit;
    }
    // Backtracking line search on the full-batch objective.
    double step = 1.0;
    for (int ls = 0; ls < 60; ++ls) {
      std::vector<double> w_next(fit.weights);
      for (std::size_t f = 0; f < d; ++f) w_next[f] -= step * grad_w[f];
      double b_next = fit.bias - step * grad_b;
      double obj_next = logistic_objective(w_next, b_next, x, y, lambda);
      if (obj_next <= obj - 1e-4 * step * norm2) {
        fit.weights = std::move(w_next);
        fit.bias = b_next;
        obj = obj_next;
        break;
      }
      step *= 0.5;
    }
  }
  logistic_gradient(fit.weights, fit.bias, x, y, lambda, grad_w, grad_b);
  double norm2 = grad_b * grad_b;
  for (double g : grad_w) norm2 += g * g;
  fit.grad_norm = std::sqrt(norm2);
  fit.converged = fit.grad_norm <= tol;
  return fit;
}

std::vector<double> logistic_baseline(const FeatureTable& x, const std::vector<int>& y,
                                      const std::vector<std::vector<std::size_t>>& folds, double lambda) {
  std::vector<double> aucs;
  for (std::size_t fold = 0; fold < folds.size(); ++fold) {
    std::vector<std::size_t> train_rows, test_rows;
    for (std::size_t ff = 0; ff < folds.size(); ++ff) {
      auto& dst = ff == fold ? test_rows : train_rows;
      dst.insert(dst.end(), folds[ff].begin(), folds[ff].end());
    }
    const std::size_t d = x.n_features();
    // z-score statistics fit on the training rows only
    std::vector<double> mean(d, 0.0), sd(d, 0.0);
    for (std::size_t r : train_rows) {
      for (std::size_t f = 0; f < d; ++f) mean[f] += x.value(r, f);
    }
    for (double& m : mean) m /= static_cast<double>(train_rows.size());
    for (std::size_t r : train_rows) {
      for (std::size_t f = 0; f < d; ++f) {
        double dv = x.value(r, f) - mean[f];
        sd[f] += dv * dv;
      }
    }
    for (double& s : sd) {
      s = std::sqrt(s / static_cast<double>(train_rows.size()));
      if (s == 0.0) s = 1.0;
    }
    auto standardize = [&](const std::vector<std::size_t>& rows) {
      std::vector<std::vector<double>> out;
      out.reserve(rows.size());
      for (std::size_t r : rows) {
        std::vector<double> row(d);
        for (std::size_t f = 0; f < d; ++f) row[f] = (x.value(r, f) - mean[f]) / sd[f];
        out.push_back(std::move(row));
      }
      return out;
    };
    LogisticFit fit = logistic_fit(standardize(train_rows), take_labels(y, train_rows), lambda);
    if (!fit.converged) {
      std::fprintf(stderr, "warning: logistic baseline did not converge (grad norm %.3e)\n", fit.grad_norm);
    }
    auto x_test = standardize(test_rows);
    std::vector<double> scores;
    scores.reserve(test_rows.size());
    for (const auto& row : x_test) {
      double z = fit.bias;
      for (std::size_t f = 0; f < d; ++f) z += fit.weights[f] * row[f];
      scores.push_back(z);
    }
    aucs.push_back(roc_auc(scores, take_labels(y, test_rows)));
  }
  return aucs;
}

namespace {

std::string fmt(double v, const char* spec = "%.3f") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::string fmt_p(double p) {
  if (p < 0.001) return "p<.001";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", p);
  std::string s = buf;
  if (s.rfind("0.", 0) == 0) s = s.substr(1);  // render as p=.123
  return "p=" + s;
}

}  // namespace

std::string render_experiment_table(const std::vector<ExperimentReport>& reports) {
  if (reports.empty()) return "";
  std::size_t best = 0;
  for (std::size_t i = 1; i < reports.size(); ++i) {
    if (reports[i].mean_auc > reports[best].mean_auc) best = i;
  }
  std::ostringstream out;
  out << "| Features | AUC Mean | AUC 95% CI | AUC p | Sensitivity (PPV=" << fmt(reports[0].ppv_target * 100, "%.0f")
      << "%) | Sens 95% CI | Sens p | K |\n";
  out << "|---|---|---|---|---|---|---|---|\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    std::string group;
    for (std::size_t g = 0; g < r.feature_groups.size(); ++g) {
      if (g) group += "+";
      group += r.feature_groups[g];
    }
    std::string auc_p = "-", sens_p = "-";
    if (i != best) {
      auc_p = fmt_p(one_tailed_paired_ttest(reports[best].auc_cells(), r.auc_cells()));
      std::vector<double> best_sens, other_sens;
      for (std::size_t s = 0; s < r.operating_points.size() && s < reports[best].operating_points.size(); ++s) {
        if (r.operating_points[s] && reports[best].operating_points[s]) {
          best_sens.push_back(reports[best].operating_points[s]->sensitivity);
          other_sens.push_back(r.operating_points[s]->sensitivity);
        }
      }
      sens_p = best_sens.size() >= 2 ? fmt_p(one_tailed_paired_ttest(best_sens, other_sens)) : "-";
    }
    out << "| " << group << " | " << fmt(r.mean_auc) << " | (" << fmt(r.auc_ci.lower) << ", " << fmt(r.auc_ci.upper)
        << ") | " << auc_p << " | ";
    if (r.mean_sensitivity) {
      out << fmt(*r.mean_sensitivity * 100.0, "%.1f") << "% | ";
      if (r.sensitivity_ci) {
        out << "(" << fmt(r.sensitivity_ci->lower * 100.0, "%.1f") << "%, "
            << fmt(r.sensitivity_ci->upper * 100.0, "%.1f") << "%) | ";
      } else {
        out << "- | ";
      }
    } else {
      out << "unattainable | - | ";
    }
    out << sens_p << " | " << r.chosen_k << " |\n";
  }
  return out.str();
}

std::string render_transfer_table(const std::vector<std::string>& site_names,
                                  const std::vector<std::vector<std::optional<TransferResult>>>& matrix) {
  std::ostringstream out;
  out << "| Train \\ Test |";
  for (const auto& n : site_names) out << " " << n << " |";
  out << " Mean |\n|---|";
  for (std::size_t i = 0; i <= site_names.size(); ++i) out << "---|";
  out << "\n";
  for (std::size_t r = 0; r < site_names.size(); ++r) {
    out << "| " << site_names[r] << " |";
    double total = 0.0;
    int count = 0;
    for (std::size_t c = 0; c < site_names.size(); ++c) {
      if (matrix[r][c]) {
        out << " " << fmt(matrix[r][c]->auc) << " (" << matrix[r][c]->chosen_k << ") |";
        total += matrix[r][c]->auc;
        ++count;
      } else {
        out << " - |";
      }
    }
    out << (count ? " " + fmt(total / count) + " |" : " - |") << "\n";
  }
  return out.str();
}

std::string ExperimentReport::to_json() const {
  json j;
  j["format"] = "lungrad-report";
  j["version"] = 1;
  j["feature_groups"] = feature_groups;
  j["base_seed"] = base_seed;
  j["paper_faithful"] = paper_faithful;
  j["auc"] = auc;
  j["mean_auc"] = mean_auc;
  j["auc_ci"] = {auc_ci.mean, auc_ci.lower, auc_ci.upper};
  j["ppv_target"] = ppv_target;
  json ops = json::array();
  for (const auto& op : operating_points) {
    if (op) {
      ops.push_back({{"threshold", op->threshold},
                     {"sensitivity", op->sensitivity},
                     {"specificity", op->specificity},
                     {"accuracy", op->accuracy},
                     {"ppv", op->ppv}});
    } else {
      ops.push_back(nullptr);
    }
  }
  j["operating_points"] = std::move(ops);
  if (mean_sensitivity) j["mean_sensitivity"] = *mean_sensitivity;
  if (sensitivity_ci) j["sensitivity_ci"] = {sensitivity_ci->mean, sensitivity_ci->lower, sensitivity_ci->upper};
  j["chosen_k"] = chosen_k;
  j["split_ks"] = split_ks;
  j["selected_features"] = selected_features;
  j["selected_importance"] = selected_importance;
  j["roc_fpr"] = roc_fpr;
  j["roc_mean_tpr"] = roc_mean_tpr;
  j["roc_seed_tpr"] = roc_seed_tpr;
  return j.dump(2);
}

ExperimentReport ExperimentReport::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::CorruptHeader, std::string("report JSON: ") + e.what());
  }
  if (j.value("format", "") != "lungrad-report") {
    throw Error(ErrorCode::UnsupportedFormat, "not a lungrad report file");
  }
  ExperimentReport r;
  r.feature_groups = j.at("feature_groups").get<std::vector<std::string>>();
  r.base_seed = j.at("base_seed").get<std::uint64_t>();
  r.paper_faithful = j.at("paper_faithful").get<bool>();
  r.auc = j.at("auc").get<std::vector<std::vector<double>>>();
  r.mean_auc = j.at("mean_auc").get<double>();
  auto ci = j.at("auc_ci");
  r.auc_ci = {ci.at(0).get<double>(), ci.at(1).get<double>(), ci.at(2).get<double>()};
  r.ppv_target = j.at("ppv_target").get<double>();
  for (const auto& op : j.at("operating_points")) {
    if (op.is_null()) {
      r.operating_points.push_back(std::nullopt);
    } else {
      OperatingPoint o;
      o.threshold = op.at("threshold").get<double>();
      o.sensitivity = op.at("sensitivity").get<double>();
      o.specificity = op.at("specificity").get<double>();
      o.accuracy = op.at("accuracy").get<double>();
      o.ppv = op.at("ppv").get<double>();
      r.operating_points.push_back(o);
    }
  }
  if (j.contains("mean_sensitivity")) r.mean_sensitivity = j.at("mean_sensitivity").get<double>();
  if (j.contains("sensitivity_ci")) {
    auto sci = j.at("sensitivity_ci");
    r.sensitivity_ci = MeanCi{sci.at(0).get<double>(), sci.at(1).get<double>(), sci.at(2).get<double>()};
  }
  r.chosen_k = j.at("chosen_k").get<int>();
  r.split_ks = j.at("split_ks").get<std::vector<int>>();
  r.selected_features = j.at("selected_features").get<std::vector<std::string>>();
  r.selected_importance = j.at("selected_importance").get<std::vector<double>>();
  r.roc_fpr = j.at("roc_fpr").get<std::vector<double>>();
  r.roc_mean_tpr = j.at("roc_mean_tpr").get<std::vector<double>>();
  r.roc_seed_tpr = j.at("roc_seed_tpr").get<std::vector<std::vector<double>>>();
  return r;
}

}  // namespace lungrad
