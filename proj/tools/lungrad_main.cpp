// Command-line driver: batch pipeline from a JSON config.
// Subcommands: synth, extract, rank, eval, transfer, report.

#include <omp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "lungrad/clinical.hpp"
#include "lungrad/eval.hpp"
#include "lungrad/forest.hpp"
#include "lungrad/hlq.hpp"
#include "lungrad/io.hpp"
#include "lungrad/synth.hpp"
#include "lungrad/texture.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace lungrad;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitPartial = 2;

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t h = 0xcbf29ce484222325ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fnv1a_file(const std::string& path, std::uint64_t h) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path);
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    h = fnv1a(buf, static_cast<std::size_t>(in.gcount()), h);
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

struct PipelineConfig {
  json raw;
  std::string config_dir;
  std::string output_dir = "out";
  std::uint64_t seed = 0;
  bool paper_faithful = false;
  std::string manifest_path;
  std::string clinical_schema_path;
  WlrConfig wlr;
  ForestParams forest;
  ExperimentConfig eval;
  std::vector<std::vector<std::string>> eval_groups = {{"WLR", "HLQ", "DVB"}};
  PhantomSpec synth;
  std::vector<std::pair<std::string, std::string>> transfer_sites;  // (name, features csv)

  std::uint64_t hash() const {
    std::string dump = raw.dump();
    std::uint64_t h = fnv1a(dump.data(), dump.size());
    return fnv1a(&seed, sizeof(seed), h);
  }
  std::string stamp() const { return "lungrad config_hash=" + hex64(hash()) + " seed=" + std::to_string(seed); }

  std::string resolve(const std::string& path) const {
    if (path.empty() || fs::path(path).is_absolute()) return path;
    return (fs::path(config_dir) / path).string();
  }
};

PipelineConfig load_config(const std::string& path, std::uint64_t seed_override, bool has_seed_override,
                           bool paper_faithful) {
  PipelineConfig cfg;
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open config " + path);
  try {
    in >> cfg.raw;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, path + ": " + e.what());
  }
  cfg.config_dir = fs::path(path).parent_path().string();
  const json& j = cfg.raw;

  cfg.output_dir = cfg.resolve(j.value("output_dir", std::string{"out"}));
  cfg.seed = j.value("seed", std::uint64_t{0});
  if (has_seed_override) cfg.seed = seed_override;
  cfg.paper_faithful = paper_faithful || j.value("paper_faithful", false);
  cfg.manifest_path = cfg.resolve(j.value("manifest", std::string{}));
  cfg.clinical_schema_path = cfg.resolve(j.value("clinical_schema", std::string{}));

  if (j.contains("extraction")) {
    const json& e = j.at("extraction");
    cfg.wlr.original_disc = Discretization::fixed_width(e.value("bin_width", 25.0));
    cfg.wlr.filtered_disc = Discretization::fixed_count(e.value("filtered_bin_count", 32));
    cfg.wlr.gldm_alpha = e.value("gldm_alpha", 0);
  }
  if (j.contains("forest")) {
    const json& f = j.at("forest");
    cfg.forest.n_trees = f.value("n_trees", 100);
    cfg.forest.max_depth = f.value("max_depth", 0);
    cfg.forest.min_samples_leaf = f.value("min_samples_leaf", 1);
    cfg.forest.mtry = f.value("mtry", 0);
    cfg.forest.bootstrap = f.value("bootstrap", true);
  }
  cfg.eval.forest = cfg.forest;
  cfg.eval.base_seed = cfg.seed;
  cfg.eval.paper_faithful = cfg.paper_faithful;
  if (j.contains("eval")) {
    const json& e = j.at("eval");
    cfg.eval.n_folds = e.value("n_folds", 5);
    cfg.eval.n_model_seeds = e.value("n_model_seeds", 5);
    cfg.eval.ranking_runs = e.value("ranking_runs", 100);
    cfg.eval.k_max = e.value("k_max", 100);
    cfg.eval.ppv_target = e.value("ppv_target", 0.70);
    if (e.contains("feature_groups")) {
      cfg.eval_groups = e.at("feature_groups").get<std::vector<std::vector<std::string>>>();
    }
  }
  for (const auto& combo : cfg.eval_groups) {
    for (const auto& g : combo) {
      if (g != "WLR" && g != "HLQ" && g != "DVB") {
        throw Error(ErrorCode::InvalidConfig, "unknown feature group '" + g + "' (expected WLR/HLQ/DVB)");
      }
    }
  }
  if (j.contains("synth")) {
    const json& s = j.at("synth");
    cfg.synth.n_subjects = s.value("n_subjects", 60);
    if (s.contains("dims")) {
      cfg.synth.dims = Dims{s.at("dims").at(0).get<int>(), s.at("dims").at(1).get<int>(), s.at("dims").at(2).get<int>()};
    }
    if (s.contains("spacing")) {
      cfg.synth.spacing = Spacing{s.at("spacing").at(0).get<double>(), s.at("spacing").at(1).get<double>(),
                                  s.at("spacing").at(2).get<double>()};
    }
    cfg.synth.blob_fraction_min = s.value("blob_fraction_min", cfg.synth.blob_fraction_min);
    cfg.synth.blob_fraction_max = s.value("blob_fraction_max", cfg.synth.blob_fraction_max);
    cfg.synth.severity_effect = s.value("severity_effect", cfg.synth.severity_effect);
    cfg.synth.age_effect = s.value("age_effect", cfg.synth.age_effect);
    cfg.synth.spo2_effect = s.value("spo2_effect", cfg.synth.spo2_effect);
    cfg.synth.bias = s.value("bias", cfg.synth.bias);
    cfg.synth.missing_rate = s.value("missing_rate", cfg.synth.missing_rate);
  }
  cfg.synth.seed = cfg.seed;
  if (j.contains("transfer")) {
    for (const auto& site : j.at("transfer").at("sites")) {
      cfg.transfer_sites.emplace_back(site.at("name").get<std::string>(),
                                      cfg.resolve(site.at("features").get<std::string>()));
    }
  }
  return cfg;
}

void atomic_write(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot create " + tmp);
    out << content;
    if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + tmp);
  }
  fs::rename(tmp, path);
}

struct ManifestEntry {
  std::string id, volume, lobe_mask, opacity_mask, clinical_row;
};

struct Manifest {
  std::vector<ManifestEntry> subjects;
  std::string clinical_csv;
  std::string dir;
};

Manifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open manifest " + path + " (run `lungrad synth` first?)");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, path + ": " + e.what());
  }
  Manifest m;
  m.dir = fs::path(path).parent_path().string();
  m.clinical_csv = j.value("clinical_csv", std::string{});
  for (const auto& s : j.at("subjects")) {
    m.subjects.push_back({s.at("id").get<std::string>(), s.at("volume").get<std::string>(),
                          s.at("lobe_mask").get<std::string>(), s.at("opacity_mask").get<std::string>(),
                          s.value("clinical_row", s.at("id").get<std::string>())});
  }
  return m;
}

std::string classify_feature(const std::string& name) {
  const auto& dvb = dvb_canonical_columns();
  if (std::find(dvb.begin(), dvb.end(), name) != dvb.end()) return "DVB";
  if (name.find(" VPO HU") != std::string::npos || name.find(" RPO HU") != std::string::npos) return "HLQ";
  return "WLR";
}

int cmd_synth(const PipelineConfig& cfg) {
  PhantomCohort cohort = synth_cohort(cfg.synth);
  std::string dir = cfg.output_dir + "/cohort";
  std::string manifest = write_cohort(cohort, dir);
  // Stamp the manifest with the config hash and seed.
  {
    std::ifstream in(manifest);
    json j;
    in >> j;
    in.close();
    j["config_hash"] = hex64(cfg.hash());
    j["seed"] = cfg.seed;
    atomic_write(manifest, j.dump(2) + "\n");
  }
  std::cout << "wrote " << cohort.subjects.size() << " subjects to " << dir << "\n";
  return kExitOk;
}

int cmd_extract(const PipelineConfig& cfg, int jobs) {
  std::string manifest_path = cfg.manifest_path.empty() ? cfg.output_dir + "/cohort/manifest.json" : cfg.manifest_path;
  Manifest manifest = load_manifest(manifest_path);
  fs::create_directories(cfg.output_dir + "/features");

  // Clinical table (optional): parsed, L/W ratio derived; imputation happens
  // at eval time on training folds (or up front with --paper-faithful).
  ClinicalTable clinical;
  bool have_clinical = !manifest.clinical_csv.empty();
  if (have_clinical) {
    ClinicalSchema schema = cfg.clinical_schema_path.empty() ? default_clinical_schema()
                                                             : load_clinical_schema(cfg.clinical_schema_path);
    clinical = derive_lw_ratio(parse_clinical_csv(manifest.dir + "/" + manifest.clinical_csv, schema));
    clinical = impute_means(clinical);
  }

  const std::vector<std::string> hlq_names = hlq_feature_names();
  const std::vector<std::string> wlr_names = wlr_feature_names();
  std::vector<std::string> image_names = hlq_names;
  image_names.insert(image_names.end(), wlr_names.begin(), wlr_names.end());

  std::vector<std::vector<double>> rows(manifest.subjects.size());
  std::vector<std::string> errors(manifest.subjects.size());
  std::vector<char> cached(manifest.subjects.size(), 0);

  if (jobs > 0) omp_set_num_threads(jobs);
  const std::int64_t n_subjects = static_cast<std::int64_t>(manifest.subjects.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t si = 0; si < n_subjects; ++si) {
    const ManifestEntry& entry = manifest.subjects[static_cast<std::size_t>(si)];
    try {
      std::string vol_path = manifest.dir + "/" + entry.volume;
      std::string lobe_path = manifest.dir + "/" + entry.lobe_mask;
      std::string opacity_path = manifest.dir + "/" + entry.opacity_mask;

      // Content hash keys the per-subject cache.
      std::uint64_t h = cfg.hash();
      for (const auto& p : {vol_path, lobe_path, opacity_path}) h = fnv1a_file(p, h);
      std::string subject_csv = cfg.output_dir + "/features/" + entry.id + "_features.csv";
      std::string stamp = "lungrad content_hash=" + hex64(h) + " " + cfg.stamp();

      if (fs::exists(subject_csv)) {
        std::ifstream probe(subject_csv);
        std::string first;
        std::getline(probe, first);
        if (first == "# " + stamp) {
          FeatureTable prev = FeatureTable::load_csv(subject_csv);
          if (prev.n_rows() == 1 && prev.feature_names() == image_names) {
            rows[static_cast<std::size_t>(si)] = std::vector<double>(prev.row(0), prev.row(0) + prev.n_features());
            cached[static_cast<std::size_t>(si)] = 1;
            continue;
          }
        }
      }

      VoxelVolume volume = load_volume(vol_path);
      LabelMask lobes = load_mask(lobe_path, MaskSemantics::LobeMap);
      LabelMask opacity = load_mask(opacity_path, MaskSemantics::BinaryOpacity);

      WlrConfig wlr_config = cfg.wlr;
      wlr_config.parallel = false;  // subjects already run in parallel
      FeatureVector hlq = extract_hlq(volume, lobes, opacity);
      FeatureVector wlr = extract_wlr(volume, opacity, wlr_config);

      std::vector<double> row = hlq.values;
      row.insert(row.end(), wlr.values.begin(), wlr.values.end());

      FeatureTable single(image_names);
      single.add_row(entry.id, row);
      single.save_csv(subject_csv + ".tmp", stamp);
      fs::rename(subject_csv + ".tmp", subject_csv);
      rows[static_cast<std::size_t>(si)] = std::move(row);
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(si)] = e.what();
    }
  }

  // Merge successful subjects (+ DVB columns when available).
  std::vector<std::string> merged_names = image_names;
  if (have_clinical) {
    merged_names.insert(merged_names.end(), clinical.columns.begin(), clinical.columns.end());
  }
  FeatureTable merged(merged_names);
  int n_failed = 0, n_cached = 0;
  for (std::size_t si = 0; si < manifest.subjects.size(); ++si) {
    if (!errors[si].empty()) {
      ++n_failed;
      continue;
    }
    n_cached += cached[si];
    std::vector<double> row = rows[si];
    std::optional<int> label;
    if (have_clinical) {
      auto it = std::find(clinical.subject_ids.begin(), clinical.subject_ids.end(),
                          manifest.subjects[si].clinical_row);
      if (it == clinical.subject_ids.end()) {
        errors[si] = "no clinical row '" + manifest.subjects[si].clinical_row + "'";
        ++n_failed;
        continue;
      }
      std::size_t cr = static_cast<std::size_t>(it - clinical.subject_ids.begin());
      for (std::size_t c = 0; c < clinical.columns.size(); ++c) row.push_back(*clinical.cells[cr][c]);
      label = clinical.labels[cr];
    }
    merged.add_row(manifest.subjects[si].id, row, label);
  }
  merged.save_csv(cfg.output_dir + "/features.csv", cfg.stamp());

  std::cout << "extracted " << merged.n_rows() << "/" << manifest.subjects.size() << " subjects (" << n_cached
            << " cached) -> " << cfg.output_dir << "/features.csv\n";
  if (n_failed > 0) {
    std::cerr << "failed subjects:\n";
    for (std::size_t si = 0; si < errors.size(); ++si) {
      if (!errors[si].empty()) std::cerr << "  " << manifest.subjects[si].id << ": " << errors[si] << "\n";
    }
    return kExitPartial;
  }
  return kExitOk;
}

FeatureTable load_features_or_die(const PipelineConfig& cfg) {
  std::string path = cfg.output_dir + "/features.csv";
  if (!fs::exists(path)) {
    throw Error(ErrorCode::IoFailure, path + " not found (run `lungrad extract` first)");
  }
  return FeatureTable::load_csv(path);
}

int cmd_rank(const PipelineConfig& cfg) {
  FeatureTable features = load_features_or_die(cfg);
  std::vector<int> labels = features.require_labels();
  ForestParams params = cfg.forest;
  FeatureRanking ranking = aggregate_ranks(features, labels, params, cfg.eval.ranking_runs, cfg.eval.rank_seed());

  std::ostringstream csv;
  csv << "# " << cfg.stamp() << "\n";
  csv << "rank,name,summed_score,mean_importance\n";
  for (std::size_t r = 0; r < ranking.final_order.size(); ++r) {
    std::size_t f = ranking.final_order[r];
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", ranking.mean_importance[f]);
    csv << (r + 1) << "," << csv_quote(ranking.names[f]) << "," << ranking.summed_score[f] << "," << buf << "\n";
  }
  atomic_write(cfg.output_dir + "/ranking.csv", csv.str());
  std::cout << "wrote " << cfg.output_dir << "/ranking.csv (" << ranking.names.size() << " features, "
            << ranking.n_runs << " runs)\n";
  return kExitOk;
}

int cmd_eval(const PipelineConfig& cfg) {
  FeatureTable features = load_features_or_die(cfg);
  std::vector<int> labels = features.require_labels();

  std::vector<ExperimentReport> reports;
  for (const auto& combo : cfg.eval_groups) {
    std::vector<std::string> columns;
    for (const auto& name : features.feature_names()) {
      if (std::find(combo.begin(), combo.end(), classify_feature(name)) != combo.end()) columns.push_back(name);
    }
    if (columns.empty()) {
      throw Error(ErrorCode::InvalidConfig, "feature group combination selects no columns");
    }
    ExperimentConfig config = cfg.eval;
    config.feature_groups = combo;
    ExperimentReport report = run_experiment(features.select_columns(columns), labels, config);
    std::string tag;
    for (const auto& g : combo) tag += (tag.empty() ? "" : "+") + g;
    atomic_write(cfg.output_dir + "/report_" + tag + ".json", report.to_json() + "\n");

    std::ostringstream roc;
    roc << "# " << cfg.stamp() << "\nfpr,mean_tpr";
    for (std::size_t s = 0; s < report.roc_seed_tpr.size(); ++s) roc << ",seed" << s << "_tpr";
    roc << "\n";
    for (std::size_t g = 0; g < report.roc_fpr.size(); ++g) {
      roc << report.roc_fpr[g] << "," << report.roc_mean_tpr[g];
      for (const auto& seed_tpr : report.roc_seed_tpr) roc << "," << seed_tpr[g];
      roc << "\n";
    }
    atomic_write(cfg.output_dir + "/roc_" + tag + ".csv", roc.str());
    reports.push_back(std::move(report));
  }

  std::string table = render_experiment_table(reports);
  atomic_write(cfg.output_dir + "/report.md", table + "\n<!-- " + cfg.stamp() + " -->\n");
  std::cout << table;
  return kExitOk;
}

int cmd_transfer(const PipelineConfig& cfg) {
  if (cfg.transfer_sites.size() < 2) {
    throw Error(ErrorCode::InvalidConfig, "transfer needs at least two sites in config.transfer.sites");
  }
  std::vector<std::string> names;
  std::vector<FeatureTable> tables;
  std::vector<std::vector<int>> labels;
  for (const auto& [name, path] : cfg.transfer_sites) {
    names.push_back(name);
    tables.push_back(FeatureTable::load_csv(path));
    labels.push_back(tables.back().require_labels());
  }
  std::vector<std::vector<std::optional<TransferResult>>> matrix(
      names.size(), std::vector<std::optional<TransferResult>>(names.size()));
  json jout;
  jout["format"] = "lungrad-transfer";
  jout["config_hash"] = hex64(cfg.hash());
  jout["seed"] = cfg.seed;
  json cells = json::array();
  for (std::size_t a = 0; a < names.size(); ++a) {
    for (std::size_t b = 0; b < names.size(); ++b) {
      if (a == b) continue;
      ExperimentConfig config = cfg.eval;
      TransferResult r = transfer_experiment(tables[a], labels[a], tables[b], labels[b], config);
      matrix[a][b] = r;
      cells.push_back({{"train", names[a]}, {"test", names[b]}, {"auc", r.auc}, {"k", r.chosen_k}});
    }
  }
  jout["cells"] = std::move(cells);
  atomic_write(cfg.output_dir + "/transfer.json", jout.dump(2) + "\n");
  std::string table = render_transfer_table(names, matrix);
  atomic_write(cfg.output_dir + "/transfer.md", table + "\n<!-- " + cfg.stamp() + " -->\n");
  std::cout << table;
  return kExitOk;
}

int cmd_report(const PipelineConfig& cfg, bool dictionary) {
  if (dictionary) {
    atomic_write(cfg.output_dir + "/feature_dictionary.md", feature_dictionary_markdown());
    std::cout << "wrote " << cfg.output_dir << "/feature_dictionary.md\n";
    return kExitOk;
  }
  std::vector<ExperimentReport> reports;
  for (const auto& entry : fs::directory_iterator(cfg.output_dir)) {
    std::string name = entry.path().filename().string();
    if (name.rfind("report_", 0) == 0 && entry.path().extension() == ".json") {
      std::ifstream in(entry.path());
      std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      reports.push_back(ExperimentReport::from_json(text));
    }
  }
  if (reports.empty()) {
    throw Error(ErrorCode::IoFailure, "no report_*.json under " + cfg.output_dir + " (run `lungrad eval` first)");
  }
  std::sort(reports.begin(), reports.end(),
            [](const ExperimentReport& a, const ExperimentReport& b) { return a.feature_groups < b.feature_groups; });
  std::string table = render_experiment_table(reports);
  atomic_write(cfg.output_dir + "/report.md", table + "\n<!-- " + cfg.stamp() + " -->\n");
  std::cout << table;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lobe-wise quantification + radiomics ICU-admission pipeline"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed_override = 0;
  bool paper_faithful = false;
  int jobs = 0;
  bool dictionary = false;
  app.add_option("--config", config_path, "pipeline config JSON")->required();
  auto* seed_opt = app.add_option("--seed", seed_override, "override the config seed");
  app.add_flag("--paper-faithful", paper_faithful,
               "fit imputation/ranking/K on the full dataset (as described in the source study)");
  app.add_option("--jobs", jobs, "worker threads (0 = OpenMP default)");

  auto* synth = app.add_subcommand("synth", "generate a synthetic phantom cohort");
  auto* extract = app.add_subcommand("extract", "extract HLQ + WLR (+DVB) features per subject");
  auto* rank = app.add_subcommand("rank", "aggregate Gini-importance feature ranking");
  auto* eval = app.add_subcommand("eval", "cross-validated evaluation per feature-group combination");
  auto* transfer = app.add_subcommand("transfer", "cross-site transfer matrix");
  auto* report = app.add_subcommand("report", "re-render Markdown reports from stored JSON");
  report->add_flag("--dictionary", dictionary, "write the feature dictionary instead");

  CLI11_PARSE(app, argc, argv);

  try {
    PipelineConfig cfg = load_config(config_path, seed_override, seed_opt->count() > 0, paper_faithful);
    if (jobs > 0) omp_set_num_threads(jobs);
    fs::create_directories(cfg.output_dir);
    if (synth->parsed()) return cmd_synth(cfg);
    if (extract->parsed()) return cmd_extract(cfg, jobs);
    if (rank->parsed()) return cmd_rank(cfg);
    if (eval->parsed()) return cmd_eval(cfg);
    if (transfer->parsed()) return cmd_transfer(cfg);
    if (report->parsed()) return cmd_report(cfg, dictionary);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
