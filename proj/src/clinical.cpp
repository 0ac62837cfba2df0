#include "lungrad/clinical.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace lungrad {

const std::vector<std::string>& dvb_canonical_columns() {
  static const std::vector<std::string> cols = {"age", "sex", "wbc", "lym", "lym_ratio", "temperature", "spo2"};
  return cols;
}

int ClinicalTable::column_index(const std::string& name) const {
  auto it = std::find(columns.begin(), columns.end(), name);
  return it == columns.end() ? -1 : static_cast<int>(it - columns.begin());
}

FeatureTable ClinicalTable::to_feature_table() const {
  FeatureTable table(columns);
  std::vector<double> row(columns.size());
  for (std::size_t r = 0; r < n_rows(); ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (!cells[r][c]) {
        throw Error(ErrorCode::MissingValues,
                    "subject '" + subject_ids[r] + "' column '" + columns[c] + "' is missing (impute first)");
      }
      row[c] = *cells[r][c];
    }
    table.add_row(subject_ids[r], row, labels[r]);
  }
  return table;
}

ClinicalSchema default_clinical_schema() {
  ClinicalSchema schema;
  for (const auto& c : dvb_canonical_columns()) schema[c] = c;
  schema["subject_id"] = "id";
  schema["icu"] = "label";
  return schema;
}

ClinicalSchema load_clinical_schema(const std::string& json_path) {
  std::ifstream in(json_path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open schema " + json_path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, json_path + ": " + e.what());
  }
  ClinicalSchema schema;
  for (auto it = j.begin(); it != j.end(); ++it) {
    schema[it.key()] = it.value().get<std::string>();
  }
  return schema;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return {};
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

std::optional<double> parse_cell(const std::string& raw, const std::string& column, std::size_t row) {
  std::string s = trim(raw);
  if (s.empty() || s == "NA" || s == "nan" || s == "NaN") return std::nullopt;
  if (column == "sex") {
    if (s == "M" || s == "m") return 1.0;
    if (s == "F" || s == "f") return 0.0;
  }
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::RangeViolation,
                "row " + std::to_string(row) + " column '" + column + "': cannot parse '" + s + "'");
  }
}

void validate_cell(double v, const std::string& column, std::size_t row) {
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::RangeViolation,
                "row " + std::to_string(row) + " column '" + column + "': " + what);
  };
  if (!std::isfinite(v)) fail("non-finite value");
  if (column == "age" && !(v > 0.0)) fail("age must be > 0");
  if ((column == "lym_ratio" || column == "spo2") && (v < 0.0 || v > 100.0)) fail("must be in [0, 100]");
  if (column == "temperature" && (v <= 30.0 || v >= 45.0)) fail("must be in (30, 45)");
  if (column == "sex" && v != 0.0 && v != 1.0) fail("sex must be 0 (F) or 1 (M)");
}

}  // namespace

ClinicalTable parse_clinical_csv(const std::string& path, const ClinicalSchema& schema) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path);

  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    header = split_csv_line(line);
    break;
  }
  if (header.empty()) throw Error(ErrorCode::CorruptHeader, path + ": no header row");

  int id_col = -1, label_col = -1;
  std::vector<int> file_col_for(dvb_canonical_columns().size(), -1);
  for (std::size_t c = 0; c < header.size(); ++c) {
    std::string key = trim(header[c]);
    auto it = schema.find(key);
    if (it == schema.end()) {
      std::cerr << "warning: " << path << ": ignoring unknown column '" << key << "'\n";
      continue;
    }
    if (it->second == "id") {
      id_col = static_cast<int>(c);
    } else if (it->second == "label") {
      label_col = static_cast<int>(c);
    } else {
      auto canon = std::find(dvb_canonical_columns().begin(), dvb_canonical_columns().end(), it->second);
      if (canon == dvb_canonical_columns().end()) {
        throw Error(ErrorCode::InvalidConfig, "schema maps '" + key + "' to unknown column '" + it->second + "'");
      }
      file_col_for[static_cast<std::size_t>(canon - dvb_canonical_columns().begin())] = static_cast<int>(c);
    }
  }
  if (label_col < 0) throw Error(ErrorCode::MissingLabelColumn, path + ": no column mapped to the ICU label");

  ClinicalTable table;
  for (std::size_t k = 0; k < dvb_canonical_columns().size(); ++k) {
    if (file_col_for[k] >= 0) table.columns.push_back(dvb_canonical_columns()[k]);
  }

  std::set<std::string> seen_ids;
  std::size_t row_number = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    ++row_number;
    auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::CorruptHeader,
                  path + ": row " + std::to_string(row_number) + " width does not match header");
    }
    std::string id = id_col >= 0 ? trim(fields[static_cast<std::size_t>(id_col)]) : "row" + std::to_string(row_number);
    if (!seen_ids.insert(id).second) {
      throw Error(ErrorCode::DuplicateSubjectId, path + ": duplicate subject id '" + id + "'");
    }
    std::string label_raw = trim(fields[static_cast<std::size_t>(label_col)]);
    int label;
    if (label_raw == "0") {
      label = 0;
    } else if (label_raw == "1") {
      label = 1;
    } else {
      throw Error(ErrorCode::RangeViolation,
                  path + ": row " + std::to_string(row_number) + ": label must be 0 or 1, got '" + label_raw + "'");
    }

    std::vector<std::optional<double>> row;
    row.reserve(table.columns.size());
    for (std::size_t k = 0; k < dvb_canonical_columns().size(); ++k) {
      if (file_col_for[k] < 0) continue;
      const std::string& column = dvb_canonical_columns()[k];
      auto cell = parse_cell(fields[static_cast<std::size_t>(file_col_for[k])], column, row_number);
      if (cell) validate_cell(*cell, column, row_number);
      row.push_back(cell);
    }
    table.subject_ids.push_back(id);
    table.cells.push_back(std::move(row));
    table.labels.push_back(label);
  }
  return table;
}

ClinicalTable derive_lw_ratio(ClinicalTable table) {
  int ratio_col = table.column_index("lym_ratio");
  int lym_col = table.column_index("lym");
  int wbc_col = table.column_index("wbc");
  if (ratio_col < 0 || lym_col < 0 || wbc_col < 0) return table;
  for (auto& row : table.cells) {
    auto& ratio = row[static_cast<std::size_t>(ratio_col)];
    const auto& lym = row[static_cast<std::size_t>(lym_col)];
    const auto& wbc = row[static_cast<std::size_t>(wbc_col)];
    if (!ratio && lym && wbc && *wbc > 0.0) {
      ratio = 100.0 * *lym / *wbc;
    }
  }
  return table;
}

ClinicalTable impute_means(ClinicalTable table, const std::vector<std::size_t>& fit_rows) {
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t r : fit_rows) {
      if (table.cells[r][c]) {
        sum += *table.cells[r][c];
        ++n;
      }
    }
    bool any_missing =
        std::any_of(table.cells.begin(), table.cells.end(), [&](const auto& row) { return !row[c]; });
    if (n == 0) {
      if (any_missing) {
        throw Error(ErrorCode::AllMissingColumn,
                    "column '" + table.columns[c] + "' has no present value among fit rows");
      }
      continue;
    }
    double mean = sum / static_cast<double>(n);
    for (auto& row : table.cells) {
      if (!row[c]) row[c] = mean;
    }
  }
  return table;
}

ClinicalTable impute_means(ClinicalTable table) {
  std::vector<std::size_t> all(table.n_rows());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return impute_means(std::move(table), all);
}

}  // namespace lungrad
