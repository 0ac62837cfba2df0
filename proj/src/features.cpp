#include "lungrad/features.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace lungrad {

void FeatureVector::append(const FeatureVector& other, const std::string& prefix) {
  names.reserve(names.size() + other.names.size());
  values.reserve(values.size() + other.values.size());
  for (std::size_t i = 0; i < other.names.size(); ++i) {
    names.push_back(prefix + other.names[i]);
    values.push_back(other.values[i]);
  }
}

double FeatureVector::at(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return values[i];
  }
  throw Error(ErrorCode::InvalidSpec, "no feature named '" + name + "'");
}

void FeatureTable::add_row(const std::string& subject_id, const std::vector<double>& values,
                           std::optional<int> label) {
  if (values.size() != feature_names_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "row width " + std::to_string(values.size()) + " != " +
                                                  std::to_string(feature_names_.size()) + " features");
  }
  subject_ids_.push_back(subject_id);
  labels_.push_back(label);
  data_.insert(data_.end(), values.begin(), values.end());
}

std::vector<int> FeatureTable::require_labels() const {
  std::vector<int> out;
  out.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!labels_[i]) {
      throw Error(ErrorCode::MissingLabelColumn, "subject '" + subject_ids_[i] + "' has no label");
    }
    out.push_back(*labels_[i]);
  }
  return out;
}

int FeatureTable::column_index(const std::string& name) const {
  auto it = std::find(feature_names_.begin(), feature_names_.end(), name);
  return it == feature_names_.end() ? -1 : static_cast<int>(it - feature_names_.begin());
}

FeatureTable FeatureTable::select_columns(const std::vector<std::string>& names) const {
  std::vector<int> cols;
  cols.reserve(names.size());
  for (const auto& n : names) {
    int c = column_index(n);
    if (c < 0) throw Error(ErrorCode::NoSharedFeatures, "column '" + n + "' not in table");
    cols.push_back(c);
  }
  FeatureTable out(names);
  std::vector<double> row_values(names.size());
  for (std::size_t r = 0; r < n_rows(); ++r) {
    for (std::size_t j = 0; j < cols.size(); ++j) row_values[j] = value(r, static_cast<std::size_t>(cols[j]));
    out.add_row(subject_ids_[r], row_values, labels_[r]);
  }
  return out;
}

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void FeatureTable::save_csv(const std::string& path, const std::string& metadata_comment) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot create " + path);
  if (!metadata_comment.empty()) out << "# " << metadata_comment << "\n";
  out << "subject_id";
  for (const auto& n : feature_names_) out << "," << csv_quote(n);
  bool any_label = std::any_of(labels_.begin(), labels_.end(), [](const auto& l) { return l.has_value(); });
  if (any_label) out << ",icu";
  out << "\n";
  for (std::size_t r = 0; r < n_rows(); ++r) {
    out << csv_quote(subject_ids_[r]);
    for (std::size_t c = 0; c < feature_names_.size(); ++c) out << "," << format_double(value(r, c));
    if (any_label) {
      out << ",";
      if (labels_[r]) out << *labels_[r];
    }
    out << "\n";
  }
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path);
}

FeatureTable FeatureTable::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path);
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    header = split_csv_line(line);
    break;
  }
  if (header.empty() || header[0] != "subject_id") {
    throw Error(ErrorCode::CorruptHeader, path + ": expected 'subject_id' as first CSV column");
  }
  bool has_label = !header.empty() && header.back() == "icu";
  std::size_t n_features = header.size() - 1 - (has_label ? 1 : 0);
  FeatureTable table(std::vector<std::string>(header.begin() + 1, header.begin() + 1 + n_features));
  std::vector<double> row(n_features);
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::CorruptHeader, path + ": row width does not match header");
    }
    for (std::size_t c = 0; c < n_features; ++c) row[c] = std::stod(fields[1 + c]);
    std::optional<int> label;
    if (has_label && !fields.back().empty()) label = std::stoi(fields.back());
    table.add_row(fields[0], row, label);
  }
  return table;
}

}  // namespace lungrad
