#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lungrad/error.hpp"

namespace lungrad {

/// Named, ordered feature values for one subject.
struct FeatureVector {
  std::vector<std::string> names;
  std::vector<double> values;

  void append(std::string name, double value) {
    names.push_back(std::move(name));
    values.push_back(value);
  }
  void append(const FeatureVector& other, const std::string& prefix = {});
  std::size_t size() const { return values.size(); }
  double at(const std::string& name) const;
};

/// Row-major table of feature values: the contract between extraction and
/// learning. Labels are optional (absent for pure feature files).
class FeatureTable {
 public:
  FeatureTable() = default;
  FeatureTable(std::vector<std::string> feature_names) : feature_names_(std::move(feature_names)) {}

  void add_row(const std::string& subject_id, const std::vector<double>& values, std::optional<int> label = {});

  std::size_t n_rows() const { return subject_ids_.size(); }
  std::size_t n_features() const { return feature_names_.size(); }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const std::vector<std::string>& subject_ids() const { return subject_ids_; }
  const std::vector<std::optional<int>>& labels() const { return labels_; }
  std::vector<int> require_labels() const;

  double value(std::size_t row, std::size_t col) const { return data_[row * feature_names_.size() + col]; }
  const double* row(std::size_t r) const { return data_.data() + r * feature_names_.size(); }
  const std::vector<double>& data() const { return data_; }

  int column_index(const std::string& name) const;  // -1 when absent

  /// Table restricted to the given columns (order preserved as given).
  FeatureTable select_columns(const std::vector<std::string>& names) const;

  /// CSV with header `subject_id,<features...>[,icu]`. Lines starting with
  /// '#' carry run metadata and are skipped on read.
  void save_csv(const std::string& path, const std::string& metadata_comment = {}) const;
  static FeatureTable load_csv(const std::string& path);

 private:
  std::vector<std::string> feature_names_;
  std::vector<std::string> subject_ids_;
  std::vector<std::optional<int>> labels_;
  std::vector<double> data_;
};

/// Strict CSV splitting with double-quote escaping; no embedded newlines.
std::vector<std::string> split_csv_line(const std::string& line);
std::string csv_quote(const std::string& field);

}  // namespace lungrad
