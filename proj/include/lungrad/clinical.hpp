#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lungrad/error.hpp"
#include "lungrad/features.hpp"

namespace lungrad {

/// Canonical demographic/vital/blood columns. A site's table holds any
/// subset of these (columns missing at a site are simply absent).
const std::vector<std::string>& dvb_canonical_columns();

/// Clinical table: per-subject DVB cells (possibly missing) plus the ICU
/// label. Column order follows dvb_canonical_columns() restricted to the
/// columns present in the source file.
struct ClinicalTable {
  std::vector<std::string> subject_ids;
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<double>>> cells;  // [row][column]
  std::vector<int> labels;

  int column_index(const std::string& name) const;
  std::size_t n_rows() const { return subject_ids.size(); }

  /// Dense feature table; throws if any cell is still missing.
  FeatureTable to_feature_table() const;
};

/// Maps file headers to canonical column names. Key: header as it appears
/// in the CSV; value: canonical name, "id", or "label".
using ClinicalSchema = std::map<std::string, std::string>;

/// Schema for files already using canonical headers plus "subject_id"/"icu".
ClinicalSchema default_clinical_schema();
ClinicalSchema load_clinical_schema(const std::string& json_path);

/// Parses a CSV with a header row. Empty cells become Missing; sex accepts
/// M/F (1/0) or numeric; unknown columns are ignored with a warning.
ClinicalTable parse_clinical_csv(const std::string& path, const ClinicalSchema& schema);

/// Fills lym_ratio = 100*lym/wbc where it is missing and both inputs are
/// present with wbc > 0. Observed values are never overwritten.
ClinicalTable derive_lw_ratio(ClinicalTable table);

/// Replaces each Missing cell with the mean of the present values of that
/// column restricted to fit_rows. Throws AllMissingColumn if a column has
/// no present value among fit_rows.
ClinicalTable impute_means(ClinicalTable table, const std::vector<std::size_t>& fit_rows);
ClinicalTable impute_means(ClinicalTable table);  // fit on all rows

}  // namespace lungrad
