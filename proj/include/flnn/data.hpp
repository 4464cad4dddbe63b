#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "flnn/matrix.hpp"

namespace flnn {

/// Column roles and label mapping for one CSV source.
struct CsvSchema {
  std::size_t column_count = 0;
  bool header = false;
  char delimiter = ',';
  std::string missing_token = "?";
  std::vector<std::size_t> id_columns;  // excluded from features
  std::size_t target_column = 0;
  std::vector<std::string> positive_labels;
  std::vector<std::string> negative_labels;
};

/// Parsed CSV cells; std::nullopt marks a missing-value token.
struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::optional<std::string>>> rows;
  std::vector<std::size_t> line_numbers;  // 1-based source line per row

  std::size_t missing_row_count() const;
};

/// Reads a delimited text file. Blank lines are skipped; fields are trimmed.
/// Throws DataError: unreadable (cannot open), arity (wrong field count),
/// malformed (empty field), empty (no data rows).
RawTable load_csv(const std::filesystem::path& path, const CsvSchema& schema);
RawTable parse_csv(const std::string& text, const CsvSchema& schema);

enum class MissingPolicy { drop_rows, impute_median };

struct Dataset {
  std::string name;
  Matrix features;
  std::vector<double> targets;  // -1 / +1
  std::vector<std::string> feature_names;
  std::size_t dropped_rows = 0;

  std::size_t size() const noexcept { return targets.size(); }
  std::size_t positives() const;
  Dataset subset(const std::vector<std::size_t>& indices) const;
};

/// Converts cells to numbers and labels to +-1. Feature values are left
/// unscaled; see MinMaxScaler. Rows whose target is missing are always
/// dropped. Throws DataError (value) on non-numeric features, unmapped labels,
/// or fewer than two surviving rows.
Dataset preprocess(const RawTable& raw, const CsvSchema& schema, MissingPolicy policy,
                   std::string name = {});

/// Per-column min-max map onto [-1, 1], fitted on a training fold.
///
/// Rows from other folds are transformed with the same statistics and may
/// land outside [-1, 1]; they are deliberately not clipped. A constant column
/// maps to 0 and is listed in constant_columns().
class MinMaxScaler {
 public:
  MinMaxScaler() = default;
  MinMaxScaler(std::vector<double> lo, std::vector<double> hi);

  static MinMaxScaler fit(const Matrix& features);

  Matrix transform(const Matrix& features) const;
  double transform_value(std::size_t column, double value) const;

  const std::vector<double>& lo() const noexcept { return lo_; }
  const std::vector<double>& hi() const noexcept { return hi_; }
  std::vector<std::size_t> constant_columns() const;

  std::string to_json() const;
  static MinMaxScaler from_json(const std::string& text);

 private:
  std::vector<double> lo_;
  std::vector<double> hi_;
};

/// Two disjoint index sets covering all rows, sizes differing by at most one
/// (fold_a gets the extra row). Indices within each fold are ascending.
struct FoldPair {
  std::vector<std::size_t> fold_a;
  std::vector<std::size_t> fold_b;
};

/// Uniformly random halving, reproducible by seed. Throws InputError if rows < 2.
FoldPair two_fold_split(std::size_t rows, std::uint64_t seed);

}  // namespace flnn
