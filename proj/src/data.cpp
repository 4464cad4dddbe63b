#include "flnn/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "flnn/error.hpp"
#include "flnn/rng.hpp"

namespace flnn {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    out.push_back(trim(std::string_view(line).substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::optional<double> parse_number(const std::string& s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::size_t RawTable::missing_row_count() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const auto& r) {
    return std::any_of(r.begin(), r.end(), [](const auto& c) { return !c.has_value(); });
  }));
}

RawTable parse_csv(const std::string& text, const CsvSchema& schema) {
  RawTable table;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool header_pending = schema.header;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split(line, schema.delimiter);
    if (schema.column_count && fields.size() != schema.column_count) {
      throw DataError(DataError::Kind::arity,
                      "expected " + std::to_string(schema.column_count) + " fields, found " +
                          std::to_string(fields.size()),
                      line_no);
    }
    if (header_pending) {
      table.header = std::move(fields);
      header_pending = false;
      continue;
    }
    std::vector<std::optional<std::string>> row;
    row.reserve(fields.size());
    for (auto& f : fields) {
      if (f.empty()) throw DataError(DataError::Kind::malformed, "empty field", line_no);
      if (f == schema.missing_token) {
        row.emplace_back(std::nullopt);
      } else {
        row.emplace_back(std::move(f));
      }
    }
    table.rows.push_back(std::move(row));
    table.line_numbers.push_back(line_no);
  }
  if (table.rows.empty()) throw DataError(DataError::Kind::empty, "no data rows");
  return table;
}

RawTable load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw DataError(DataError::Kind::unreadable, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_csv(ss.str(), schema);
  } catch (const DataError& e) {
    throw DataError(e.kind(), path.string() + ": " + e.what());
  }
}

std::size_t Dataset::positives() const {
  return static_cast<std::size_t>(std::count(targets.begin(), targets.end(), 1.0));
}

Dataset Dataset::subset(const std::vector<std::size_t>& indices) const {
  Dataset out;
  out.name = name;
  out.feature_names = feature_names;
  out.features = features.select_rows(indices);
  out.targets.reserve(indices.size());
  for (std::size_t i : indices) out.targets.push_back(targets[i]);
  return out;
}

Dataset preprocess(const RawTable& raw, const CsvSchema& schema, MissingPolicy policy,
                   std::string name) {
  const std::size_t ncols = raw.rows.front().size();
  if (schema.target_column >= ncols) {
    throw DataError(DataError::Kind::value, "target column out of range");
  }
  std::vector<std::size_t> feature_cols;
  for (std::size_t c = 0; c < ncols; ++c) {
    if (c == schema.target_column) continue;
    if (std::find(schema.id_columns.begin(), schema.id_columns.end(), c) !=
        schema.id_columns.end()) {
      continue;
    }
    feature_cols.push_back(c);
  }
  if (feature_cols.empty()) throw DataError(DataError::Kind::value, "no feature columns");

  Dataset ds;
  ds.name = std::move(name);
  for (std::size_t c : feature_cols) {
    ds.feature_names.push_back(c < raw.header.size() ? raw.header[c] : "x" + std::to_string(c));
  }

  // Parse into optional numbers first so median imputation can see every value.
  std::vector<std::vector<std::optional<double>>> values;
  std::vector<double> targets;
  for (std::size_t r = 0; r < raw.rows.size(); ++r) {
    const auto& row = raw.rows[r];
    const auto& label = row[schema.target_column];
    if (!label) {
      ++ds.dropped_rows;
      continue;
    }
    double t = 0.0;
    if (contains(schema.positive_labels, *label)) {
      t = 1.0;
    } else if (contains(schema.negative_labels, *label)) {
      t = -1.0;
    } else {
      throw DataError(DataError::Kind::value, "unmapped class label '" + *label + "'",
                      raw.line_numbers[r]);
    }
    std::vector<std::optional<double>> v;
    bool missing = false;
    for (std::size_t c : feature_cols) {
      if (!row[c]) {
        v.emplace_back(std::nullopt);
        missing = true;
        continue;
      }
      auto num = parse_number(*row[c]);
      if (!num) {
        throw DataError(DataError::Kind::value, "non-numeric value '" + *row[c] + "'",
                        raw.line_numbers[r]);
      }
      v.emplace_back(*num);
    }
    if (missing && policy == MissingPolicy::drop_rows) {
      ++ds.dropped_rows;
      continue;
    }
    values.push_back(std::move(v));
    targets.push_back(t);
  }

  std::vector<double> fill(feature_cols.size(), 0.0);
  if (policy == MissingPolicy::impute_median) {
    for (std::size_t c = 0; c < feature_cols.size(); ++c) {
      std::vector<double> present;
      for (const auto& v : values) {
        if (v[c]) present.push_back(*v[c]);
      }
      if (present.empty()) {
        throw DataError(DataError::Kind::value, "column " + std::to_string(feature_cols[c]) +
                                                    " has no values to impute from");
      }
      fill[c] = median(std::move(present));
    }
  }

  if (values.size() < 2) {
    throw DataError(DataError::Kind::value, "fewer than two usable rows after preprocessing");
  }
  ds.features = Matrix(values.size(), feature_cols.size());
  for (std::size_t r = 0; r < values.size(); ++r) {
    for (std::size_t c = 0; c < feature_cols.size(); ++c) {
      ds.features(r, c) = values[r][c].value_or(fill[c]);
    }
  }
  ds.targets = std::move(targets);
  return ds;
}

MinMaxScaler::MinMaxScaler(std::vector<double> lo, std::vector<double> hi)
    : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.size() != hi_.size()) throw InputError("scaler bounds have different lengths");
}

MinMaxScaler MinMaxScaler::fit(const Matrix& features) {
  if (features.empty()) throw InputError("cannot fit a scaler on zero rows");
  std::vector<double> lo(features.cols()), hi(features.cols());
  for (std::size_t c = 0; c < features.cols(); ++c) lo[c] = hi[c] = features(0, c);
  for (std::size_t r = 1; r < features.rows(); ++r) {
    for (std::size_t c = 0; c < features.cols(); ++c) {
      lo[c] = std::min(lo[c], features(r, c));
      hi[c] = std::max(hi[c], features(r, c));
    }
  }
  return MinMaxScaler(std::move(lo), std::move(hi));
}

double MinMaxScaler::transform_value(std::size_t c, double v) const {
  const double range = hi_[c] - lo_[c];
  if (range == 0.0) return 0.0;
  return 2.0 * (v - lo_[c]) / range - 1.0;
}

Matrix MinMaxScaler::transform(const Matrix& features) const {
  if (features.cols() != lo_.size()) throw InputError("scaler fitted on a different width");
  Matrix out(features.rows(), features.cols());
  for (std::size_t r = 0; r < features.rows(); ++r) {
    for (std::size_t c = 0; c < features.cols(); ++c) {
      out(r, c) = transform_value(c, features(r, c));
    }
  }
  return out;
}

std::vector<std::size_t> MinMaxScaler::constant_columns() const {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < lo_.size(); ++c) {
    if (hi_[c] == lo_[c]) out.push_back(c);
  }
  return out;
}

std::string MinMaxScaler::to_json() const {
  nlohmann::json j;
  j["min"] = lo_;
  j["max"] = hi_;
  return j.dump(2) + "\n";
}

MinMaxScaler MinMaxScaler::from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    return MinMaxScaler(j.at("min").get<std::vector<double>>(),
                        j.at("max").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("invalid scaler file: ") + e.what());
  }
}

FoldPair two_fold_split(std::size_t rows, std::uint64_t seed) {
  if (rows < 2) throw InputError("two_fold_split needs at least two rows");
  std::vector<std::size_t> perm(rows);
  for (std::size_t i = 0; i < rows; ++i) perm[i] = i;
  Rng rng(seed);
  for (std::size_t i = rows - 1; i > 0; --i) {
    std::swap(perm[i], perm[rng.below(i + 1)]);
  }
  const std::size_t half = (rows + 1) / 2;
  FoldPair f;
  f.fold_a.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(half));
  f.fold_b.assign(perm.begin() + static_cast<std::ptrdiff_t>(half), perm.end());
  std::sort(f.fold_a.begin(), f.fold_a.end());
  std::sort(f.fold_b.begin(), f.fold_b.end());
  return f;
}

}  // namespace flnn
