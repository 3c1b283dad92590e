/*
 * Copyright 2026 The fairweigh Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Binary-classification datasets with one binary sensitive attribute.
//
// Column layout produced by LoadCsv is canonical: the schema's numeric
// columns in schema order, then each categorical column (schema order)
// expanded into one-hot indicators ordered by byte-wise sorted category
// value, then the sensitive attribute as a 0/1 column when
// `include_sensitive` is set. Indicator columns are named "column=value".
//
// The synthetic generator draws
//
//   x1, x2 ~ N(0, 1) independently,
//   a      ~ Bernoulli(0.5),
//   y      ~ Bernoulli(sigmoid(1.5 * x1 - 1.0 * x2 + bias * (2a - 1))),
//
// so the intercept moves by +bias for a = 1 and -bias for a = 0 and the
// label-rate gap between groups grows with `bias`.

#ifndef FAIRWEIGH_DATASET_H_
#define FAIRWEIGH_DATASET_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace fairweigh {

using FeatureMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class ColumnKind { kNumeric, kOneHot, kSensitive };

struct Dataset {
  FeatureMatrix features;
  std::vector<int> sensitive;
  std::vector<int> labels;
  std::vector<std::string> feature_names;
  std::vector<ColumnKind> column_kinds;
  // Index of each row in the dataset it was originally loaded or generated
  // as. Carried through Subset/Split so callers can trace provenance.
  std::vector<std::size_t> row_ids;

  std::size_t size() const { return labels.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(features.cols()); }

  // Throws Error unless every invariant holds.
  void Validate() const;

  Dataset Subset(std::span<const std::size_t> rows) const;
};

// Counts over a labeling of rows; indexing is [y][a].
struct SubgroupStats {
  std::size_t m = 0;
  std::array<std::array<std::size_t, 2>, 2> counts{};
  std::array<std::size_t, 2> row_totals{};  // m_{y,*}
  std::array<std::size_t, 2> col_totals{};  // m_{*,a}

  std::size_t count(int y, int a) const { return counts[y][a]; }
  double proportion(int y, int a) const {
    return static_cast<double>(counts[y][a]) / static_cast<double>(m);
  }
};

struct DatasetSchema {
  std::string label_column;
  std::string sensitive_column;
  std::string positive_label_value;
  std::string privileged_group_value;
  std::vector<std::string> categorical_columns;
  std::vector<std::string> numeric_columns;
  bool include_sensitive = true;

  bool operator==(const DatasetSchema&) const = default;
};

struct LoadReport {
  std::size_t rows_read = 0;
  std::size_t rows_dropped = 0;
  std::size_t rows_kept = 0;
};

// Tokens treated as a missing value in any required column.
inline constexpr std::array<std::string_view, 3> kMissingTokens = {"", "?",
                                                                  "NA"};

// Parses a headered CSV. Rows with a missing or unparseable required value
// are dropped and counted in `report`. The label maps to 1 iff it equals
// `positive_label_value`; the sensitive attribute maps to 1 iff it equals
// `privileged_group_value`. Either column holding more than two distinct
// raw values is an error.
Dataset LoadCsv(const std::filesystem::path& path, const DatasetSchema& schema,
                LoadReport* report = nullptr);
Dataset LoadCsv(std::istream& in, const DatasetSchema& schema,
                LoadReport* report = nullptr);

// Writes every non-sensitive feature column followed by `sensitive_name`
// and `label_name` columns holding 0/1. Values use shortest round-trip
// formatting. ReadBackSchema() describes the written file.
void WriteCsv(const Dataset& ds, std::ostream& out,
              const std::string& sensitive_name = "sensitive",
              const std::string& label_name = "label");
void WriteCsv(const Dataset& ds, const std::filesystem::path& path,
              const std::string& sensitive_name = "sensitive",
              const std::string& label_name = "label");
DatasetSchema ReadBackSchema(const Dataset& ds,
                             const std::string& sensitive_name = "sensitive",
                             const std::string& label_name = "label");

// Shuffled train/test partition. The test side holds
// round(test_fraction * m) rows, rounding halves away from zero (so 0.05 of
// 10 rows is 1 row); a split leaving either side empty is an error.
std::pair<Dataset, Dataset> Split(const Dataset& ds, double test_fraction,
                                  std::uint64_t seed);

// `outcomes` may be true labels or predictions.
SubgroupStats ComputeSubgroupStats(std::span<const int> outcomes,
                                   std::span<const int> sensitive);

Dataset GenerateSynthetic(std::size_t n, double bias, std::uint64_t seed,
                          bool include_sensitive = true);

// Standardizes numeric columns to mean 0 and unit population variance
// (divide by m) using statistics from `train` only. Columns that are
// constant on `train` are left untouched in both outputs.
std::pair<Dataset, Dataset> Standardize(const Dataset& train,
                                        const Dataset& test);

}  // namespace fairweigh

#endif  // FAIRWEIGH_DATASET_H_
