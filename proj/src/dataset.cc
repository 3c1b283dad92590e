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

#include "fairweigh/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include <boost/random/bernoulli_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

#include "fairweigh/csv.h"
#include "fairweigh/error.h"
#include "fairweigh/random.h"

namespace fairweigh {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

bool IsMissing(std::string_view v) {
  return std::find(kMissingTokens.begin(), kMissingTokens.end(), v) !=
         kMissingTokens.end();
}

bool ParseDouble(std::string_view s, double* out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(*out);
}

std::string FormatDouble(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void CheckBinary(std::span<const int> values, const char* what) {
  for (int v : values) {
    if (v != 0 && v != 1) {
      throw Error(std::string("dataset: ") + what + " values must be 0 or 1");
    }
  }
}

}  // namespace

void Dataset::Validate() const {
  const std::size_t m = labels.size();
  if (m == 0) throw Error("dataset: no rows");
  if (static_cast<std::size_t>(features.rows()) != m || sensitive.size() != m) {
    throw Error("dataset: features, sensitive and labels differ in length");
  }
  if (feature_names.size() != dim() || column_kinds.size() != dim()) {
    throw Error("dataset: feature_names/column_kinds do not match columns");
  }
  if (!row_ids.empty() && row_ids.size() != m) {
    throw Error("dataset: row_ids length mismatch");
  }
  CheckBinary(sensitive, "sensitive");
  CheckBinary(labels, "label");
}

Dataset Dataset::Subset(std::span<const std::size_t> rows) const {
  Dataset out;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
  out.sensitive.reserve(rows.size());
  out.labels.reserve(rows.size());
  out.row_ids.reserve(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const std::size_t r = rows[k];
    if (r >= size()) throw Error("dataset: subset row out of range");
    out.features.row(static_cast<Eigen::Index>(k)) =
        features.row(static_cast<Eigen::Index>(r));
    out.sensitive.push_back(sensitive[r]);
    out.labels.push_back(labels[r]);
    out.row_ids.push_back(row_ids.empty() ? r : row_ids[r]);
  }
  out.feature_names = feature_names;
  out.column_kinds = column_kinds;
  return out;
}

Dataset LoadCsv(std::istream& in, const DatasetSchema& schema,
                LoadReport* report) {
  if (schema.label_column == schema.sensitive_column) {
    throw Error("schema: label_column and sensitive_column must differ");
  }
  csv::Reader reader(in);
  auto header = reader.Next();
  if (!header) throw Error("csv: missing header row");

  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < header->size(); ++i) {
    index.emplace(std::string(Trim((*header)[i])), i);
  }
  auto column = [&](const std::string& name) {
    auto it = index.find(name);
    if (it == index.end()) throw Error("schema: column '" + name + "' not in header");
    return it->second;
  };
  std::set<std::string> seen;
  for (const auto* list : {&schema.numeric_columns, &schema.categorical_columns}) {
    for (const auto& name : *list) {
      if (name == schema.label_column || name == schema.sensitive_column) {
        throw Error("schema: '" + name +
                    "' is the label or sensitive column and cannot be a feature");
      }
      if (!seen.insert(name).second) {
        throw Error("schema: column '" + name + "' listed twice");
      }
    }
  }

  const std::size_t label_idx = column(schema.label_column);
  const std::size_t sensitive_idx = column(schema.sensitive_column);
  std::vector<std::size_t> numeric_idx, categorical_idx;
  for (const auto& name : schema.numeric_columns) numeric_idx.push_back(column(name));
  for (const auto& name : schema.categorical_columns) {
    categorical_idx.push_back(column(name));
  }

  struct Row {
    std::vector<double> numeric;
    std::vector<std::string> categorical;
    std::string label;
    std::string sensitive;
    std::size_t index = 0;  // among data rows read, dropped ones included
  };
  std::vector<Row> rows;
  LoadReport counts;
  while (auto record = reader.Next()) {
    if (record->size() == 1 && Trim((*record)[0]).empty()) continue;  // blank line
    ++counts.rows_read;
    auto drop = [&] { ++counts.rows_dropped; };
    if (record->size() != header->size()) {
      drop();
      continue;
    }
    Row row;
    row.index = counts.rows_read - 1;
    bool ok = true;
    auto field = [&](std::size_t i) { return Trim((*record)[i]); };
    row.label = std::string(field(label_idx));
    row.sensitive = std::string(field(sensitive_idx));
    ok = !IsMissing(row.label) && !IsMissing(row.sensitive);
    for (std::size_t i = 0; ok && i < numeric_idx.size(); ++i) {
      double v;
      const auto text = field(numeric_idx[i]);
      ok = !IsMissing(text) && ParseDouble(text, &v);
      row.numeric.push_back(v);
    }
    for (std::size_t i = 0; ok && i < categorical_idx.size(); ++i) {
      const auto text = field(categorical_idx[i]);
      ok = !IsMissing(text);
      row.categorical.emplace_back(text);
    }
    if (!ok) {
      drop();
      continue;
    }
    rows.push_back(std::move(row));
  }
  counts.rows_kept = rows.size();
  if (rows.empty()) throw Error("csv: zero usable rows");

  std::set<std::string> label_values, sensitive_values;
  std::vector<std::set<std::string>> vocab(categorical_idx.size());
  for (const auto& row : rows) {
    label_values.insert(row.label);
    sensitive_values.insert(row.sensitive);
    for (std::size_t i = 0; i < vocab.size(); ++i) vocab[i].insert(row.categorical[i]);
  }
  if (label_values.size() > 2) {
    throw Error("csv: non-binary label column '" + schema.label_column + "' (" +
                std::to_string(label_values.size()) + " distinct values)");
  }
  if (sensitive_values.size() > 2) {
    throw Error("csv: non-binary sensitive column '" + schema.sensitive_column +
                "' (" + std::to_string(sensitive_values.size()) +
                " distinct values)");
  }

  Dataset ds;
  for (const auto& name : schema.numeric_columns) {
    ds.feature_names.push_back(name);
    ds.column_kinds.push_back(ColumnKind::kNumeric);
  }
  std::vector<std::map<std::string, std::size_t>> onehot_column(vocab.size());
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    for (const auto& value : vocab[i]) {
      onehot_column[i][value] = ds.feature_names.size();
      ds.feature_names.push_back(schema.categorical_columns[i] + "=" + value);
      ds.column_kinds.push_back(ColumnKind::kOneHot);
    }
  }
  if (schema.include_sensitive) {
    ds.feature_names.push_back(schema.sensitive_column);
    ds.column_kinds.push_back(ColumnKind::kSensitive);
  }

  const auto m = static_cast<Eigen::Index>(rows.size());
  ds.features = FeatureMatrix::Zero(m, static_cast<Eigen::Index>(ds.feature_names.size()));
  ds.labels.reserve(rows.size());
  ds.sensitive.reserve(rows.size());
  ds.row_ids.reserve(rows.size());
  for (Eigen::Index r = 0; r < m; ++r) {
    const Row& row = rows[static_cast<std::size_t>(r)];
    ds.row_ids.push_back(row.index);
    Eigen::Index c = 0;
    for (double v : row.numeric) ds.features(r, c++) = v;
    for (std::size_t i = 0; i < row.categorical.size(); ++i) {
      ds.features(r, static_cast<Eigen::Index>(onehot_column[i].at(row.categorical[i]))) = 1.0;
    }
    const int a = row.sensitive == schema.privileged_group_value ? 1 : 0;
    ds.labels.push_back(row.label == schema.positive_label_value ? 1 : 0);
    ds.sensitive.push_back(a);
    if (schema.include_sensitive) ds.features(r, ds.features.cols() - 1) = a;
  }
  if (report) *report = counts;
  ds.Validate();
  return ds;
}

Dataset LoadCsv(const std::filesystem::path& path, const DatasetSchema& schema,
                LoadReport* report) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("csv: cannot open '" + path.string() + "'");
  return LoadCsv(in, schema, report);
}

void WriteCsv(const Dataset& ds, std::ostream& out,
              const std::string& sensitive_name, const std::string& label_name) {
  ds.Validate();
  std::vector<std::string> fields;
  std::vector<Eigen::Index> columns;
  for (std::size_t c = 0; c < ds.dim(); ++c) {
    if (ds.column_kinds[c] == ColumnKind::kSensitive) continue;
    columns.push_back(static_cast<Eigen::Index>(c));
    fields.push_back(ds.feature_names[c]);
  }
  fields.push_back(sensitive_name);
  fields.push_back(label_name);
  csv::WriteRow(out, fields);
  for (std::size_t r = 0; r < ds.size(); ++r) {
    fields.clear();
    for (Eigen::Index c : columns) {
      fields.push_back(FormatDouble(ds.features(static_cast<Eigen::Index>(r), c)));
    }
    fields.push_back(std::to_string(ds.sensitive[r]));
    fields.push_back(std::to_string(ds.labels[r]));
    csv::WriteRow(out, fields);
  }
}

void WriteCsv(const Dataset& ds, const std::filesystem::path& path,
              const std::string& sensitive_name, const std::string& label_name) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("csv: cannot write '" + path.string() + "'");
  WriteCsv(ds, out, sensitive_name, label_name);
  if (!out) throw Error("csv: write failed for '" + path.string() + "'");
}

DatasetSchema ReadBackSchema(const Dataset& ds, const std::string& sensitive_name,
                             const std::string& label_name) {
  DatasetSchema schema;
  schema.label_column = label_name;
  schema.sensitive_column = sensitive_name;
  schema.positive_label_value = "1";
  schema.privileged_group_value = "1";
  schema.include_sensitive = false;
  for (std::size_t c = 0; c < ds.dim(); ++c) {
    if (ds.column_kinds[c] == ColumnKind::kSensitive) {
      schema.include_sensitive = true;
    } else {
      schema.numeric_columns.push_back(ds.feature_names[c]);
    }
  }
  return schema;
}

std::pair<Dataset, Dataset> Split(const Dataset& ds, double test_fraction,
                                  std::uint64_t seed) {
  const std::size_t m = ds.size();
  if (m < 2) throw Error("split: need at least 2 rows");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error("split: test_fraction must lie in (0, 1)");
  }
  const auto n_test =
      static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(m)));
  if (n_test == 0 || n_test == m) {
    throw Error("split: fraction " + FormatDouble(test_fraction) + " of " +
                std::to_string(m) + " rows leaves one side empty");
  }
  Engine rng(seed);
  const auto order = Permutation(m, rng);
  const std::span<const std::size_t> all(order);
  return {ds.Subset(all.subspan(n_test)), ds.Subset(all.first(n_test))};
}

SubgroupStats ComputeSubgroupStats(std::span<const int> outcomes,
                                   std::span<const int> sensitive) {
  if (outcomes.size() != sensitive.size()) {
    throw Error("subgroup_stats: length mismatch");
  }
  if (outcomes.empty()) throw Error("subgroup_stats: empty input");
  SubgroupStats s;
  s.m = outcomes.size();
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const int y = outcomes[i], a = sensitive[i];
    if ((y != 0 && y != 1) || (a != 0 && a != 1)) {
      throw Error("subgroup_stats: values must be 0 or 1");
    }
    ++s.counts[y][a];
  }
  for (int y = 0; y < 2; ++y) {
    for (int a = 0; a < 2; ++a) {
      s.row_totals[y] += s.counts[y][a];
      s.col_totals[a] += s.counts[y][a];
    }
  }
  return s;
}

Dataset GenerateSynthetic(std::size_t n, double bias, std::uint64_t seed,
                          bool include_sensitive) {
  if (n < 4) throw Error("generate_synthetic: n must be at least 4");
  if (!(bias >= 0.0 && bias <= 1.0)) {
    throw Error("generate_synthetic: bias must lie in [0, 1]");
  }
  Engine rng(seed);
  boost::random::normal_distribution<double> normal(0.0, 1.0);
  boost::random::bernoulli_distribution<double> coin(0.5);
  boost::random::uniform_01<double> uniform;

  Dataset ds;
  const Eigen::Index cols = include_sensitive ? 3 : 2;
  ds.features.resize(static_cast<Eigen::Index>(n), cols);
  ds.feature_names = {"x1", "x2"};
  ds.column_kinds = {ColumnKind::kNumeric, ColumnKind::kNumeric};
  if (include_sensitive) {
    ds.feature_names.push_back("a");
    ds.column_kinds.push_back(ColumnKind::kSensitive);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    const double x1 = normal(rng);
    const double x2 = normal(rng);
    const int a = coin(rng) ? 1 : 0;
    const double logit = 1.5 * x1 - 1.0 * x2 + bias * (2.0 * a - 1.0);
    const double p = 1.0 / (1.0 + std::exp(-logit));
    const int y = uniform(rng) < p ? 1 : 0;
    ds.features(r, 0) = x1;
    ds.features(r, 1) = x2;
    if (include_sensitive) ds.features(r, 2) = a;
    ds.sensitive.push_back(a);
    ds.labels.push_back(y);
    ds.row_ids.push_back(i);
  }
  return ds;
}

std::pair<Dataset, Dataset> Standardize(const Dataset& train, const Dataset& test) {
  if (train.feature_names != test.feature_names ||
      train.column_kinds != test.column_kinds || train.dim() != test.dim()) {
    throw Error("standardize: train and test column layouts differ");
  }
  if (train.size() == 0) throw Error("standardize: empty train set");
  Dataset out_train = train, out_test = test;
  const double m = static_cast<double>(train.size());
  for (std::size_t c = 0; c < train.dim(); ++c) {
    if (train.column_kinds[c] != ColumnKind::kNumeric) continue;
    const auto col = static_cast<Eigen::Index>(c);
    const auto values = train.features.col(col);
    if ((values.array() == values(0)).all()) continue;
    const double mean = values.sum() / m;
    const double var = (values.array() - mean).square().sum() / m;
    const double sd = std::sqrt(var);
    out_train.features.col(col) = (values.array() - mean) / sd;
    out_test.features.col(col) = (test.features.col(col).array() - mean) / sd;
  }
  return {std::move(out_train), std::move(out_test)};
}

}  // namespace fairweigh
