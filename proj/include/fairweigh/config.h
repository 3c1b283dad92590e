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

// Experiment configuration and its flat key-value text form.
//
// One `key = value` pair per line; blank lines and lines whose first
// non-blank character is '#' are ignored. Whitespace around keys and values
// is trimmed. List values are comma separated. Unknown or repeated keys are
// errors. ToText() writes every key in a fixed order, so
// ToText(ParseConfig(ToText(c))) == ToText(c). The full key table lives in
// docs/config.md.

#ifndef FAIRWEIGH_CONFIG_H_
#define FAIRWEIGH_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "fairweigh/classifier.h"
#include "fairweigh/dataset.h"
#include "fairweigh/reweigher.h"

namespace fairweigh {

enum class Method { kErm, kCutting, kFixedReweigh, kAdaptive };
enum class DataSource { kCsv, kSynthetic };

std::string_view ToString(Method method);
Method ParseMethod(std::string_view text);

struct SyntheticSpec {
  std::size_t n = 4000;
  double bias = 0.8;
  std::uint64_t seed = 1;
  bool include_sensitive = true;

  bool operator==(const SyntheticSpec&) const = default;
};

struct GridSpec {
  std::vector<double> alpha;
  std::vector<double> eta;
  int folds = 3;
  // Selection tolerance on the mean validation gap, as a fraction
  // (0.005 = 0.5 percentage points).
  double tolerance = 0.005;

  bool operator==(const GridSpec&) const = default;
};

struct ExperimentConfig {
  std::string name = "experiment";
  DataSource source = DataSource::kSynthetic;
  std::string csv_path;
  DatasetSchema schema;
  SyntheticSpec synthetic;
  double test_fraction = 0.3;
  std::uint64_t split_seed = 0;
  Method method = Method::kErm;
  int replications = 3;
  std::uint64_t seed = 0;
  TrainSettings train;
  // Only `reweigh.inner.epochs` is read from here; the rest of the inner
  // settings come from `train` (see EffectiveReweighConfig).
  ReweighConfig reweigh;
  GridSpec grid;

  void Validate() const;
  bool operator==(const ExperimentConfig&) const = default;
};

// `reweigh` with its inner settings taken from `train`, keeping the
// configured inner epoch count.
ReweighConfig EffectiveReweighConfig(const ExperimentConfig& config);

ExperimentConfig ParseConfig(std::string_view text);
ExperimentConfig LoadConfig(const std::filesystem::path& path);
std::string ToText(const ExperimentConfig& config);

// Shortest decimal text that parses back to the same double.
std::string FormatNumber(double value);
std::vector<double> ParseNumberList(std::string_view text);

}  // namespace fairweigh

#endif  // FAIRWEIGH_CONFIG_H_
