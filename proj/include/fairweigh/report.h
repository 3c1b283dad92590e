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

// Rendering and parsing of result files.
//
// JSON is the lossless form (documented in docs/results.md); `report` reads
// it back. CSV carries the same numbers, one row per replication plus mean
// and std rows. Markdown shows test means as percentages with two decimals,
// "mean±std", followed by a train/test/difference table.

#ifndef FAIRWEIGH_REPORT_H_
#define FAIRWEIGH_REPORT_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "fairweigh/experiment.h"

namespace fairweigh {

inline constexpr int kSchemaVersion = 1;

enum class OutputFormat { kJson, kCsv, kMarkdown };

std::string_view ToString(OutputFormat format);
OutputFormat ParseFormat(std::string_view text);
std::string_view FileExtension(OutputFormat format);

struct Results {
  std::vector<ResultRecord> records;
  std::optional<GridResult> grid;
};

nlohmann::json ToJson(const ResultRecord& record);
ResultRecord ResultRecordFromJson(const nlohmann::json& j);
nlohmann::json ToJson(const GridResult& grid);
GridResult GridResultFromJson(const nlohmann::json& j);

nlohmann::json ToJson(const Results& results);
Results ResultsFromJson(const nlohmann::json& j);
Results LoadResults(const std::filesystem::path& path);

// "84.20" style: value * 100 with two decimals; "n/a" when absent.
std::string FormatPercent(std::optional<double> fraction);
// "84.20±0.05", or just the mean when there is no std.
std::string FormatPercentCell(std::optional<double> mean, std::optional<double> std);

std::string Render(const Results& results, OutputFormat format);
// Throws if `results` has no records or the file cannot be written.
void EmitResults(const Results& results, OutputFormat format,
                 const std::filesystem::path& path);

}  // namespace fairweigh

#endif  // FAIRWEIGH_REPORT_H_
