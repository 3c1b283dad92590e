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

#include "fairweigh/report.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fairweigh/error.h"

namespace fairweigh {
namespace {

using nlohmann::json;

json Optional(std::optional<double> v) { return v ? json(*v) : json(nullptr); }

std::optional<double> ReadOptional(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

std::string Criterion(const ExperimentConfig& config) {
  return config.method == Method::kAdaptive
             ? std::string(ToString(config.reweigh.criterion))
             : std::string();
}

json Metadata(const ExperimentConfig& config) {
  return {
      {"split", "seeded random train/test split, test_fraction " +
                    FormatNumber(config.test_fraction)},
      {"replication_seeds",
       "replication r uses split seed split.seed + r and model seed seed + r"},
      {"uncertainty", "mean and sample standard deviation (n - 1) over seed replications"},
      {"gap", "test minus train"},
      {"threshold", config.reweigh.d},
  };
}

std::string CsvNumber(std::optional<double> v) { return v ? FormatNumber(*v) : ""; }

std::string Label(const ResultRecord& r) { return r.config.name; }

}  // namespace

std::string_view ToString(OutputFormat format) {
  switch (format) {
    case OutputFormat::kJson: return "json";
    case OutputFormat::kCsv: return "csv";
    case OutputFormat::kMarkdown: return "markdown";
  }
  return "?";
}

OutputFormat ParseFormat(std::string_view text) {
  if (text == "json") return OutputFormat::kJson;
  if (text == "csv") return OutputFormat::kCsv;
  if (text == "markdown" || text == "md") return OutputFormat::kMarkdown;
  throw Error("unknown format '" + std::string(text) + "' (expected json, csv or markdown)");
}

std::string_view FileExtension(OutputFormat format) {
  switch (format) {
    case OutputFormat::kJson: return "json";
    case OutputFormat::kCsv: return "csv";
    case OutputFormat::kMarkdown: return "md";
  }
  return "txt";
}

json ToJson(const ResultRecord& record) {
  json reps = json::array();
  for (const auto& r : record.replications) {
    json gap = json::object();
    for (Metric m : kMetrics) gap[std::string(ToString(m))] = Optional(r.Gap(m));
    reps.push_back({
        {"index", r.index},
        {"split_seed", r.split_seed},
        {"model_seed", r.model_seed},
        {"train_size", r.train_size},
        {"test_size", r.test_size},
        {"train", ToJson(r.train)},
        {"test", ToJson(r.test)},
        {"gap", gap},
        {"model", ToJson(r.model)},
    });
  }
  json summary = json::object();
  for (Metric m : kMetrics) {
    const auto& s = record.Summary(m);
    summary[std::string(ToString(m))] = {
        {"train_mean", Optional(s.train_mean)}, {"train_std", Optional(s.train_std)},
        {"test_mean", Optional(s.test_mean)},   {"test_std", Optional(s.test_std)},
        {"gap", Optional(s.gap)},
    };
  }
  json load = nullptr;
  if (record.load_report) {
    load = {{"rows_read", record.load_report->rows_read},
            {"rows_dropped", record.load_report->rows_dropped},
            {"rows_kept", record.load_report->rows_kept}};
  }
  return {
      {"name", record.config.name},
      {"method", ToString(record.config.method)},
      {"criterion", Criterion(record.config)},
      {"config", record.config_text},
      {"metadata", Metadata(record.config)},
      {"load_report", load},
      {"replications", reps},
      {"summary", summary},
      {"wall_seconds", record.wall_seconds},
  };
}

ResultRecord ResultRecordFromJson(const json& j) {
  ResultRecord record;
  record.config_text = j.at("config").get<std::string>();
  record.config = ParseConfig(record.config_text);
  if (ToText(record.config) != record.config_text) {
    throw Error("results: config text is not in canonical form");
  }
  if (!j.at("load_report").is_null()) {
    const auto& l = j.at("load_report");
    record.load_report = LoadReport{l.at("rows_read").get<std::size_t>(),
                                    l.at("rows_dropped").get<std::size_t>(),
                                    l.at("rows_kept").get<std::size_t>()};
  }
  for (const auto& r : j.at("replications")) {
    ReplicationResult rep;
    rep.index = r.at("index").get<int>();
    rep.split_seed = r.at("split_seed").get<std::uint64_t>();
    rep.model_seed = r.at("model_seed").get<std::uint64_t>();
    rep.train_size = r.at("train_size").get<std::size_t>();
    rep.test_size = r.at("test_size").get<std::size_t>();
    rep.train = FairnessReportFromJson(r.at("train"));
    rep.test = FairnessReportFromJson(r.at("test"));
    rep.model = ModelParamsFromJson(r.at("model"));
    record.replications.push_back(std::move(rep));
  }
  for (Metric m : kMetrics) {
    const auto& s = j.at("summary").at(std::string(ToString(m)));
    auto& out = record.summary[static_cast<std::size_t>(m)];
    out.train_mean = ReadOptional(s, "train_mean");
    out.train_std = ReadOptional(s, "train_std");
    out.test_mean = ReadOptional(s, "test_mean");
    out.test_std = ReadOptional(s, "test_std");
    out.gap = ReadOptional(s, "gap");
  }
  record.wall_seconds = j.at("wall_seconds").get<double>();
  return record;
}

json ToJson(const GridResult& grid) {
  json points = json::array();
  for (const auto& p : grid.points) {
    points.push_back({
        {"alpha", p.alpha},
        {"eta", p.eta},
        {"validation_gap", Optional(p.validation_gap)},
        {"validation_accuracy", Optional(p.validation_accuracy)},
        {"error", p.error},
        {"record", ToJson(p.record)},
    });
  }
  return {
      {"best_index", grid.best_index},
      {"best_alpha", grid.best.alpha},
      {"best_eta", grid.best.eta},
      {"skipped_folds", grid.skipped_folds},
      {"points", points},
  };
}

GridResult GridResultFromJson(const json& j) {
  GridResult grid;
  grid.best_index = j.at("best_index").get<std::size_t>();
  grid.skipped_folds = j.at("skipped_folds").get<std::vector<int>>();
  for (const auto& p : j.at("points")) {
    GridPoint point;
    point.alpha = p.at("alpha").get<double>();
    point.eta = p.at("eta").get<double>();
    point.validation_gap = ReadOptional(p, "validation_gap");
    point.validation_accuracy = ReadOptional(p, "validation_accuracy");
    point.error = p.at("error").get<std::string>();
    point.record = ResultRecordFromJson(p.at("record"));
    grid.points.push_back(std::move(point));
  }
  if (grid.best_index >= grid.points.size()) {
    throw Error("results: grid best_index out of range");
  }
  grid.best = EffectiveReweighConfig(grid.points[grid.best_index].record.config);
  return grid;
}

json ToJson(const Results& results) {
  json records = json::array();
  for (const auto& r : results.records) records.push_back(ToJson(r));
  json out = {{"schema_version", kSchemaVersion}, {"records", records}};
  if (results.grid) out["grid"] = ToJson(*results.grid);
  return out;
}

Results ResultsFromJson(const json& j) {
  if (!j.contains("schema_version") || j.at("schema_version") != kSchemaVersion) {
    throw Error("results: unsupported or missing schema_version");
  }
  Results results;
  for (const auto& r : j.at("records")) results.records.push_back(ResultRecordFromJson(r));
  if (j.contains("grid")) results.grid = GridResultFromJson(j.at("grid"));
  return results;
}

Results LoadResults(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open results file '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error("results file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  try {
    return ResultsFromJson(j);
  } catch (const json::exception& e) {
    throw Error("results file '" + path.string() + "': " + e.what());
  }
}

std::string FormatPercent(std::optional<double> fraction) {
  if (!fraction) return "n/a";
  double v = *fraction * 100.0;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string FormatPercentCell(std::optional<double> mean, std::optional<double> std) {
  if (!mean) return "n/a";
  if (!std) return FormatPercent(mean);
  return FormatPercent(mean) + "±" + FormatPercent(std);
}

std::string Render(const Results& results, OutputFormat format) {
  if (results.records.empty()) throw Error("no result records to render");
  std::ostringstream out;
  switch (format) {
    case OutputFormat::kJson:
      out << ToJson(results).dump(2) << "\n";
      break;
    case OutputFormat::kCsv: {
      out << "name,method,criterion,row";
      for (Metric m : kMetrics) {
        const std::string name(ToString(m));
        out << ',' << name << "_train," << name << "_test," << name << "_gap";
      }
      out << "\n";
      for (const auto& r : results.records) {
        const std::string prefix =
            r.config.name + "," + std::string(ToString(r.config.method)) + "," +
            Criterion(r.config) + ",";
        for (const auto& rep : r.replications) {
          out << prefix << "replication_" << rep.index;
          for (Metric m : kMetrics) {
            out << ',' << CsvNumber(MetricValue(rep.train, m)) << ','
                << CsvNumber(MetricValue(rep.test, m)) << ',' << CsvNumber(rep.Gap(m));
          }
          out << "\n";
        }
        out << prefix << "mean";
        for (Metric m : kMetrics) {
          const auto& s = r.Summary(m);
          out << ',' << CsvNumber(s.train_mean) << ',' << CsvNumber(s.test_mean) << ','
              << CsvNumber(s.gap);
        }
        out << "\n" << prefix << "std";
        for (Metric m : kMetrics) {
          const auto& s = r.Summary(m);
          out << ',' << CsvNumber(s.train_std) << ',' << CsvNumber(s.test_std) << ',';
        }
        out << "\n";
      }
      break;
    }
    case OutputFormat::kMarkdown: {
      if (results.grid) {
        out << "Grid search (validation folds)\n\n"
            << "| α | η | Accuracy↑ | Δ↓ | Selected |\n"
            << "| ---: | ---: | ---: | ---: | :---: |\n";
        for (std::size_t i = 0; i < results.grid->points.size(); ++i) {
          const auto& p = results.grid->points[i];
          out << "| " << FormatNumber(p.alpha) << " | " << FormatNumber(p.eta) << " | "
              << FormatPercent(p.validation_accuracy) << " | "
              << FormatPercent(p.validation_gap) << " | "
              << (i == results.grid->best_index ? "yes" : "") << " |\n";
        }
        out << "\n";
      }
      out << "| Method | Accuracy↑ | Δ_DP↓ | Δ_EO↓ | Δ_EOP↓ |\n"
          << "| --- | ---: | ---: | ---: | ---: |\n";
      for (const auto& r : results.records) {
        out << "| " << Label(r);
        for (Metric m : kMetrics) {
          const auto& s = r.Summary(m);
          out << " | " << FormatPercentCell(s.test_mean, s.test_std);
        }
        out << " |\n";
      }
      out << "\n| Method | Metric | Training | Test | Diff |\n"
          << "| --- | --- | ---: | ---: | ---: |\n";
      for (const auto& r : results.records) {
        for (Metric m : kMetrics) {
          const auto& s = r.Summary(m);
          out << "| " << Label(r) << " | " << ToString(m) << " | "
              << FormatPercent(s.train_mean) << " | " << FormatPercent(s.test_mean)
              << " | " << FormatPercent(s.gap) << " |\n";
        }
      }
      break;
    }
  }
  return out.str();
}

void EmitResults(const Results& results, OutputFormat format,
                 const std::filesystem::path& path) {
  const std::string text = Render(results, format);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write results to '" + path.string() + "'");
  out << text;
  out.flush();
  if (!out) throw Error("cannot write results to '" + path.string() + "'");
}

}  // namespace fairweigh
