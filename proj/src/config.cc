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

#include "fairweigh/config.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <sstream>

#include "fairweigh/error.h"

namespace fairweigh {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void Bad(std::string_view key, std::string_view value,
                      std::string_view expected) {
  throw Error("config: " + std::string(key) + " = '" + std::string(value) +
              "': expected " + std::string(expected));
}

double ToDouble(std::string_view key, std::string_view v) {
  std::string_view s = v;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() ||
      !std::isfinite(out)) {
    Bad(key, v, "a finite number");
  }
  return out;
}

std::uint64_t ToUnsigned(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
    Bad(key, v, "a non-negative integer");
  }
  return out;
}

int ToInt(std::string_view key, std::string_view v) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
    Bad(key, v, "an integer");
  }
  return out;
}

bool ToBool(std::string_view key, std::string_view v) {
  if (v == "true") return true;
  if (v == "false") return false;
  Bad(key, v, "true or false");
}

std::vector<std::string> ToList(std::string_view v) {
  std::vector<std::string> out;
  if (Trim(v).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = v.find(',', start);
    out.emplace_back(Trim(v.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string Join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ", ";
    out += items[i];
  }
  return out;
}

std::string JoinNumbers(const std::vector<double>& values) {
  std::vector<std::string> items;
  for (double v : values) items.push_back(FormatNumber(v));
  return Join(items);
}

std::string_view ToString(DataSource source) {
  return source == DataSource::kCsv ? "csv" : "synthetic";
}

using Getter = std::function<std::optional<std::string>(const ExperimentConfig&)>;
using Setter = std::function<void(ExperimentConfig&, std::string_view key,
                                  std::string_view value)>;

struct Key {
  std::string_view name;
  Getter get;
  Setter set;
};

bool IsCsv(const ExperimentConfig& c) { return c.source == DataSource::kCsv; }
bool IsSynthetic(const ExperimentConfig& c) {
  return c.source == DataSource::kSynthetic;
}

// Canonical order for ToText.
const std::vector<Key>& Keys() {
  using C = ExperimentConfig;
  using SV = std::string_view;
  static const std::vector<Key> keys = {
      {"name", [](const C& c) { return std::optional(c.name); },
       [](C& c, SV, SV v) { c.name = v; }},
      {"dataset", [](const C& c) { return std::optional(std::string(ToString(c.source))); },
       [](C& c, SV k, SV v) {
         if (v == "csv") c.source = DataSource::kCsv;
         else if (v == "synthetic") c.source = DataSource::kSynthetic;
         else Bad(k, v, "csv or synthetic");
       }},
      {"csv.path",
       [](const C& c) { return IsCsv(c) ? std::optional(c.csv_path) : std::nullopt; },
       [](C& c, SV, SV v) { c.csv_path = v; }},
      {"csv.label_column",
       [](const C& c) { return IsCsv(c) ? std::optional(c.schema.label_column) : std::nullopt; },
       [](C& c, SV, SV v) { c.schema.label_column = v; }},
      {"csv.positive_label_value",
       [](const C& c) {
         return IsCsv(c) ? std::optional(c.schema.positive_label_value) : std::nullopt;
       },
       [](C& c, SV, SV v) { c.schema.positive_label_value = v; }},
      {"csv.sensitive_column",
       [](const C& c) {
         return IsCsv(c) ? std::optional(c.schema.sensitive_column) : std::nullopt;
       },
       [](C& c, SV, SV v) { c.schema.sensitive_column = v; }},
      {"csv.privileged_group_value",
       [](const C& c) {
         return IsCsv(c) ? std::optional(c.schema.privileged_group_value) : std::nullopt;
       },
       [](C& c, SV, SV v) { c.schema.privileged_group_value = v; }},
      {"csv.numeric_columns",
       [](const C& c) {
         return IsCsv(c) ? std::optional(Join(c.schema.numeric_columns)) : std::nullopt;
       },
       [](C& c, SV, SV v) { c.schema.numeric_columns = ToList(v); }},
      {"csv.categorical_columns",
       [](const C& c) {
         return IsCsv(c) ? std::optional(Join(c.schema.categorical_columns)) : std::nullopt;
       },
       [](C& c, SV, SV v) { c.schema.categorical_columns = ToList(v); }},
      {"csv.include_sensitive",
       [](const C& c) {
         return IsCsv(c) ? std::optional(std::string(c.schema.include_sensitive ? "true" : "false"))
                         : std::nullopt;
       },
       [](C& c, SV k, SV v) { c.schema.include_sensitive = ToBool(k, v); }},
      {"synthetic.n",
       [](const C& c) {
         return IsSynthetic(c) ? std::optional(std::to_string(c.synthetic.n)) : std::nullopt;
       },
       [](C& c, SV k, SV v) { c.synthetic.n = ToUnsigned(k, v); }},
      {"synthetic.bias",
       [](const C& c) {
         return IsSynthetic(c) ? std::optional(FormatNumber(c.synthetic.bias)) : std::nullopt;
       },
       [](C& c, SV k, SV v) { c.synthetic.bias = ToDouble(k, v); }},
      {"synthetic.seed",
       [](const C& c) {
         return IsSynthetic(c) ? std::optional(std::to_string(c.synthetic.seed)) : std::nullopt;
       },
       [](C& c, SV k, SV v) { c.synthetic.seed = ToUnsigned(k, v); }},
      {"synthetic.include_sensitive",
       [](const C& c) {
         return IsSynthetic(c)
                    ? std::optional(std::string(c.synthetic.include_sensitive ? "true" : "false"))
                    : std::nullopt;
       },
       [](C& c, SV k, SV v) { c.synthetic.include_sensitive = ToBool(k, v); }},
      {"split.test_fraction",
       [](const C& c) { return std::optional(FormatNumber(c.test_fraction)); },
       [](C& c, SV k, SV v) { c.test_fraction = ToDouble(k, v); }},
      {"split.seed", [](const C& c) { return std::optional(std::to_string(c.split_seed)); },
       [](C& c, SV k, SV v) { c.split_seed = ToUnsigned(k, v); }},
      {"method", [](const C& c) { return std::optional(std::string(ToString(c.method))); },
       [](C& c, SV, SV v) { c.method = ParseMethod(v); }},
      {"replications", [](const C& c) { return std::optional(std::to_string(c.replications)); },
       [](C& c, SV k, SV v) { c.replications = ToInt(k, v); }},
      {"seed", [](const C& c) { return std::optional(std::to_string(c.seed)); },
       [](C& c, SV k, SV v) { c.seed = ToUnsigned(k, v); }},
      {"train.epochs", [](const C& c) { return std::optional(std::to_string(c.train.epochs)); },
       [](C& c, SV k, SV v) { c.train.epochs = ToInt(k, v); }},
      {"train.learning_rate",
       [](const C& c) { return std::optional(FormatNumber(c.train.learning_rate)); },
       [](C& c, SV k, SV v) { c.train.learning_rate = ToDouble(k, v); }},
      {"train.batch_size",
       [](const C& c) { return std::optional(std::to_string(c.train.batch_size)); },
       [](C& c, SV k, SV v) { c.train.batch_size = ToUnsigned(k, v); }},
      {"train.shuffle",
       [](const C& c) { return std::optional(std::string(c.train.shuffle ? "true" : "false")); },
       [](C& c, SV k, SV v) { c.train.shuffle = ToBool(k, v); }},
      {"reweigh.criterion",
       [](const C& c) { return std::optional(std::string(ToString(c.reweigh.criterion))); },
       [](C& c, SV, SV v) { c.reweigh.criterion = ParseCriterion(v); }},
      {"reweigh.alpha", [](const C& c) { return std::optional(FormatNumber(c.reweigh.alpha)); },
       [](C& c, SV k, SV v) { c.reweigh.alpha = ToDouble(k, v); }},
      {"reweigh.eta", [](const C& c) { return std::optional(FormatNumber(c.reweigh.eta)); },
       [](C& c, SV k, SV v) { c.reweigh.eta = ToDouble(k, v); }},
      {"reweigh.d", [](const C& c) { return std::optional(FormatNumber(c.reweigh.d)); },
       [](C& c, SV k, SV v) { c.reweigh.d = ToDouble(k, v); }},
      {"reweigh.outer_iterations",
       [](const C& c) { return std::optional(std::to_string(c.reweigh.outer_iterations)); },
       [](C& c, SV k, SV v) { c.reweigh.outer_iterations = ToInt(k, v); }},
      {"reweigh.inner_epochs",
       [](const C& c) { return std::optional(std::to_string(c.reweigh.inner.epochs)); },
       [](C& c, SV k, SV v) { c.reweigh.inner.epochs = ToInt(k, v); }},
      {"reweigh.early_stop_gap",
       [](const C& c) {
         return c.reweigh.early_stop_gap ? std::optional(FormatNumber(*c.reweigh.early_stop_gap))
                                         : std::nullopt;
       },
       [](C& c, SV k, SV v) { c.reweigh.early_stop_gap = ToDouble(k, v); }},
      {"grid.alpha", [](const C& c) { return std::optional(JoinNumbers(c.grid.alpha)); },
       [](C& c, SV, SV v) { c.grid.alpha = ParseNumberList(v); }},
      {"grid.eta", [](const C& c) { return std::optional(JoinNumbers(c.grid.eta)); },
       [](C& c, SV, SV v) { c.grid.eta = ParseNumberList(v); }},
      {"grid.folds", [](const C& c) { return std::optional(std::to_string(c.grid.folds)); },
       [](C& c, SV k, SV v) { c.grid.folds = ToInt(k, v); }},
      {"grid.tolerance",
       [](const C& c) { return std::optional(FormatNumber(c.grid.tolerance)); },
       [](C& c, SV k, SV v) { c.grid.tolerance = ToDouble(k, v); }},
  };
  return keys;
}

void CheckText(std::string_view what, std::string_view value) {
  if (value.find('\n') != std::string_view::npos || Trim(value) != value) {
    throw Error("config: " + std::string(what) +
                " must be a single line without surrounding blanks");
  }
}

void CheckList(std::string_view what, const std::vector<std::string>& items) {
  for (const auto& item : items) {
    CheckText(what, item);
    if (item.empty() || item.find(',') != std::string::npos) {
      throw Error("config: " + std::string(what) + " has an empty or comma-bearing entry");
    }
  }
}

}  // namespace

std::string_view ToString(Method method) {
  switch (method) {
    case Method::kErm: return "erm";
    case Method::kCutting: return "cutting";
    case Method::kFixedReweigh: return "fixed_reweigh";
    case Method::kAdaptive: return "adaptive";
  }
  return "?";
}

Method ParseMethod(std::string_view text) {
  if (text == "erm") return Method::kErm;
  if (text == "cutting") return Method::kCutting;
  if (text == "fixed_reweigh") return Method::kFixedReweigh;
  if (text == "adaptive") return Method::kAdaptive;
  throw Error("unknown method '" + std::string(text) +
              "' (expected erm, cutting, fixed_reweigh or adaptive)");
}

std::string FormatNumber(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::vector<double> ParseNumberList(std::string_view text) {
  std::vector<double> out;
  for (const auto& item : ToList(text)) out.push_back(ToDouble("list", item));
  return out;
}

void ExperimentConfig::Validate() const {
  CheckText("name", name);
  if (name.empty()) throw Error("config: name must not be empty");
  if (source == DataSource::kCsv) {
    CheckText("csv.path", csv_path);
    if (csv_path.empty()) throw Error("config: csv.path is required for dataset = csv");
    for (const auto* field : {&schema.label_column, &schema.sensitive_column,
                              &schema.positive_label_value,
                              &schema.privileged_group_value}) {
      CheckText("csv schema value", *field);
      if (field->empty()) {
        throw Error(
            "config: csv.label_column, csv.positive_label_value, "
            "csv.sensitive_column and csv.privileged_group_value are required");
      }
    }
    CheckList("csv.numeric_columns", schema.numeric_columns);
    CheckList("csv.categorical_columns", schema.categorical_columns);
  } else {
    if (synthetic.n < 4) throw Error("config: synthetic.n must be at least 4");
    if (!(synthetic.bias >= 0.0 && synthetic.bias <= 1.0)) {
      throw Error("config: synthetic.bias must lie in [0, 1]");
    }
  }
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error("config: split.test_fraction must lie in (0, 1)");
  }
  if (replications < 1) throw Error("config: replications must be at least 1");
  train.Validate();
  EffectiveReweighConfig(*this).Validate();
  if (grid.folds < 2) throw Error("config: grid.folds must be at least 2");
  if (!(grid.tolerance >= 0.0)) throw Error("config: grid.tolerance must be >= 0");
  for (double a : grid.alpha) {
    if (!(a >= 0.0)) throw Error("config: grid.alpha entries must be >= 0");
  }
  for (double e : grid.eta) {
    if (!(e >= 0.0)) throw Error("config: grid.eta entries must be >= 0");
  }
}

ReweighConfig EffectiveReweighConfig(const ExperimentConfig& config) {
  ReweighConfig out = config.reweigh;
  const int inner_epochs = out.inner.epochs;
  out.inner = config.train;
  out.inner.epochs = inner_epochs;
  return out;
}

ExperimentConfig ParseConfig(std::string_view text) {
  ExperimentConfig config;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = Trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error("config: line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string_view key = Trim(line.substr(0, eq));
    const std::string_view value = Trim(line.substr(eq + 1));
    const auto& keys = Keys();
    const auto it = std::find_if(keys.begin(), keys.end(),
                                 [&](const Key& k) { return k.name == key; });
    if (it == keys.end()) {
      throw Error("config: line " + std::to_string(line_no) + ": unknown key '" +
                  std::string(key) + "'");
    }
    if (!seen.emplace(key).second) {
      throw Error("config: line " + std::to_string(line_no) + ": repeated key '" +
                  std::string(key) + "'");
    }
    it->set(config, key, value);
  }
  for (const auto& key : seen) {
    const bool csv_key = key.starts_with("csv.");
    const bool synth_key = key.starts_with("synthetic.");
    if ((csv_key && config.source != DataSource::kCsv) ||
        (synth_key && config.source != DataSource::kSynthetic)) {
      throw Error("config: key '" + key + "' does not apply to dataset = " +
                  std::string(ToString(config.source)));
    }
  }
  config.Validate();
  return config;
}

ExperimentConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("config: cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseConfig(buffer.str());
}

std::string ToText(const ExperimentConfig& config) {
  std::string out;
  for (const auto& key : Keys()) {
    if (auto value = key.get(config)) {
      out += key.name;
      out += value->empty() ? " =" : " = ";
      out += *value;
      out += '\n';
    }
  }
  return out;
}

}  // namespace fairweigh
