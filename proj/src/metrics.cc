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

#include "fairweigh/metrics.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fairweigh/error.h"

namespace fairweigh {
namespace {

// positives[y][a] and totals[y][a] over the rows.
struct Table {
  std::array<std::array<long, 2>, 2> positives{};
  std::array<std::array<long, 2>, 2> totals{};

  std::optional<double> GroupRate(int a) const {
    const long n = totals[0][a] + totals[1][a];
    if (n == 0) return std::nullopt;
    return static_cast<double>(positives[0][a] + positives[1][a]) /
           static_cast<double>(n);
  }
  std::optional<double> CellRate(int y, int a) const {
    if (totals[y][a] == 0) return std::nullopt;
    return static_cast<double>(positives[y][a]) / static_cast<double>(totals[y][a]);
  }
};

void CheckBinary(std::span<const int> v, const char* what) {
  for (int x : v) {
    if (x != 0 && x != 1) throw Error(std::string("metrics: ") + what + " must be 0 or 1");
  }
}

Table Tabulate(std::span<const int> preds, std::span<const int> labels,
               std::span<const int> sensitive) {
  if (preds.size() != labels.size() || preds.size() != sensitive.size()) {
    throw Error("metrics: length mismatch");
  }
  CheckBinary(preds, "predictions");
  CheckBinary(labels, "labels");
  CheckBinary(sensitive, "sensitive");
  Table t;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    ++t.totals[labels[i]][sensitive[i]];
    t.positives[labels[i]][sensitive[i]] += preds[i];
  }
  return t;
}

std::optional<double> DpGap(const Table& t) {
  const auto r0 = t.GroupRate(0), r1 = t.GroupRate(1);
  if (!r0 || !r1) return std::nullopt;
  return std::abs(*r0 - *r1);
}

std::optional<double> LabelGap(const Table& t, int y) {
  const auto r0 = t.CellRate(y, 0), r1 = t.CellRate(y, 1);
  if (!r0 || !r1) return std::nullopt;
  return std::abs(*r0 - *r1);
}

std::optional<double> EoGap(const Table& t) {
  const auto g0 = LabelGap(t, 0), g1 = LabelGap(t, 1);
  if (!g0 || !g1) return std::nullopt;
  return std::max(*g0, *g1);
}

[[noreturn]] void ThrowEmptyCell(const char* metric, const Table& t,
                                 std::span<const int> ys) {
  for (int y : ys) {
    for (int a = 0; a < 2; ++a) {
      if (t.totals[y][a] == 0) {
        throw Error(std::string(metric) + ": empty cell (y=" + std::to_string(y) +
                    ", a=" + std::to_string(a) + ")");
      }
    }
  }
  throw Error(std::string(metric) + ": undefined");
}

}  // namespace

std::string_view ToString(FairnessCriterion criterion) {
  switch (criterion) {
    case FairnessCriterion::kDemographicParity: return "dp";
    case FairnessCriterion::kEqualizedOdds: return "eo";
    case FairnessCriterion::kEqualOpportunity: return "eop";
  }
  return "?";
}

FairnessCriterion ParseCriterion(std::string_view text) {
  if (text == "dp") return FairnessCriterion::kDemographicParity;
  if (text == "eo") return FairnessCriterion::kEqualizedOdds;
  if (text == "eop") return FairnessCriterion::kEqualOpportunity;
  throw Error("unknown fairness criterion '" + std::string(text) +
              "' (expected dp, eo or eop)");
}

double Accuracy(std::span<const int> preds, std::span<const int> labels) {
  if (preds.size() != labels.size()) throw Error("accuracy: length mismatch");
  if (preds.empty()) throw Error("accuracy: empty input");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) hits += preds[i] == labels[i];
  return static_cast<double>(hits) / static_cast<double>(preds.size());
}

double DeltaDp(std::span<const int> preds, std::span<const int> sensitive) {
  if (preds.size() != sensitive.size()) throw Error("delta_dp: length mismatch");
  // Labels do not enter the demographic-parity gap; tabulate under y = 0.
  const std::vector<int> zeros(preds.size(), 0);
  const Table t = Tabulate(preds, zeros, sensitive);
  const auto gap = DpGap(t);
  if (!gap) {
    throw Error(std::string("delta_dp: empty sensitive group a=") +
                (t.totals[0][0] == 0 ? "0" : "1"));
  }
  return *gap;
}

double DeltaEo(std::span<const int> preds, std::span<const int> labels,
               std::span<const int> sensitive) {
  const Table t = Tabulate(preds, labels, sensitive);
  const auto gap = EoGap(t);
  if (!gap) ThrowEmptyCell("delta_eo", t, std::array{0, 1});
  return *gap;
}

double DeltaEop(std::span<const int> preds, std::span<const int> labels,
                std::span<const int> sensitive) {
  const Table t = Tabulate(preds, labels, sensitive);
  const auto gap = LabelGap(t, 1);
  if (!gap) ThrowEmptyCell("delta_eop", t, std::array{1});
  return *gap;
}

std::optional<double> FairnessReport::Gap(FairnessCriterion criterion) const {
  switch (criterion) {
    case FairnessCriterion::kDemographicParity: return delta_dp;
    case FairnessCriterion::kEqualizedOdds: return delta_eo;
    case FairnessCriterion::kEqualOpportunity: return delta_eop;
  }
  return std::nullopt;
}

FairnessReport ComputeFairnessReport(std::span<const int> preds,
                                     std::span<const int> labels,
                                     std::span<const int> sensitive) {
  const Table t = Tabulate(preds, labels, sensitive);
  FairnessReport r;
  r.accuracy = Accuracy(preds, labels);
  r.delta_dp = DpGap(t);
  r.delta_eo = EoGap(t);
  r.delta_eop = LabelGap(t, 1);
  for (int a = 0; a < 2; ++a) {
    r.group_rates.given_group[a] = t.GroupRate(a);
    for (int y = 0; y < 2; ++y) r.group_rates.given_label_group[y][a] = t.CellRate(y, a);
  }
  return r;
}

namespace {

nlohmann::json Optional(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::optional<double> ReadOptional(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

std::string CellKey(int y, int a) {
  return "y=" + std::to_string(y) + ",a=" + std::to_string(a);
}

}  // namespace

nlohmann::json ToJson(const FairnessReport& report) {
  nlohmann::json rates = nlohmann::json::object();
  for (int a = 0; a < 2; ++a) {
    rates["a=" + std::to_string(a)] = Optional(report.group_rates.given_group[a]);
  }
  for (int y = 0; y < 2; ++y) {
    for (int a = 0; a < 2; ++a) {
      rates[CellKey(y, a)] = Optional(report.group_rates.given_label_group[y][a]);
    }
  }
  return {{"accuracy", report.accuracy},
          {"delta_dp", Optional(report.delta_dp)},
          {"delta_eo", Optional(report.delta_eo)},
          {"delta_eop", Optional(report.delta_eop)},
          {"group_rates", rates}};
}

FairnessReport FairnessReportFromJson(const nlohmann::json& j) {
  FairnessReport r;
  r.accuracy = j.at("accuracy").get<double>();
  r.delta_dp = ReadOptional(j, "delta_dp");
  r.delta_eo = ReadOptional(j, "delta_eo");
  r.delta_eop = ReadOptional(j, "delta_eop");
  if (j.contains("group_rates")) {
    const auto& rates = j.at("group_rates");
    for (int a = 0; a < 2; ++a) {
      r.group_rates.given_group[a] = ReadOptional(rates, ("a=" + std::to_string(a)).c_str());
      for (int y = 0; y < 2; ++y) {
        r.group_rates.given_label_group[y][a] = ReadOptional(rates, CellKey(y, a).c_str());
      }
    }
  }
  return r;
}

}  // namespace fairweigh
