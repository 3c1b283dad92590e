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

// Accuracy and the three group-fairness gaps, computed from hard predictions
// with empirical frequencies. All gaps are fractions in [0, 1].

#ifndef FAIRWEIGH_METRICS_H_
#define FAIRWEIGH_METRICS_H_

#include <array>
#include <optional>
#include <span>
#include <string_view>

#include "json.hpp"

namespace fairweigh {

enum class FairnessCriterion {
  kDemographicParity,
  kEqualizedOdds,
  kEqualOpportunity,
};

// "dp", "eo", "eop".
std::string_view ToString(FairnessCriterion criterion);
FairnessCriterion ParseCriterion(std::string_view text);

double Accuracy(std::span<const int> preds, std::span<const int> labels);

// |P(Yhat=1 | A=0) - P(Yhat=1 | A=1)|. Throws if a group is empty.
double DeltaDp(std::span<const int> preds, std::span<const int> sensitive);

// max over y of |P(Yhat=1 | A=0, Y=y) - P(Yhat=1 | A=1, Y=y)|. Throws naming
// the first empty (y, a) cell.
double DeltaEo(std::span<const int> preds, std::span<const int> labels,
               std::span<const int> sensitive);

// The y = 1 term of DeltaEo.
double DeltaEop(std::span<const int> preds, std::span<const int> labels,
                std::span<const int> sensitive);

// Conditional positive-prediction rates behind each gap; absent when the
// conditioning cell is empty.
struct GroupRates {
  std::array<std::optional<double>, 2> given_group;  // P(Yhat=1 | A=a)
  std::array<std::array<std::optional<double>, 2>, 2>
      given_label_group;  // [y][a]: P(Yhat=1 | Y=y, A=a)
};

struct FairnessReport {
  double accuracy = 0.0;
  std::optional<double> delta_dp;
  std::optional<double> delta_eo;
  std::optional<double> delta_eop;
  GroupRates group_rates;

  std::optional<double> Gap(FairnessCriterion criterion) const;
};

// Gaps whose cells are empty are left absent instead of throwing.
FairnessReport ComputeFairnessReport(std::span<const int> preds,
                                     std::span<const int> labels,
                                     std::span<const int> sensitive);

// Absent gaps and rates serialize as null.
nlohmann::json ToJson(const FairnessReport& report);
FairnessReport FairnessReportFromJson(const nlohmann::json& j);

}  // namespace fairweigh

#endif  // FAIRWEIGH_METRICS_H_
