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

#include <random>

#include <gtest/gtest.h>

#include "fairweigh/error.h"
#include "oracles.h"
#include "property_suites.h"

namespace fairweigh {
namespace {

using V = std::vector<int>;

TEST(DeltaDpTest, Examples) {
  EXPECT_DOUBLE_EQ(DeltaDp(V{1, 0, 1, 1}, V{0, 0, 1, 1}), 0.5);
  EXPECT_EQ(DeltaDp(V{1, 0, 1, 0}, V{0, 0, 1, 1}), 0.0);
  EXPECT_EQ(DeltaDp(V{1, 0, 1, 1}, V{1, 1, 0, 0}), DeltaDp(V{1, 0, 1, 1}, V{0, 0, 1, 1}));
  EXPECT_THROW(DeltaDp(V{1, 0}, V{0, 0}), Error);
}

TEST(DeltaEoTest, PaddedInstanceMatchesCounting) {
  // y = 1 rows: group 0 predicts [1, 1], group 1 predicts [0, 0].
  // y = 0 rows: each group predicts [0, 1].
  const V preds = {1, 1, 0, 0, 0, 1, 0, 1};
  const V labels = {1, 1, 1, 1, 0, 0, 0, 0};
  const V sensitive = {0, 0, 1, 1, 0, 0, 1, 1};
  const auto oracle = testing::BruteForce(preds, labels, sensitive);
  EXPECT_EQ(DeltaEo(preds, labels, sensitive), *oracle.delta_eo);
  EXPECT_EQ(DeltaEo(preds, labels, sensitive), 1.0);
}

TEST(DeltaEoTest, PerfectAndConstantPredictors) {
  const V labels = {0, 1, 0, 1, 1, 0};
  const V sensitive = {0, 0, 1, 1, 0, 1};
  EXPECT_EQ(DeltaEo(labels, labels, sensitive), 0.0);
  EXPECT_EQ(DeltaEo(V(6, 1), labels, sensitive), 0.0);
}

TEST(DeltaEoTest, EmptyCellIsNamed) {
  try {
    DeltaEo(V{1, 0, 1}, V{1, 0, 1}, V{0, 0, 1});
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("(y=0, a=1)"), std::string::npos) << e.what();
  }
}

TEST(DeltaEopTest, Examples) {
  // Positive rows: group 0 predicts [1, 1, 0], group 1 predicts [1, 0, 0].
  const V preds = {1, 1, 0, 1, 0, 0};
  const V labels = {1, 1, 1, 1, 1, 1};
  const V sensitive = {0, 0, 0, 1, 1, 1};
  EXPECT_DOUBLE_EQ(DeltaEop(preds, labels, sensitive), 1.0 / 3.0);
  EXPECT_EQ(DeltaEop(labels, labels, sensitive), 0.0);
  // Pad with negatives so Delta_EO is defined; it dominates Delta_EOP.
  V p = preds, l = labels, s = sensitive;
  for (int a = 0; a < 2; ++a) {
    p.push_back(0);
    l.push_back(0);
    s.push_back(a);
  }
  EXPECT_GE(DeltaEo(p, l, s), 1.0 / 3.0);
  EXPECT_THROW(DeltaEop(V{1, 1}, V{1, 0}, V{0, 1}), Error);
}

TEST(AccuracyTest, Examples) {
  const V labels = {1, 0, 1, 1, 0};
  EXPECT_EQ(Accuracy(labels, labels), 1.0);
  EXPECT_EQ(Accuracy(V{0, 1, 0, 0, 1}, labels), 0.0);
  EXPECT_EQ(Accuracy(V{1, 0, 1, 0}, V{1, 0, 1, 1}), 0.75);
  EXPECT_THROW(Accuracy(V{1}, V{1, 0}), Error);
  EXPECT_THROW(Accuracy(V{}, V{}), Error);
}

TEST(FairnessReportTest, PerfectPredictor) {
  const V labels = {0, 1, 0, 1};
  const auto r = ComputeFairnessReport(labels, labels, V{0, 0, 1, 1});
  EXPECT_EQ(r.accuracy, 1.0);
  EXPECT_EQ(r.delta_dp, 0.0);
  EXPECT_EQ(r.delta_eo, 0.0);
  EXPECT_EQ(r.delta_eop, 0.0);
}

TEST(FairnessReportTest, EmptyCellDegradesGracefully) {
  // No (y=0, a=1) rows.
  const auto r = ComputeFairnessReport(V{1, 0, 1, 0}, V{1, 0, 1, 1}, V{0, 0, 1, 1});
  EXPECT_FALSE(r.delta_eo.has_value());
  EXPECT_TRUE(r.delta_dp.has_value());
  EXPECT_TRUE(r.delta_eop.has_value());
  EXPECT_FALSE(r.Gap(FairnessCriterion::kEqualizedOdds).has_value());
  EXPECT_FALSE(r.group_rates.given_label_group[0][1].has_value());
}

TEST(FairnessReportTest, MatchesSingleMetricOperations) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto preds = testing::RandomBits(rng, 30), labels = testing::RandomBits(rng, 30),
               sensitive = testing::RandomBits(rng, 30);
    const auto r = ComputeFairnessReport(preds, labels, sensitive);
    EXPECT_EQ(r.accuracy, Accuracy(preds, labels));
    EXPECT_EQ(*r.delta_dp, DeltaDp(preds, sensitive));
    EXPECT_EQ(*r.delta_eo, DeltaEo(preds, labels, sensitive));
    EXPECT_EQ(*r.delta_eop, DeltaEop(preds, labels, sensitive));
  }
}

TEST(MetricPropertyTest, EoDominatesEopAndGroupSwapInvariance) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<std::size_t> size(1, 40);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t m = size(rng);
    const auto preds = testing::RandomBits(rng, m), labels = testing::RandomBits(rng, m),
               sensitive = testing::RandomBits(rng, m);
    V swapped = sensitive;
    for (auto& a : swapped) a = 1 - a;
    const auto r = ComputeFairnessReport(preds, labels, sensitive);
    const auto s = ComputeFairnessReport(preds, labels, swapped);
    EXPECT_EQ(r.delta_dp, s.delta_dp);
    EXPECT_EQ(r.delta_eo, s.delta_eo);
    EXPECT_EQ(r.delta_eop, s.delta_eop);
    if (r.delta_eo && r.delta_eop) EXPECT_GE(*r.delta_eo, *r.delta_eop);
    if (r.delta_dp) {
      EXPECT_EQ(DeltaDp(V(m, 1), sensitive), 0.0);
      EXPECT_EQ(DeltaDp(V(m, 0), sensitive), 0.0);
    }
  }
}

TEST(MetricPropertyTest, BruteForceOracleSuite) {
  const auto result = testing::MetricOracleSuite(2000, 12, 21);
  EXPECT_TRUE(result.ok()) << result.first_failure;
}

TEST(FairnessReportTest, JsonRoundTrip) {
  const auto r = ComputeFairnessReport(V{1, 0, 1, 0}, V{1, 0, 1, 1}, V{0, 0, 1, 1});
  const auto back = FairnessReportFromJson(ToJson(r));
  EXPECT_EQ(back.accuracy, r.accuracy);
  EXPECT_EQ(back.delta_dp, r.delta_dp);
  EXPECT_EQ(back.delta_eo, r.delta_eo);
  EXPECT_EQ(back.delta_eop, r.delta_eop);
  EXPECT_TRUE(ToJson(r)["delta_eo"].is_null());
}

TEST(CriterionTest, ParseAndPrint) {
  for (auto c : {FairnessCriterion::kDemographicParity, FairnessCriterion::kEqualizedOdds,
                 FairnessCriterion::kEqualOpportunity}) {
    EXPECT_EQ(ParseCriterion(ToString(c)), c);
  }
  EXPECT_THROW(ParseCriterion("parity"), Error);
}

}  // namespace
}  // namespace fairweigh
