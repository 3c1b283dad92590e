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

#include "fairweigh/reweigher.h"

#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "fairweigh/baselines.h"
#include "fairweigh/error.h"
#include "oracles.h"
#include "property_suites.h"

namespace fairweigh {
namespace {

using V = std::vector<int>;
constexpr auto kDp = FairnessCriterion::kDemographicParity;
constexpr auto kEo = FairnessCriterion::kEqualizedOdds;
constexpr auto kEop = FairnessCriterion::kEqualOpportunity;

TEST(MarginsTest, Examples) {
  EXPECT_EQ(ComputeMargins(std::vector<double>{0.5}, 0.5), std::vector<double>{0.0});
  const auto m = ComputeMargins(std::vector<double>{0.9, 0.2}, 0.5);
  EXPECT_NEAR(m[0], 0.4, 1e-15);
  EXPECT_NEAR(m[1], 0.3, 1e-15);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double d = 0.05 + 0.9 * u(rng);
    const double s = u(rng);
    EXPECT_LE(ComputeMargins(std::vector<double>{s}, d)[0], std::max(d, 1 - d));
  }
}

TEST(UpdateDpTest, HandExample) {
  // m = 8, |yhat=1| = 4, |a=1| = 4, |yhat=1, a=1| = 3.
  const V preds = {1, 1, 1, 0, 1, 0, 0, 0};
  const V sensitive = {1, 1, 1, 1, 0, 0, 0, 0};
  const auto w = UpdateSubgroupWeightsDp(SubgroupWeights{}, preds, sensitive, 0.0);
  EXPECT_DOUBLE_EQ(w(1, 1), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(w(1, 0), 16.0 / 8.0);
  EXPECT_DOUBLE_EQ(w(0, 1), 16.0 / 8.0);
  EXPECT_DOUBLE_EQ(w(0, 0), 16.0 / 24.0);
}

TEST(UpdateDpTest, IndependenceAndLargeAlpha) {
  const V preds = {1, 0, 1, 0, 1, 1, 0, 0};
  const V sensitive = {0, 0, 0, 0, 1, 1, 1, 1};
  SubgroupWeights prev;
  prev.value = {{{0.5, 2.0}, {3.0, 0.25}}};
  EXPECT_EQ(UpdateSubgroupWeightsDp(prev, preds, sensitive, 0.0), prev);
  const V skewed = {1, 1, 1, 0, 0, 0, 0, 0};
  const auto w = UpdateSubgroupWeightsDp(SubgroupWeights{}, skewed, sensitive, 1e12);
  for (int y = 0; y < 2; ++y) {
    for (int a = 0; a < 2; ++a) EXPECT_NEAR(w(y, a), 1.0, 1e-6);
  }
}

TEST(UpdateDpTest, EmptyCellWithZeroAlphaNamesTheCell) {
  try {
    UpdateSubgroupWeightsDp(SubgroupWeights{}, V{1, 1, 0}, V{0, 0, 1}, 0.0);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("alpha = 0"), std::string::npos) << msg;
  }
  EXPECT_NO_THROW(UpdateSubgroupWeightsDp(SubgroupWeights{}, V{1, 1, 0}, V{0, 0, 1}, 1.0));
}

TEST(UpdateEoTest, PerfectPredictorIsFixedPoint) {
  const V labels = {1, 0, 1, 0, 1, 1, 0};
  const V sensitive = {0, 0, 1, 1, 1, 0, 0};
  SubgroupWeights prev;
  prev.value = {{{1.5, 0.7}, {2.0, 0.1}}};
  EXPECT_EQ(UpdateSubgroupWeightsEo(prev, labels, labels, sensitive, 0.0), prev);
}

TEST(UpdateEoTest, HandInstanceMatchesCountingOracle) {
  // Group 0 has errors only on y = 1 rows, group 1 only on y = 0 rows.
  const V labels = {1, 1, 0, 0, 1, 1, 0, 0};
  const V sensitive = {0, 0, 0, 0, 1, 1, 1, 1};
  const V preds = {1, 0, 0, 0, 1, 1, 1, 0};
  const auto got = UpdateSubgroupWeightsEo(SubgroupWeights{}, preds, labels, sensitive, 0.0);
  const auto want = testing::LiteralUpdate(kEo, SubgroupWeights{}, preds, labels, sensitive, 0.0);
  ASSERT_TRUE(want.has_value());
  for (int y = 0; y < 2; ++y) {
    for (int a = 0; a < 2; ++a) EXPECT_DOUBLE_EQ(got(y, a), (*want)(y, a));
  }
  // y = 1: |yhat=1, y=1| = 3, m_{1,*} = 4; group 0 has 1 hit of 2.
  EXPECT_DOUBLE_EQ(got(1, 0), (3.0 * 2.0) / (4.0 * 1.0));
  EXPECT_DOUBLE_EQ(got(1, 1), (3.0 * 2.0) / (4.0 * 2.0));
  const auto damped = UpdateSubgroupWeightsEo(SubgroupWeights{}, preds, labels, sensitive, 1e12);
  for (int y = 0; y < 2; ++y) {
    for (int a = 0; a < 2; ++a) EXPECT_NEAR(damped(y, a), 1.0, 1e-6);
  }
}

TEST(UpdateEopTest, EqualTprIsFixedPoint) {
  const V labels = {1, 1, 1, 1, 0, 0};
  const V sensitive = {0, 0, 1, 1, 0, 1};
  const V preds = {1, 0, 0, 1, 1, 0};
  SubgroupWeights prev;
  prev.value = {{{0.3, 0.4}, {1.7, 2.2}}};
  EXPECT_EQ(UpdateSubgroupWeightsEop(prev, preds, labels, sensitive, 0.0), prev);
}

TEST(UpdateEopTest, DeprivedGroupGainsWeight) {
  // 12 rows: y = 1 rows are 3 per group; group 0 TPR 2/3, group 1 TPR 1/3.
  const V labels = {1, 1, 1, 0, 0, 0, 1, 1, 1, 0, 0, 0};
  const V sensitive = {0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1};
  const V preds = {1, 1, 0, 0, 1, 0, 1, 0, 0, 1, 0, 0};
  SubgroupWeights prev;
  prev.value = {{{0.9, 1.1}, {1.0, 1.0}}};
  const auto got = UpdateSubgroupWeightsEop(prev, preds, labels, sensitive, 0.0);
  const auto want = testing::LiteralUpdate(kEop, prev, preds, labels, sensitive, 0.0);
  ASSERT_TRUE(want.has_value());
  EXPECT_EQ(got(0, 0), 0.9);
  EXPECT_EQ(got(0, 1), 1.1);
  EXPECT_DOUBLE_EQ(got(1, 0), (*want)(1, 0));
  EXPECT_DOUBLE_EQ(got(1, 1), (*want)(1, 1));
  EXPECT_DOUBLE_EQ(got(1, 0), (3.0 * 3.0) / (6.0 * 2.0));  // 0.75
  EXPECT_DOUBLE_EQ(got(1, 1), (3.0 * 3.0) / (6.0 * 1.0));  // 1.5
  EXPECT_GT(got(1, 1), prev(1, 1));
  const auto damped = UpdateSubgroupWeightsEop(prev, preds, labels, sensitive, 1e12);
  EXPECT_NEAR(damped(1, 0), 1.0, 1e-6);
  EXPECT_NEAR(damped(1, 1), 1.0, 1e-6);
}

TEST(UpdateCoherenceTest, EoRestrictedToPositivesEqualsEop) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 500; ++trial) {
    const auto preds = testing::RandomBits(rng, 20), labels = testing::RandomBits(rng, 20),
               sensitive = testing::RandomBits(rng, 20);
    SubgroupWeights eo, eop;
    try {
      eo = UpdateSubgroupWeightsEo(SubgroupWeights{}, preds, labels, sensitive, 0.5);
      eop = UpdateSubgroupWeightsEop(SubgroupWeights{}, preds, labels, sensitive, 0.5);
    } catch (const Error&) {
      continue;
    }
    EXPECT_EQ(eo(1, 0), eop(1, 0));
    EXPECT_EQ(eo(1, 1), eop(1, 1));
  }
}

TEST(UpdateOracleTest, MatchesLiteralUpdateSuite) {
  const auto result = testing::UpdateOracleSuite(2000, 10, 1e-12, 31);
  EXPECT_TRUE(result.ok()) << result.first_failure;
  EXPECT_LE(result.max_error, 1e-12);
}

TEST(SampleWeightsTest, TwoRowSoftmaxExample) {
  // Subgroup (y=1, a=1) holds two of four rows, so p = 0.5, and all-ones W
  // gives W/sum(W) = 0.25. The other rows sit in (0,0) and (0,1).
  const V labels = {1, 1, 0, 0};
  const V sensitive = {1, 1, 0, 1};
  const std::vector<double> margins = {0.1, 0.3, 0.2, 0.2};
  const SubgroupWeights w;  // all ones: W/sum = 0.25
  const auto stats = ComputeSubgroupStats(labels, sensitive);
  const auto raw =
      ComputeRawSampleWeights(w, stats, margins, labels, sensitive, 1.0, kDp);
  const double share0 = std::exp(-0.1) / (std::exp(-0.1) + std::exp(-0.3));
  EXPECT_NEAR(share0, 0.5498, 1e-4);
  EXPECT_NEAR(raw[0], 0.25 * 0.5 * share0, 1e-15);
  EXPECT_NEAR(raw[1], 0.25 * 0.5 * (1 - share0), 1e-15);
  const auto normalized = ComputeSampleWeights(w, stats, margins, labels, sensitive, 1.0, kDp);
  double sum = 0.0;
  for (double v : normalized) sum += v;
  EXPECT_NEAR(sum, 1.0, 1e-15);
  EXPECT_NEAR(normalized[0] / normalized[1], share0 / (1 - share0), 1e-12);
}

TEST(SampleWeightsTest, EtaZeroIsEqualReweighing) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 0.5), wd(0.2, 5.0);
  const V labels = {1, 1, 0, 0, 1, 0, 1, 0, 0};
  const V sensitive = {0, 1, 0, 1, 1, 1, 0, 0, 1};
  std::vector<double> margins(labels.size());
  for (auto& m : margins) m = u(rng);
  SubgroupWeights w;
  for (auto& row : w.value) {
    for (auto& v : row) v = wd(rng);
  }
  const auto stats = ComputeSubgroupStats(labels, sensitive);
  const auto raw = ComputeRawSampleWeights(w, stats, margins, labels, sensitive, 0.0, kEo);
  const double total = w.Sum();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int y = labels[i], a = sensitive[i];
    const double expected = (w(y, a) / total) * stats.proportion(y, a) / stats.count(y, a);
    EXPECT_NEAR(raw[i], expected, 1e-15);
  }
}

TEST(SampleWeightsTest, EopNegativesGetUniformValue) {
  const V labels = {1, 1, 0, 0, 1, 0};
  const V sensitive = {0, 1, 0, 1, 1, 1};
  const std::vector<double> margins = {0.1, 0.2, 0.3, 0.05, 0.4, 0.45};
  SubgroupWeights w;
  w.value = {{{1.0, 1.0}, {2.0, 0.5}}};
  const auto raw = ComputeRawSampleWeights(w, ComputeSubgroupStats(labels, sensitive), margins,
                                           labels, sensitive, 2.0, kEop);
  for (std::size_t i : {2u, 3u, 5u}) EXPECT_DOUBLE_EQ(raw[i], 1.0 / (6.0 * w.Sum()));
}

TEST(SampleWeightsTest, Errors) {
  const V labels = {1, 0, 1, 0};
  const V sensitive = {0, 0, 1, 1};
  const std::vector<double> margins(4, 0.1);
  const auto stats = ComputeSubgroupStats(labels, sensitive);
  EXPECT_THROW(ComputeSampleWeights(SubgroupWeights{}, stats, margins, labels, sensitive, -1.0, kDp),
               Error);
  SubgroupWeights zero;
  zero.value[1][1] = 0.0;
  EXPECT_THROW(ComputeSampleWeights(zero, stats, margins, labels, sensitive, 1.0, kDp), Error);
  const auto other = ComputeSubgroupStats(V{1, 1, 1, 0}, sensitive);
  EXPECT_THROW(ComputeSampleWeights(SubgroupWeights{}, other, margins, labels, sensitive, 1.0, kDp),
               Error);
}

TEST(InvariantSuiteTest, AllChecksPass) {
  for (const auto& check : testing::InvariantSuite(5)) {
    EXPECT_TRUE(check.passed) << check.name << ": " << check.detail;
  }
}

TEST(TrainFairTest, OneEqualReweighingStep) {
  const Dataset ds = GenerateSynthetic(300, 0.8, 4);
  ReweighConfig cfg;
  cfg.alpha = 0.0;
  cfg.eta = 0.0;
  cfg.outer_iterations = 1;
  cfg.inner.batch_size = 40;
  const FairTrainResult fair = TrainFair(ds, cfg, 8);

  // Rebuild by hand: uniform fit, one DP ratio update, equal weights, refit.
  Engine rng = ShuffleEngine(8);
  ModelParams p = InitParams(ds.dim(), 8);
  p = TrainWeighted(p, ds, std::vector<double>(ds.size(), 1.0 / ds.size()), cfg.inner, rng);
  const auto preds = PredictLabels(PredictScores(p, ds.features), 0.5);
  const auto w = UpdateSubgroupWeightsDp(SubgroupWeights{}, preds, ds.sensitive, 0.0);
  const auto stats = ComputeSubgroupStats(ds.labels, ds.sensitive);
  std::vector<double> sample(ds.size());
  double total = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const int y = ds.labels[i], a = ds.sensitive[i];
    sample[i] = (w(y, a) / w.Sum()) * stats.proportion(y, a) / stats.count(y, a);
    total += sample[i];
  }
  for (auto& s : sample) s /= total;
  p = TrainWeighted(p, ds, sample, cfg.inner, rng);

  EXPECT_EQ(fair.trace.size(), 2u);
  EXPECT_EQ(fair.trace[1].subgroup_weights, w);
  EXPECT_LE((fair.params.coefficients - p.coefficients).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(fair.params.intercept, p.intercept, 1e-12);
}

TEST(TrainFairTest, ReducesTrainingGapOnBiasedSyntheticData) {
  const Dataset ds = GenerateSynthetic(4000, 0.8, 1);
  const TrainSettings erm_settings{.epochs = 51, .batch_size = 2000};
  const ModelParams erm = TrainErm(ds, erm_settings, 0);
  const double erm_gap =
      DeltaDp(PredictLabels(PredictScores(erm, ds.features), 0.5), ds.sensitive);

  ReweighConfig cfg;
  cfg.alpha = 100.0;
  cfg.eta = 1.0;
  cfg.outer_iterations = 50;
  cfg.inner.batch_size = 2000;
  const FairTrainResult fair = TrainFair(ds, cfg, 0);
  const double fair_gap = *fair.trace.back().train_report.delta_dp;
  EXPECT_GT(erm_gap, 0.1);
  EXPECT_LE(fair_gap, 0.5 * erm_gap) << "ERM " << erm_gap << " adaptive " << fair_gap;
}

TEST(TrainFairTest, TraceLayoutAndEarlyStop) {
  const Dataset ds = GenerateSynthetic(400, 0.8, 2);
  ReweighConfig cfg;
  cfg.outer_iterations = 6;
  cfg.alpha = 10.0;
  cfg.inner.batch_size = 100;
  const auto full = TrainFair(ds, cfg, 1);
  ASSERT_EQ(full.trace.size(), 7u);
  for (std::size_t t = 0; t < full.trace.size(); ++t) {
    EXPECT_EQ(full.trace[t].iteration, static_cast<int>(t));
  }
  EXPECT_EQ(full.trace[0].subgroup_weights, SubgroupWeights{});
  EXPECT_EQ(full.final_state.iteration, 6);

  cfg.early_stop_gap = 1.0;  // any defined gap is below 1
  const auto stopped = TrainFair(ds, cfg, 1);
  EXPECT_EQ(stopped.trace.size(), 1u);

  std::ostringstream jsonl;
  WriteTraceJsonl(full.trace, jsonl);
  std::istringstream lines(jsonl.str());
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j.at("iteration").get<int>(), count++);
    EXPECT_TRUE(j.at("subgroup_weights").contains("y=1,a=0"));
  }
  EXPECT_EQ(count, 7);
}

TEST(TrainFairTest, RejectsDegenerateInputs) {
  Dataset ds = GenerateSynthetic(100, 0.5, 1);
  Dataset one_group = ds;
  std::fill(one_group.sensitive.begin(), one_group.sensitive.end(), 1);
  EXPECT_THROW(TrainFair(one_group, ReweighConfig{}, 0), Error);
  Dataset one_label = ds;
  std::fill(one_label.labels.begin(), one_label.labels.end(), 0);
  EXPECT_THROW(TrainFair(one_label, ReweighConfig{}, 0), Error);
  ReweighConfig bad;
  bad.d = 1.0;
  EXPECT_THROW(TrainFair(ds, bad, 0), Error);
}

}  // namespace
}  // namespace fairweigh
