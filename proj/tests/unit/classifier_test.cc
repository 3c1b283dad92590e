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

#include "fairweigh/classifier.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fairweigh/baselines.h"
#include "fairweigh/error.h"
#include "oracles.h"
#include "property_suites.h"

namespace fairweigh {
namespace {

Dataset FromRows(const std::vector<std::vector<double>>& rows, const std::vector<int>& labels,
                 std::vector<int> sensitive = {}) {
  Dataset ds;
  const std::size_t dim = rows.front().size();
  ds.features.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      ds.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
    ds.row_ids.push_back(r);
  }
  ds.labels = labels;
  ds.sensitive = sensitive.empty() ? std::vector<int>(rows.size(), 0) : sensitive;
  for (std::size_t c = 0; c < dim; ++c) {
    ds.feature_names.push_back("f" + std::to_string(c));
    ds.column_kinds.push_back(ColumnKind::kNumeric);
  }
  return ds;
}

double Ce(int y, double p) { return -(y * std::log(p) + (1 - y) * std::log(1 - p)); }

TEST(InitParamsTest, ShapeDeterminismAndScale) {
  const ModelParams a = InitParams(3, 42), b = InitParams(3, 42);
  EXPECT_EQ(a.dim(), 3u);
  EXPECT_EQ(a.coefficients, b.coefficients);
  EXPECT_EQ(a.intercept, 0.0);
  EXPECT_NE(InitParams(3, 43).coefficients, a.coefficients);
  EXPECT_LE(InitParams(1000, 1).coefficients.cwiseAbs().maxCoeff(), 0.01);
  EXPECT_THROW(InitParams(0, 1), Error);
  EXPECT_THROW(ZeroParams(0), Error);
}

TEST(PredictScoreTest, Examples) {
  const std::vector<double> row = {3.0, -2.0};
  EXPECT_EQ(PredictScore(ZeroParams(2), row), 0.5);
  ModelParams p = ZeroParams(1);
  p.coefficients[0] = 1.0;
  EXPECT_NEAR(PredictScore(p, std::vector<double>{std::log(3.0)}), 0.75, 1e-15);
  EXPECT_THROW(PredictScore(p, row), Error);
}

TEST(PredictScoreTest, ExtremeInputsStayInsideUnitInterval) {
  ModelParams p = ZeroParams(1);
  p.coefficients[0] = 1.0;
  for (double x : {40.0, 800.0, 1e300}) {
    const double hi = PredictScore(p, std::vector<double>{x});
    const double lo = PredictScore(p, std::vector<double>{-x});
    EXPECT_GT(hi, 0.0);
    EXPECT_LT(hi, 1.0);
    EXPECT_GT(lo, 0.0);
    EXPECT_LT(lo, 1.0);
    EXPECT_NEAR(hi, 1.0, 1e-15);
    EXPECT_NEAR(lo, 0.0, 1e-15);
  }
  EXPECT_NEAR(Sigmoid(-30.0), std::exp(-30.0) / (1 + std::exp(-30.0)), 1e-27);
}

TEST(PredictLabelTest, BoundaryGoesPositive) {
  EXPECT_EQ(PredictLabel(0.7, 0.5), 1);
  EXPECT_EQ(PredictLabel(0.5, 0.5), 1);
  EXPECT_EQ(PredictLabel(0.49, 0.5), 0);
}

TEST(WeightedLossTest, Examples) {
  const Dataset ds = FromRows({{1.0, 0.0}, {0.0, 2.0}, {-1.0, 1.0}, {0.5, -0.5}}, {1, 0, 1, 0});
  ModelParams p = ZeroParams(2);
  p.coefficients << 0.3, -0.2;
  p.intercept = 0.1;
  EXPECT_EQ(WeightedLoss(p, ds, std::vector<double>(4, 0.0)), 0.0);

  double direct = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double z = 0.3 * ds.features(i, 0) - 0.2 * ds.features(i, 1) + 0.1;
    direct += Ce(ds.labels[i], 1.0 / (1.0 + std::exp(-z)));
  }
  direct /= 4.0;
  EXPECT_NEAR(WeightedLoss(p, ds, std::vector<double>(4, 0.25)), direct, 1e-15);

  const std::vector<double> w = {0.1, 0.4, 0.2, 0.3}, w2 = {0.2, 0.8, 0.4, 0.6};
  EXPECT_NEAR(WeightedLoss(p, ds, w2), 2.0 * WeightedLoss(p, ds, w), 1e-15);
  EXPECT_THROW(WeightedLoss(p, ds, std::vector<double>{0.1, -0.1, 0.5, 0.5}), Error);
  EXPECT_THROW(WeightedLoss(p, ds, std::vector<double>{0.5, 0.5}), Error);
}

TEST(WeightedLossTest, ClampsSaturatedScores) {
  const Dataset ds = FromRows({{1.0}}, {0});
  ModelParams p = ZeroParams(1);
  p.coefficients[0] = 1e4;
  const double loss = WeightedLoss(p, ds, std::vector<double>{1.0});
  EXPECT_TRUE(std::isfinite(loss));
  EXPECT_NEAR(loss, -std::log(kScoreEpsilon), 1e-3);
}

TEST(GradientTest, ClosedFormsAndZeroWeights) {
  const Dataset ds = FromRows({{2.0, -1.0}, {0.5, 3.0}}, {1, 0});
  const ModelParams zero = ZeroParams(2);
  const std::vector<std::size_t> both = {0, 1};
  const Gradient g0 = WeightedGradient(zero, ds, both, std::vector<double>{0.0, 0.0});
  EXPECT_EQ(g0.coefficients, Eigen::VectorXd::Zero(2));
  EXPECT_EQ(g0.intercept, 0.0);
  for (std::size_t r = 0; r < 2; ++r) {
    const std::vector<std::size_t> rows = {r};
    const Gradient g = WeightedGradient(zero, ds, rows, std::vector<double>{1.0});
    const double scale = 0.5 - ds.labels[r];
    EXPECT_EQ(g.coefficients[0], scale * ds.features(static_cast<Eigen::Index>(r), 0));
    EXPECT_EQ(g.coefficients[1], scale * ds.features(static_cast<Eigen::Index>(r), 1));
    EXPECT_EQ(g.intercept, scale);
  }
}

TEST(GradientTest, MatchesFiniteDifferences) {
  const auto result = testing::GradientCheckSuite(200, 1e-6, 1e-5, 77);
  EXPECT_TRUE(result.ok()) << result.first_failure << " max " << result.max_error;
  EXPECT_LE(result.max_error, 1e-5);
}

TEST(TrainWeightedTest, UniformWeightsMatchScalarSgd) {
  const Dataset ds = GenerateSynthetic(300, 0.5, 6);
  for (std::size_t batch : {1u, 32u, 300u, 1000u}) {
    const TrainSettings s{.epochs = 5, .learning_rate = 0.1, .batch_size = batch};
    Engine a(17), b(17);
    const ModelParams lib = TrainWeighted(InitParams(ds.dim(), 3), ds,
                                          std::vector<double>(ds.size(), 1.0 / ds.size()), s, a);
    const ModelParams ref = testing::ReferenceSgd(InitParams(ds.dim(), 3), ds, s, b);
    EXPECT_LE((lib.coefficients - ref.coefficients).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_NEAR(lib.intercept, ref.intercept, 1e-10);
  }
}

TEST(TrainWeightedTest, ErmIsUniformTrainWeightedExactly) {
  const Dataset ds = GenerateSynthetic(300, 0.5, 6);
  const TrainSettings s{.epochs = 7, .batch_size = 50};
  Engine rng = ShuffleEngine(9);
  const ModelParams direct = TrainWeighted(InitParams(ds.dim(), 9), ds,
                                           std::vector<double>(ds.size(), 1.0 / ds.size()), s, rng);
  const ModelParams erm = TrainErm(ds, s, 9);
  EXPECT_EQ(direct.coefficients, erm.coefficients);
  EXPECT_EQ(direct.intercept, erm.intercept);
}

TEST(TrainWeightedTest, SharedEngineEqualsOneLongerRun) {
  const Dataset ds = GenerateSynthetic(200, 0.5, 2);
  const std::vector<double> w(ds.size(), 1.0 / ds.size());
  Engine one(5), two(5);
  const ModelParams whole =
      TrainWeighted(ZeroParams(ds.dim()), ds, w, TrainSettings{.epochs = 4, .batch_size = 30}, one);
  ModelParams split = ZeroParams(ds.dim());
  for (int k = 0; k < 4; ++k) {
    split = TrainWeighted(split, ds, w, TrainSettings{.epochs = 1, .batch_size = 30}, two);
  }
  EXPECT_EQ(whole.coefficients, split.coefficients);
}

TEST(TrainWeightedTest, SeparableToySetReachesFullAccuracy) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  while (rows.size() < 100) {
    const double x = u(rng), y = u(rng);
    if (std::abs(x + y) < 0.2) continue;  // keep a margin around x + y = 0
    rows.push_back({x, y});
    labels.push_back(x + y > 0 ? 1 : 0);
  }
  const Dataset ds = FromRows(rows, labels);
  const ModelParams p = TrainErm(ds, TrainSettings{.epochs = 200, .batch_size = 10}, 0);
  EXPECT_EQ(Accuracy(PredictLabels(PredictScores(p, ds.features), 0.5), ds.labels), 1.0);
}

TEST(TrainWeightedTest, WeightOnOneGroupFavoursThatGroup) {
  // Labels follow opposite rules in the two groups, so one model cannot fit
  // both; all weight on a = 1 should make a = 1 the better-fitted group.
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels, sensitive;
  for (int i = 0; i < 400; ++i) {
    const int a = i % 2;
    const double x = n(rng);
    rows.push_back({x});
    labels.push_back((a == 1) == (x > 0) ? 1 : 0);
    sensitive.push_back(a);
  }
  const Dataset ds = FromRows(rows, labels, sensitive);
  std::vector<double> w(ds.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = sensitive[i] == 1 ? 1.0 / 200 : 0.0;
  const ModelParams p =
      TrainWeighted(InitParams(1, 0), ds, w, TrainSettings{.epochs = 50, .batch_size = 40});
  const auto preds = PredictLabels(PredictScores(p, ds.features), 0.5);
  double correct[2] = {0, 0};
  for (std::size_t i = 0; i < preds.size(); ++i) correct[sensitive[i]] += preds[i] == labels[i];
  EXPECT_GE(correct[1], correct[0]);
  EXPECT_GT(correct[1] / 200, 0.9);
}

TEST(TrainWeightedTest, FullBatchLossIsNonIncreasing) {
  const Dataset ds =
      Standardize(GenerateSynthetic(400, 0.8, 3), GenerateSynthetic(4, 0.8, 3)).first;
  const std::vector<double> w(ds.size(), 1.0 / ds.size());
  const TrainSettings s{.epochs = 1, .batch_size = ds.size(), .shuffle = false};
  ModelParams p = InitParams(ds.dim(), 1);
  double previous = WeightedLoss(p, ds, w);
  for (int epoch = 0; epoch < 200; ++epoch) {
    p = TrainWeighted(p, ds, w, s);
    const double loss = WeightedLoss(p, ds, w);
    EXPECT_LE(loss, previous + 1e-9) << "epoch " << epoch;
    previous = loss;
  }
}

TEST(TrainWeightedTest, DivergenceIsReported) {
  const Dataset ds = FromRows({{1e200}, {-1e200}}, {1, 0});
  try {
    TrainWeighted(ZeroParams(1), ds, std::vector<double>{0.5, 0.5},
                  TrainSettings{.epochs = 3, .learning_rate = 1e200, .batch_size = 1});
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("epoch 0, batch"), std::string::npos) << e.what();
  }
}

TEST(TrainSettingsTest, Validation) {
  EXPECT_THROW(TrainSettings{.epochs = 0}.Validate(), Error);
  EXPECT_THROW(TrainSettings{.learning_rate = 0.0}.Validate(), Error);
  EXPECT_THROW(TrainSettings{.batch_size = 0}.Validate(), Error);
  EXPECT_NO_THROW(TrainSettings{}.Validate());
}

TEST(ModelParamsTest, JsonRoundTrip) {
  ModelParams p = InitParams(3, 5);
  p.intercept = -0.125;
  p.feature_names = {"a", "b", "c"};
  const ModelParams back = ModelParamsFromJson(ToJson(p));
  EXPECT_EQ(back.coefficients, p.coefficients);
  EXPECT_EQ(back.intercept, p.intercept);
  EXPECT_EQ(back.feature_names, p.feature_names);
}

}  // namespace
}  // namespace fairweigh
