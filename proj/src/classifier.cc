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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/random/uniform_real_distribution.hpp>

#include "fairweigh/error.h"

namespace fairweigh {
namespace {

constexpr double kInitScale = 0.01;

void CheckWeights(std::span<const double> weights, std::size_t m, const char* op) {
  if (weights.size() != m) {
    throw Error(std::string(op) + ": weights length " + std::to_string(weights.size()) +
                " does not match " + std::to_string(m) + " rows");
  }
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(std::string(op) + ": weights must be finite and nonnegative");
    }
  }
}

void CheckDim(const ModelParams& params, const Dataset& ds, const char* op) {
  if (params.dim() != ds.dim()) {
    throw Error(std::string(op) + ": model has " + std::to_string(params.dim()) +
                " coefficients but data has " + std::to_string(ds.dim()) + " columns");
  }
}

double CrossEntropy(int y, double score) {
  const double s = std::clamp(score, kScoreEpsilon, 1.0 - kScoreEpsilon);
  return y == 1 ? -std::log(s) : -std::log1p(-s);
}

double RowScore(const ModelParams& params, const FeatureMatrix& x, Eigen::Index r) {
  return Sigmoid(x.row(r).dot(params.coefficients) + params.intercept);
}

}  // namespace

void TrainSettings::Validate() const {
  if (epochs < 1) throw Error("train settings: epochs must be positive");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw Error("train settings: learning_rate must be positive");
  }
  if (batch_size < 1) throw Error("train settings: batch_size must be positive");
}

ModelParams InitParams(std::size_t dim, std::uint64_t seed) {
  if (dim < 1) throw Error("init_params: dim must be at least 1");
  Engine rng(seed);
  boost::random::uniform_real_distribution<double> dist(-kInitScale, kInitScale);
  ModelParams p;
  p.coefficients.resize(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < p.coefficients.size(); ++i) p.coefficients[i] = dist(rng);
  return p;
}

ModelParams ZeroParams(std::size_t dim) {
  if (dim < 1) throw Error("init_params: dim must be at least 1");
  ModelParams p;
  p.coefficients = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  return p;
}

Engine ShuffleEngine(std::uint64_t seed) { return Engine(MixSeed(seed, 1)); }

double Sigmoid(double z) {
  static constexpr double kHigh = 1.0 - std::numeric_limits<double>::epsilon() / 2;
  static constexpr double kLow = std::numeric_limits<double>::denorm_min();
  double s;
  if (z >= 0) {
    s = 1.0 / (1.0 + std::exp(-z));
  } else {
    const double e = std::exp(z);
    s = e / (1.0 + e);
  }
  return std::clamp(s, kLow, kHigh);
}

double PredictScore(const ModelParams& params, std::span<const double> row) {
  if (row.size() != params.dim()) {
    throw Error("predict_score: row has " + std::to_string(row.size()) +
                " values, model expects " + std::to_string(params.dim()));
  }
  const Eigen::Map<const Eigen::VectorXd> x(row.data(),
                                            static_cast<Eigen::Index>(row.size()));
  return Sigmoid(x.dot(params.coefficients) + params.intercept);
}

Eigen::VectorXd PredictScores(const ModelParams& params, const FeatureMatrix& x) {
  if (static_cast<std::size_t>(x.cols()) != params.dim()) {
    throw Error("predict_score: dimension mismatch");
  }
  Eigen::VectorXd z = x * params.coefficients;
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = Sigmoid(z[i] + params.intercept);
  return z;
}

int PredictLabel(double score, double d) { return score >= d ? 1 : 0; }

std::vector<int> PredictLabels(const Eigen::VectorXd& scores, double d) {
  std::vector<int> out(static_cast<std::size_t>(scores.size()));
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    out[static_cast<std::size_t>(i)] = PredictLabel(scores[i], d);
  }
  return out;
}

double WeightedLoss(const ModelParams& params, const Dataset& ds,
                    std::span<const double> weights) {
  CheckDim(params, ds, "weighted_loss");
  CheckWeights(weights, ds.size(), "weighted_loss");
  double total = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (weights[i] == 0.0) continue;
    const double s = RowScore(params, ds.features, static_cast<Eigen::Index>(i));
    total += weights[i] * CrossEntropy(ds.labels[i], s);
  }
  return total;
}

Gradient WeightedGradient(const ModelParams& params, const Dataset& ds,
                          std::span<const std::size_t> rows,
                          std::span<const double> batch_weights) {
  CheckDim(params, ds, "gradient");
  CheckWeights(batch_weights, rows.size(), "gradient");
  Gradient g{Eigen::VectorXd::Zero(params.coefficients.size()), 0.0};
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] >= ds.size()) throw Error("gradient: row index out of range");
    const auto r = static_cast<Eigen::Index>(rows[k]);
    const double residual =
        batch_weights[k] * (RowScore(params, ds.features, r) - ds.labels[rows[k]]);
    g.coefficients += residual * ds.features.row(r).transpose();
    g.intercept += residual;
  }
  return g;
}

ModelParams TrainWeighted(ModelParams params, const Dataset& ds,
                          std::span<const double> weights,
                          const TrainSettings& settings, Engine& rng) {
  settings.Validate();
  CheckDim(params, ds, "train_weighted");
  CheckWeights(weights, ds.size(), "train_weighted");
  const std::size_t m = ds.size();
  const FeatureMatrix& x = ds.features;

  std::vector<std::size_t> order(m);
  Eigen::VectorXd grad(params.coefficients.size());
  for (int epoch = 0; epoch < settings.epochs; ++epoch) {
    if (settings.shuffle) {
      order = Permutation(m, rng);
    } else {
      for (std::size_t i = 0; i < m; ++i) order[i] = i;
    }
    std::size_t batch = 0;
    for (std::size_t start = 0; start < m; start += settings.batch_size, ++batch) {
      const std::size_t end = std::min(m, start + settings.batch_size);
      grad.setZero();
      double grad_intercept = 0.0;
      for (std::size_t k = start; k < end; ++k) {
        const std::size_t i = order[k];
        const auto r = static_cast<Eigen::Index>(i);
        const double s = RowScore(params, x, r);
        const double residual = weights[i] * (s - ds.labels[i]);
        grad.noalias() += residual * x.row(r).transpose();
        grad_intercept += residual;
      }
      const double step = settings.learning_rate * static_cast<double>(m) /
                          static_cast<double>(end - start);
      params.coefficients.noalias() -= step * grad;
      params.intercept -= step * grad_intercept;
      // With clamped scores the loss is finite exactly when the parameters are.
      if (!std::isfinite(params.intercept) || !params.coefficients.allFinite()) {
        throw Error("train_weighted: non-finite loss at epoch " + std::to_string(epoch) +
                    ", batch " + std::to_string(batch));
      }
    }
  }
  return params;
}

ModelParams TrainWeighted(ModelParams params, const Dataset& ds,
                          std::span<const double> weights,
                          const TrainSettings& settings) {
  Engine rng(settings.seed);
  return TrainWeighted(std::move(params), ds, weights, settings, rng);
}

nlohmann::json ToJson(const ModelParams& params) {
  nlohmann::json coefficients = nlohmann::json::array();
  for (Eigen::Index i = 0; i < params.coefficients.size(); ++i) {
    coefficients.push_back(params.coefficients[i]);
  }
  return {{"coefficients", coefficients},
          {"intercept", params.intercept},
          {"feature_names", params.feature_names}};
}

ModelParams ModelParamsFromJson(const nlohmann::json& j) {
  ModelParams p;
  const auto values = j.at("coefficients").get<std::vector<double>>();
  p.coefficients = Eigen::Map<const Eigen::VectorXd>(
      values.data(), static_cast<Eigen::Index>(values.size()));
  p.intercept = j.at("intercept").get<double>();
  p.feature_names = j.value("feature_names", std::vector<std::string>{});
  return p;
}

}  // namespace fairweigh
