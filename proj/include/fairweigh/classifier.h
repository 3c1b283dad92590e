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

// Logistic scorer h(x) = sigmoid(coefficients . x + intercept) trained by
// mini-batch SGD on the sample-weighted cross-entropy
//
//   F(theta) = sum_i w_i * CE(y_i, h(x_i)).
//
// The weights carry their own normalization: with w_i = 1/m the objective is
// the plain mean cross-entropy. Each SGD step uses
//
//   (m / |B|) * sum_{i in B} w_i * grad CE_i,
//
// an unbiased estimate of grad F for a uniformly drawn batch B.

#ifndef FAIRWEIGH_CLASSIFIER_H_
#define FAIRWEIGH_CLASSIFIER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fairweigh/dataset.h"
#include "fairweigh/random.h"
#include "json.hpp"

namespace fairweigh {

struct ModelParams {
  Eigen::VectorXd coefficients;
  double intercept = 0.0;
  std::vector<std::string> feature_names;

  std::size_t dim() const { return static_cast<std::size_t>(coefficients.size()); }
};

struct TrainSettings {
  int epochs = 200;
  double learning_rate = 0.1;
  std::size_t batch_size = 1000;
  std::uint64_t seed = 0;
  bool shuffle = true;

  void Validate() const;
  bool operator==(const TrainSettings&) const = default;
};

// Cross-entropy clamps scores into [kScoreEpsilon, 1 - kScoreEpsilon].
inline constexpr double kScoreEpsilon = 1e-12;

// Coefficients uniform in [-0.01, 0.01], intercept 0.
ModelParams InitParams(std::size_t dim, std::uint64_t seed);
ModelParams ZeroParams(std::size_t dim);

// Shuffle stream paired with InitParams(dim, seed) by the trainers.
Engine ShuffleEngine(std::uint64_t seed);

// Overflow-free logistic function, kept strictly inside (0, 1): results
// that would round to 0 or 1 are pinned to the nearest representable
// interior value.
double Sigmoid(double z);

double PredictScore(const ModelParams& params, std::span<const double> row);
Eigen::VectorXd PredictScores(const ModelParams& params, const FeatureMatrix& x);

// 1 if score >= d, else 0; a score exactly on the boundary is positive.
int PredictLabel(double score, double d);
std::vector<int> PredictLabels(const Eigen::VectorXd& scores, double d);

double WeightedLoss(const ModelParams& params, const Dataset& ds,
                    std::span<const double> weights);

struct Gradient {
  Eigen::VectorXd coefficients;
  double intercept = 0.0;
};

// Gradient of sum_k batch_weights[k] * CE(row rows[k]) with respect to
// (coefficients, intercept).
Gradient WeightedGradient(const ModelParams& params, const Dataset& ds,
                          std::span<const std::size_t> rows,
                          std::span<const double> batch_weights);

// Runs settings.epochs passes of mini-batch SGD starting from `params`.
// Each epoch draws a fresh permutation from `rng` (when shuffling), so
// consecutive calls sharing one engine behave like one longer run.
ModelParams TrainWeighted(ModelParams params, const Dataset& ds,
                          std::span<const double> weights,
                          const TrainSettings& settings, Engine& rng);

// Same, with the shuffle stream seeded from settings.seed.
ModelParams TrainWeighted(ModelParams params, const Dataset& ds,
                          std::span<const double> weights,
                          const TrainSettings& settings);

nlohmann::json ToJson(const ModelParams& params);
ModelParams ModelParamsFromJson(const nlohmann::json& j);

}  // namespace fairweigh

#endif  // FAIRWEIGH_CLASSIFIER_H_
