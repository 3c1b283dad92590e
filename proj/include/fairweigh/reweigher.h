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

// Adaptive priority reweighing.
//
// An outer loop wraps the weighted logistic trainer. After each inner fit
// the loop
//
//   1. scores every training row and sets its margin phi_i = |h(x_i) - d|;
//   2. multiplies each subgroup weight W[y][a] by a damped ratio of the
//      expected to the observed count of the (prediction, group) cell under
//      the chosen fairness criterion;
//   3. spreads each subgroup's share W[y][a] / sum(W) times p[y][a] over
//      its rows with a softmax of -eta * phi, so rows close to the decision
//      boundary get more weight;
//   4. refits, warm-starting from the previous parameters.
//
// Subgroups for step 3 are indexed by true label and group. Step 2 counts
// predictions. For equal opportunity only the y = 1 weights move and the
// y = 0 rows get the flat weight 1 / (m * sum(W)).
//
// Sample weights are rescaled to sum to 1 after every update, so the inner
// objective keeps the scale of a mean cross-entropy. `alpha` is an additive
// damping term on both sides of each ratio: it competes with count products
// of order m^2, so useful values scale with the square of the training-set
// size (values far beyond 10^4 are accepted).

#ifndef FAIRWEIGH_REWEIGHER_H_
#define FAIRWEIGH_REWEIGHER_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "fairweigh/classifier.h"
#include "fairweigh/dataset.h"
#include "fairweigh/metrics.h"

namespace fairweigh {

struct SubgroupWeights {
  std::array<std::array<double, 2>, 2> value{{{1.0, 1.0}, {1.0, 1.0}}};  // [y][a]

  double operator()(int y, int a) const { return value[y][a]; }
  double& operator()(int y, int a) { return value[y][a]; }
  double Sum() const;

  bool operator==(const SubgroupWeights&) const = default;
};

struct ReweighConfig {
  FairnessCriterion criterion = FairnessCriterion::kDemographicParity;
  double alpha = 0.0;
  double eta = 1.0;
  double d = 0.5;
  int outer_iterations = 200;
  TrainSettings inner{.epochs = 1};
  // Stop once the training-set gap for `criterion` falls below this value.
  std::optional<double> early_stop_gap;

  void Validate() const;
  bool operator==(const ReweighConfig&) const = default;
};

struct WeightState {
  SubgroupWeights subgroup_weights;
  std::vector<double> sample_weights;
  std::vector<double> margins;
  int iteration = 0;
};

struct TraceRecord {
  int iteration = 0;
  // Subgroup weights the model of this iteration was trained with.
  SubgroupWeights subgroup_weights;
  FairnessReport train_report;
  double weighted_loss = 0.0;
};

using TrainTrace = std::vector<TraceRecord>;

struct FairTrainResult {
  ModelParams params;
  TrainTrace trace;
  WeightState final_state;
};

// phi_i = |scores_i - d|.
std::vector<double> ComputeMargins(std::span<const double> scores, double d);

// W[y][a] *= (|yhat=y| * |a| + alpha) / (m * |yhat=y, a| + alpha).
SubgroupWeights UpdateSubgroupWeightsDp(const SubgroupWeights& previous,
                                        std::span<const int> preds,
                                        std::span<const int> sensitive,
                                        double alpha);

// W[y][a] *= (|yhat=y, y_i=y| * m[y][a] + alpha)
//          / (m[y][*] * |yhat=y, y_i=y, a| + alpha).
SubgroupWeights UpdateSubgroupWeightsEo(const SubgroupWeights& previous,
                                        std::span<const int> preds,
                                        std::span<const int> labels,
                                        std::span<const int> sensitive,
                                        double alpha);

// The y = 1 half of UpdateSubgroupWeightsEo; W[0][a] are returned unchanged.
SubgroupWeights UpdateSubgroupWeightsEop(const SubgroupWeights& previous,
                                         std::span<const int> preds,
                                         std::span<const int> labels,
                                         std::span<const int> sensitive,
                                         double alpha);

SubgroupWeights UpdateSubgroupWeights(FairnessCriterion criterion,
                                      const SubgroupWeights& previous,
                                      std::span<const int> preds,
                                      std::span<const int> labels,
                                      std::span<const int> sensitive,
                                      double alpha);

// Per-row weights before the global rescaling. `stats` must describe
// (labels, sensitive).
std::vector<double> ComputeRawSampleWeights(const SubgroupWeights& weights,
                                            const SubgroupStats& stats,
                                            std::span<const double> margins,
                                            std::span<const int> labels,
                                            std::span<const int> sensitive,
                                            double eta,
                                            FairnessCriterion criterion);

// ComputeRawSampleWeights rescaled to sum to 1. Throws if any weight
// underflows to zero.
std::vector<double> ComputeSampleWeights(const SubgroupWeights& weights,
                                         const SubgroupStats& stats,
                                         std::span<const double> margins,
                                         std::span<const int> labels,
                                         std::span<const int> sensitive,
                                         double eta, FairnessCriterion criterion);

// Full outer loop. Iteration 0 fits with uniform weights; iterations
// 1..outer_iterations reweigh and refit. Parameters are initialized with
// InitParams(dim, seed) and one ShuffleEngine(seed) stream feeds every
// inner fit. Returns the last iterate.
FairTrainResult TrainFair(const Dataset& ds, const ReweighConfig& config,
                          std::uint64_t seed);

// One JSON object per line, one line per iteration.
void WriteTraceJsonl(const TrainTrace& trace, std::ostream& out);

}  // namespace fairweigh

#endif  // FAIRWEIGH_REWEIGHER_H_
