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

// End-to-end runs and cross-validated hyperparameter search.
//
// Replication r splits with seed `split_seed + r` and trains with seed
// `seed + r`. Numeric columns are standardized with training-side
// statistics. Summary standard deviations use the n - 1 denominator and are
// absent when there is a single replication. Gaps are test minus train.

#ifndef FAIRWEIGH_EXPERIMENT_H_
#define FAIRWEIGH_EXPERIMENT_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fairweigh/classifier.h"
#include "fairweigh/config.h"
#include "fairweigh/dataset.h"
#include "fairweigh/metrics.h"
#include "fairweigh/reweigher.h"

namespace fairweigh {

enum class Metric { kAccuracy, kDeltaDp, kDeltaEo, kDeltaEop };

inline constexpr std::array<Metric, 4> kMetrics = {
    Metric::kAccuracy, Metric::kDeltaDp, Metric::kDeltaEo, Metric::kDeltaEop};

std::string_view ToString(Metric metric);
Metric MetricFor(FairnessCriterion criterion);
std::optional<double> MetricValue(const FairnessReport& report, Metric metric);

struct ReplicationResult {
  int index = 0;
  std::uint64_t split_seed = 0;
  std::uint64_t model_seed = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  FairnessReport train;
  FairnessReport test;
  ModelParams model;
  // Filled only when RunOptions::keep_traces is set and the method is
  // adaptive. Not serialized.
  std::optional<TrainTrace> trace;

  std::optional<double> Gap(Metric metric) const;
};

struct MetricSummary {
  std::optional<double> train_mean;
  std::optional<double> train_std;
  std::optional<double> test_mean;
  std::optional<double> test_std;
  std::optional<double> gap;  // test_mean - train_mean
};

std::array<MetricSummary, 4> Summarize(
    std::span<const ReplicationResult> replications);

struct ResultRecord {
  ExperimentConfig config;
  std::string config_text;  // ToText(config)
  std::optional<LoadReport> load_report;
  std::vector<ReplicationResult> replications;
  std::array<MetricSummary, 4> summary;
  double wall_seconds = 0.0;

  const MetricSummary& Summary(Metric metric) const {
    return summary[static_cast<std::size_t>(metric)];
  }
};

struct RunOptions {
  // Replications (and grid points) run on up to this many threads; results
  // are gathered in index order either way.
  int threads = 1;
  bool keep_traces = false;
  // Called with the row ids of every dataset a model is fitted on or scored
  // on. May be invoked from several threads at once.
  std::function<void(std::span<const std::size_t> row_ids)> on_evaluate;
};

Dataset LoadExperimentData(const ExperimentConfig& config, LoadReport* report);

ResultRecord RunExperiment(const ExperimentConfig& config,
                           const RunOptions& options = {});
// Same, on data that is already loaded.
ResultRecord RunExperiment(const ExperimentConfig& config, const Dataset& data,
                           const RunOptions& options = {});

struct GridPoint {
  double alpha = 0.0;
  double eta = 0.0;
  // One replication per cross-validation fold; `test` holds the validation
  // fold.
  ResultRecord record;
  std::optional<double> validation_gap;
  std::optional<double> validation_accuracy;
  // Set when training failed at this point; such points are not selectable.
  std::string error;
};

struct GridResult {
  ReweighConfig best;  // inner settings as in EffectiveReweighConfig
  std::size_t best_index = 0;
  std::vector<GridPoint> points;  // alpha-major, in grid order
  std::vector<int> skipped_folds;
};

// Among points whose validation gap is within `tolerance` of the smallest,
// the highest validation accuracy wins; ties go to lower alpha, then lower
// eta.
std::size_t SelectGridPoint(std::span<const GridPoint> points, double tolerance);

// k-fold cross-validation on the training split of replication 0. The test
// split is never scored.
GridResult GridSearch(const ExperimentConfig& config,
                      std::span<const double> alphas,
                      std::span<const double> etas, int folds,
                      const RunOptions& options = {});
GridResult GridSearch(const ExperimentConfig& config, const Dataset& data,
                      std::span<const double> alphas,
                      std::span<const double> etas, int folds,
                      const RunOptions& options = {});

}  // namespace fairweigh

#endif  // FAIRWEIGH_EXPERIMENT_H_
