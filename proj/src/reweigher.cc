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

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "fairweigh/error.h"

namespace fairweigh {
namespace {

// Counts shared by the three update rules; indexing is [y][a].
struct Counts {
  std::size_t m = 0;
  std::array<std::size_t, 2> predicted{};                  // |yhat=y|
  std::array<std::size_t, 2> group{};                      // |a|
  std::array<std::array<std::size_t, 2>, 2> predicted_in{};  // |yhat=y, a|
  std::array<std::size_t, 2> label{};                      // m[y][*]
  std::array<std::array<std::size_t, 2>, 2> label_in{};    // m[y][a]
  std::array<std::size_t, 2> correct{};                    // |yhat=y, y_i=y|
  std::array<std::array<std::size_t, 2>, 2> correct_in{};  // |yhat=y, y_i=y, a|
};

void CheckBinary(std::span<const int> v, const char* op) {
  for (int x : v) {
    if (x != 0 && x != 1) throw Error(std::string(op) + ": values must be 0 or 1");
  }
}

Counts Count(std::span<const int> preds, std::span<const int> labels,
             std::span<const int> sensitive, const char* op) {
  if (preds.size() != sensitive.size() ||
      (!labels.empty() && labels.size() != preds.size())) {
    throw Error(std::string(op) + ": length mismatch");
  }
  if (preds.empty()) throw Error(std::string(op) + ": empty input");
  CheckBinary(preds, op);
  CheckBinary(labels, op);
  CheckBinary(sensitive, op);
  Counts c;
  c.m = preds.size();
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const int yhat = preds[i], a = sensitive[i];
    ++c.predicted[yhat];
    ++c.group[a];
    ++c.predicted_in[yhat][a];
    if (labels.empty()) continue;
    const int y = labels[i];
    ++c.label[y];
    ++c.label_in[y][a];
    if (yhat == y) {
      ++c.correct[y];
      ++c.correct_in[y][a];
    }
  }
  return c;
}

double Ratio(std::size_t expected, std::size_t observed, double alpha,
             const char* op, int y, int a) {
  const double denominator = static_cast<double>(observed) + alpha;
  if (denominator == 0.0) {
    throw Error(std::string(op) + ": empty cell (y=" + std::to_string(y) +
                ", a=" + std::to_string(a) + ") with alpha = 0");
  }
  return (static_cast<double>(expected) + alpha) / denominator;
}

void CheckAlpha(double alpha, const char* op) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw Error(std::string(op) + ": alpha must be finite and nonnegative");
  }
}

// The rule shared by equalized odds and equal opportunity for one label.
void UpdateLabel(SubgroupWeights& w, const Counts& c, int y, double alpha,
                 const char* op) {
  for (int a = 0; a < 2; ++a) {
    w(y, a) *= Ratio(c.correct[y] * c.label_in[y][a], c.label[y] * c.correct_in[y][a],
                     alpha, op, y, a);
  }
}

}  // namespace

double SubgroupWeights::Sum() const {
  return value[0][0] + value[0][1] + value[1][0] + value[1][1];
}

void ReweighConfig::Validate() const {
  if (!(d > 0.0 && d < 1.0)) throw Error("reweigh config: d must lie in (0, 1)");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw Error("reweigh config: alpha must be finite and nonnegative");
  }
  if (!(eta >= 0.0) || !std::isfinite(eta)) {
    throw Error("reweigh config: eta must be finite and nonnegative");
  }
  if (outer_iterations < 1) throw Error("reweigh config: outer_iterations must be positive");
  if (early_stop_gap && !(*early_stop_gap >= 0.0)) {
    throw Error("reweigh config: early_stop_gap must be nonnegative");
  }
  inner.Validate();
}

std::vector<double> ComputeMargins(std::span<const double> scores, double d) {
  std::vector<double> margins(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) margins[i] = std::abs(scores[i] - d);
  return margins;
}

SubgroupWeights UpdateSubgroupWeightsDp(const SubgroupWeights& previous,
                                        std::span<const int> preds,
                                        std::span<const int> sensitive,
                                        double alpha) {
  constexpr const char* kOp = "update_subgroup_weights_dp";
  CheckAlpha(alpha, kOp);
  const Counts c = Count(preds, {}, sensitive, kOp);
  SubgroupWeights w = previous;
  for (int y = 0; y < 2; ++y) {
    for (int a = 0; a < 2; ++a) {
      w(y, a) *= Ratio(c.predicted[y] * c.group[a], c.m * c.predicted_in[y][a], alpha,
                       kOp, y, a);
    }
  }
  return w;
}

SubgroupWeights UpdateSubgroupWeightsEo(const SubgroupWeights& previous,
                                        std::span<const int> preds,
                                        std::span<const int> labels,
                                        std::span<const int> sensitive,
                                        double alpha) {
  constexpr const char* kOp = "update_subgroup_weights_eo";
  CheckAlpha(alpha, kOp);
  if (labels.size() != preds.size()) throw Error(std::string(kOp) + ": length mismatch");
  const Counts c = Count(preds, labels, sensitive, kOp);
  SubgroupWeights w = previous;
  UpdateLabel(w, c, 0, alpha, kOp);
  UpdateLabel(w, c, 1, alpha, kOp);
  return w;
}

SubgroupWeights UpdateSubgroupWeightsEop(const SubgroupWeights& previous,
                                         std::span<const int> preds,
                                         std::span<const int> labels,
                                         std::span<const int> sensitive,
                                         double alpha) {
  constexpr const char* kOp = "update_subgroup_weights_eop";
  CheckAlpha(alpha, kOp);
  if (labels.size() != preds.size()) throw Error(std::string(kOp) + ": length mismatch");
  const Counts c = Count(preds, labels, sensitive, kOp);
  SubgroupWeights w = previous;
  UpdateLabel(w, c, 1, alpha, kOp);
  return w;
}

SubgroupWeights UpdateSubgroupWeights(FairnessCriterion criterion,
                                      const SubgroupWeights& previous,
                                      std::span<const int> preds,
                                      std::span<const int> labels,
                                      std::span<const int> sensitive,
                                      double alpha) {
  switch (criterion) {
    case FairnessCriterion::kDemographicParity:
      return UpdateSubgroupWeightsDp(previous, preds, sensitive, alpha);
    case FairnessCriterion::kEqualizedOdds:
      return UpdateSubgroupWeightsEo(previous, preds, labels, sensitive, alpha);
    case FairnessCriterion::kEqualOpportunity:
      return UpdateSubgroupWeightsEop(previous, preds, labels, sensitive, alpha);
  }
  throw Error("update_subgroup_weights: unknown criterion");
}

std::vector<double> ComputeRawSampleWeights(const SubgroupWeights& weights,
                                            const SubgroupStats& stats,
                                            std::span<const double> margins,
                                            std::span<const int> labels,
                                            std::span<const int> sensitive,
                                            double eta,
                                            FairnessCriterion criterion) {
  constexpr const char* kOp = "compute_sample_weights";
  if (!(eta >= 0.0) || !std::isfinite(eta)) {
    throw Error(std::string(kOp) + ": eta must be finite and nonnegative");
  }
  const std::size_t m = labels.size();
  if (margins.size() != m || sensitive.size() != m) {
    throw Error(std::string(kOp) + ": length mismatch");
  }
  if (stats.m != m) throw Error(std::string(kOp) + ": stats describe a different row count");
  for (int y = 0; y < 2; ++y) {
    for (int a = 0; a < 2; ++a) {
      if (!(weights(y, a) > 0.0) || !std::isfinite(weights(y, a))) {
        throw Error(std::string(kOp) + ": subgroup weights must be positive and finite");
      }
    }
  }
  const double total = weights.Sum();

  // Rows of each subgroup and the smallest margin in it.
  std::array<std::array<std::vector<std::size_t>, 2>, 2> members;
  for (std::size_t i = 0; i < m; ++i) {
    const int y = labels[i], a = sensitive[i];
    if ((y != 0 && y != 1) || (a != 0 && a != 1)) {
      throw Error(std::string(kOp) + ": memberships must be 0 or 1");
    }
    members[y][a].push_back(i);
  }

  std::vector<double> w(m, 0.0);
  for (int y = 0; y < 2; ++y) {
    for (int a = 0; a < 2; ++a) {
      const auto& rows = members[y][a];
      if (rows.size() != stats.count(y, a)) {
        throw Error(std::string(kOp) + ": stats disagree with memberships in cell (y=" +
                    std::to_string(y) + ", a=" + std::to_string(a) + ")");
      }
      if (rows.empty()) continue;
      if (criterion == FairnessCriterion::kEqualOpportunity && y == 0) {
        const double flat = 1.0 / (static_cast<double>(m) * total);
        for (std::size_t i : rows) w[i] = flat;
        continue;
      }
      double min_margin = margins[rows.front()];
      for (std::size_t i : rows) min_margin = std::min(min_margin, margins[i]);
      double normalizer = 0.0;
      for (std::size_t i : rows) {
        w[i] = std::exp(-eta * (margins[i] - min_margin));
        normalizer += w[i];
      }
      const double share = weights(y, a) / total * stats.proportion(y, a);
      for (std::size_t i : rows) w[i] = share * (w[i] / normalizer);
    }
  }
  return w;
}

std::vector<double> ComputeSampleWeights(const SubgroupWeights& weights,
                                         const SubgroupStats& stats,
                                         std::span<const double> margins,
                                         std::span<const int> labels,
                                         std::span<const int> sensitive,
                                         double eta, FairnessCriterion criterion) {
  auto w = ComputeRawSampleWeights(weights, stats, margins, labels, sensitive, eta,
                                   criterion);
  double sum = 0.0;
  for (double v : w) sum += v;
  if (!(sum > 0.0) || !std::isfinite(sum)) {
    throw Error("compute_sample_weights: weights do not sum to a positive value");
  }
  for (double& v : w) {
    v /= sum;
    if (!(v > 0.0)) {
      throw Error("compute_sample_weights: a sample weight underflowed to zero "
                  "(eta too large for the margin spread)");
    }
  }
  return w;
}

namespace {

double LossFromScores(const Eigen::VectorXd& scores, std::span<const int> labels,
                      std::span<const double> weights) {
  double total = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double s =
        std::clamp(scores[static_cast<Eigen::Index>(i)], kScoreEpsilon, 1.0 - kScoreEpsilon);
    total += weights[i] * (labels[i] == 1 ? -std::log(s) : -std::log1p(-s));
  }
  return total;
}

}  // namespace

FairTrainResult TrainFair(const Dataset& ds, const ReweighConfig& config,
                          std::uint64_t seed) {
  config.Validate();
  ds.Validate();
  const SubgroupStats stats = ComputeSubgroupStats(ds.labels, ds.sensitive);
  for (int v = 0; v < 2; ++v) {
    if (stats.row_totals[v] == 0) {
      throw Error("train_fair: no training rows with label " + std::to_string(v));
    }
    if (stats.col_totals[v] == 0) {
      throw Error("train_fair: no training rows in sensitive group " + std::to_string(v));
    }
  }
  const std::size_t m = ds.size();

  FairTrainResult result;
  WeightState& state = result.final_state;
  state.sample_weights.assign(m, 1.0 / static_cast<double>(m));
  state.margins.assign(m, 0.0);

  ModelParams params = InitParams(ds.dim(), seed);
  params.feature_names = ds.feature_names;
  Engine rng = ShuffleEngine(seed);

  auto fit_and_record = [&]() -> bool {
    params = TrainWeighted(std::move(params), ds, state.sample_weights, config.inner, rng);
    const Eigen::VectorXd scores = PredictScores(params, ds.features);
    const std::vector<int> preds = PredictLabels(scores, config.d);
    TraceRecord record;
    record.iteration = state.iteration;
    record.subgroup_weights = state.subgroup_weights;
    record.train_report = ComputeFairnessReport(preds, ds.labels, ds.sensitive);
    record.weighted_loss = LossFromScores(scores, ds.labels, state.sample_weights);
    const auto gap = record.train_report.Gap(config.criterion);
    result.trace.push_back(std::move(record));
    // Margins and predictions for the next update come from this fit.
    state.margins = ComputeMargins(
        std::span<const double>(scores.data(), static_cast<std::size_t>(scores.size())),
        config.d);
    const bool stop = config.early_stop_gap && gap && *gap < *config.early_stop_gap;
    if (!stop && state.iteration < config.outer_iterations) {
      state.subgroup_weights =
          UpdateSubgroupWeights(config.criterion, state.subgroup_weights, preds,
                                ds.labels, ds.sensitive, config.alpha);
      state.sample_weights =
          ComputeSampleWeights(state.subgroup_weights, stats, state.margins, ds.labels,
                               ds.sensitive, config.eta, config.criterion);
    }
    return stop;
  };

  bool stop = fit_and_record();
  for (int t = 1; t <= config.outer_iterations && !stop; ++t) {
    state.iteration = t;
    stop = fit_and_record();
  }
  result.params = std::move(params);
  return result;
}

void WriteTraceJsonl(const TrainTrace& trace, std::ostream& out) {
  for (const auto& record : trace) {
    nlohmann::json w;
    for (int y = 0; y < 2; ++y) {
      for (int a = 0; a < 2; ++a) {
        w["y=" + std::to_string(y) + ",a=" + std::to_string(a)] =
            record.subgroup_weights(y, a);
      }
    }
    nlohmann::json line = {{"iteration", record.iteration},
                           {"subgroup_weights", w},
                           {"train", ToJson(record.train_report)},
                           {"weighted_loss", record.weighted_loss}};
    out << line.dump() << '\n';
  }
}

}  // namespace fairweigh
