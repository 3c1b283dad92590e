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

#include "fairweigh/experiment.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <thread>
#include <tuple>

#include "fairweigh/baselines.h"
#include "fairweigh/error.h"
#include "fairweigh/random.h"

namespace fairweigh {
namespace {

// Runs fn(0..n-1) on up to `threads` workers. The first failure by index is
// rethrown after every job has finished.
void ParallelFor(std::size_t n, int threads,
                 const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(n);
  auto guarded = [&](std::size_t i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) guarded(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) guarded(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct Evaluation {
  ModelParams model;
  FairnessReport train;
  FairnessReport test;
  std::optional<TrainTrace> trace;
};

// Standardizes, fits the configured method on `train_raw` and scores both
// sides. Every method predicts with threshold reweigh.d.
Evaluation FitAndEvaluate(const ExperimentConfig& config,
                          const ReweighConfig& reweigh, const Dataset& train_raw,
                          const Dataset& test_raw, std::uint64_t seed,
                          const RunOptions& options) {
  if (options.on_evaluate) {
    options.on_evaluate(train_raw.row_ids);
    options.on_evaluate(test_raw.row_ids);
  }
  const auto [train, test] = Standardize(train_raw, test_raw);
  Evaluation out;
  switch (config.method) {
    case Method::kErm:
      out.model = TrainErm(train, config.train, seed);
      break;
    case Method::kCutting:
      out.model = TrainCutting(train, config.train, seed);
      break;
    case Method::kFixedReweigh:
      out.model = TrainFixedReweighing(train, config.train, seed);
      break;
    case Method::kAdaptive: {
      FairTrainResult fit = TrainFair(train, reweigh, seed);
      out.model = std::move(fit.params);
      if (options.keep_traces) out.trace = std::move(fit.trace);
      break;
    }
  }
  auto report = [&](const Dataset& ds) {
    const auto preds = PredictLabels(PredictScores(out.model, ds.features), reweigh.d);
    return ComputeFairnessReport(preds, ds.labels, ds.sensitive);
  };
  out.train = report(train);
  out.test = report(test);
  return out;
}

std::optional<double> Mean(const std::vector<double>& xs) {
  if (xs.empty()) return std::nullopt;
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

std::optional<double> SampleStd(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return std::nullopt;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

// Values of `metric` across replications, or empty if any is absent.
std::vector<double> Collect(std::span<const ReplicationResult> reps, Metric metric,
                            bool test) {
  std::vector<double> out;
  for (const auto& r : reps) {
    const auto v = MetricValue(test ? r.test : r.train, metric);
    if (!v) return {};
    out.push_back(*v);
  }
  return out;
}

bool AllCellsPresent(const Dataset& ds) {
  const auto stats = ComputeSubgroupStats(ds.labels, ds.sensitive);
  for (int y = 0; y < 2; ++y) {
    for (int a = 0; a < 2; ++a) {
      if (stats.counts[y][a] == 0) return false;
    }
  }
  return true;
}

}  // namespace

std::string_view ToString(Metric metric) {
  switch (metric) {
    case Metric::kAccuracy: return "accuracy";
    case Metric::kDeltaDp: return "delta_dp";
    case Metric::kDeltaEo: return "delta_eo";
    case Metric::kDeltaEop: return "delta_eop";
  }
  return "?";
}

Metric MetricFor(FairnessCriterion criterion) {
  switch (criterion) {
    case FairnessCriterion::kDemographicParity: return Metric::kDeltaDp;
    case FairnessCriterion::kEqualizedOdds: return Metric::kDeltaEo;
    case FairnessCriterion::kEqualOpportunity: return Metric::kDeltaEop;
  }
  return Metric::kDeltaDp;
}

std::optional<double> MetricValue(const FairnessReport& report, Metric metric) {
  switch (metric) {
    case Metric::kAccuracy: return report.accuracy;
    case Metric::kDeltaDp: return report.delta_dp;
    case Metric::kDeltaEo: return report.delta_eo;
    case Metric::kDeltaEop: return report.delta_eop;
  }
  return std::nullopt;
}

std::optional<double> ReplicationResult::Gap(Metric metric) const {
  const auto tr = MetricValue(train, metric), te = MetricValue(test, metric);
  if (!tr || !te) return std::nullopt;
  return *te - *tr;
}

std::array<MetricSummary, 4> Summarize(
    std::span<const ReplicationResult> replications) {
  std::array<MetricSummary, 4> out;
  for (Metric metric : kMetrics) {
    auto& s = out[static_cast<std::size_t>(metric)];
    const auto train = Collect(replications, metric, false);
    const auto test = Collect(replications, metric, true);
    if ((s.train_mean = Mean(train))) s.train_std = SampleStd(train, *s.train_mean);
    if ((s.test_mean = Mean(test))) s.test_std = SampleStd(test, *s.test_mean);
    if (s.train_mean && s.test_mean) s.gap = *s.test_mean - *s.train_mean;
  }
  return out;
}

Dataset LoadExperimentData(const ExperimentConfig& config, LoadReport* report) {
  if (config.source == DataSource::kCsv) {
    return LoadCsv(config.csv_path, config.schema, report);
  }
  return GenerateSynthetic(config.synthetic.n, config.synthetic.bias,
                           config.synthetic.seed, config.synthetic.include_sensitive);
}

ResultRecord RunExperiment(const ExperimentConfig& config, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  config.Validate();
  LoadReport load;
  const Dataset data = LoadExperimentData(config, &load);
  ResultRecord record = RunExperiment(config, data, options);
  if (config.source == DataSource::kCsv) record.load_report = load;
  record.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return record;
}

ResultRecord RunExperiment(const ExperimentConfig& config, const Dataset& data,
                           const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  config.Validate();
  const ReweighConfig reweigh = EffectiveReweighConfig(config);
  ResultRecord record;
  record.config = config;
  record.config_text = ToText(config);
  record.replications.resize(static_cast<std::size_t>(config.replications));
  ParallelFor(record.replications.size(), options.threads, [&](std::size_t r) {
    ReplicationResult& rep = record.replications[r];
    rep.index = static_cast<int>(r);
    rep.split_seed = config.split_seed + r;
    rep.model_seed = config.seed + r;
    try {
      const auto [train, test] = Split(data, config.test_fraction, rep.split_seed);
      rep.train_size = train.size();
      rep.test_size = test.size();
      Evaluation eval =
          FitAndEvaluate(config, reweigh, train, test, rep.model_seed, options);
      rep.model = std::move(eval.model);
      rep.train = std::move(eval.train);
      rep.test = std::move(eval.test);
      rep.trace = std::move(eval.trace);
    } catch (const std::exception& e) {
      throw Error("replication " + std::to_string(r) + " (split seed " +
                  std::to_string(rep.split_seed) + ", model seed " +
                  std::to_string(rep.model_seed) + "): " + e.what());
    }
  });
  record.summary = Summarize(record.replications);
  record.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return record;
}

std::size_t SelectGridPoint(std::span<const GridPoint> points, double tolerance) {
  std::optional<double> best_gap;
  for (const auto& p : points) {
    if (p.error.empty() && p.validation_gap &&
        (!best_gap || *p.validation_gap < *best_gap)) {
      best_gap = p.validation_gap;
    }
  }
  if (!best_gap) throw Error("grid search: no grid point produced a validation gap");
  std::optional<std::size_t> chosen;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (!p.error.empty() || !p.validation_gap || !p.validation_accuracy) continue;
    if (*p.validation_gap > *best_gap + tolerance) continue;
    if (!chosen) {
      chosen = i;
      continue;
    }
    const auto& c = points[*chosen];
    const auto key = [](const GridPoint& g) {
      return std::tuple(-*g.validation_accuracy, g.alpha, g.eta);
    };
    if (key(p) < key(c)) chosen = i;
  }
  return *chosen;
}

GridResult GridSearch(const ExperimentConfig& config, std::span<const double> alphas,
                      std::span<const double> etas, int folds,
                      const RunOptions& options) {
  config.Validate();
  LoadReport load;
  const Dataset data = LoadExperimentData(config, &load);
  return GridSearch(config, data, alphas, etas, folds, options);
}

GridResult GridSearch(const ExperimentConfig& config, const Dataset& data,
                      std::span<const double> alphas, std::span<const double> etas,
                      int folds, const RunOptions& options) {
  if (alphas.empty() || etas.empty()) throw Error("grid search: empty alpha or eta grid");
  if (folds < 2) throw Error("grid search: folds must be at least 2");
  if (config.method != Method::kAdaptive) {
    throw Error("grid search: method must be adaptive");
  }
  config.Validate();

  // Only the training split is used below; the test split goes out of scope.
  const Dataset train = Split(data, config.test_fraction, config.split_seed).first;
  const std::size_t n = train.size();
  if (n < static_cast<std::size_t>(folds)) {
    throw Error("grid search: fewer training rows than folds");
  }
  Engine rng(MixSeed(config.split_seed, 3));
  const auto perm = Permutation(n, rng);

  struct Fold {
    int index;
    Dataset fit;
    Dataset validation;
  };
  GridResult result;
  std::vector<Fold> usable;
  for (int k = 0; k < folds; ++k) {
    const std::size_t lo = n * static_cast<std::size_t>(k) / folds;
    const std::size_t hi = n * static_cast<std::size_t>(k + 1) / folds;
    std::vector<std::size_t> val(perm.begin() + lo, perm.begin() + hi);
    std::vector<std::size_t> fit(perm.begin(), perm.begin() + lo);
    fit.insert(fit.end(), perm.begin() + hi, perm.end());
    std::sort(val.begin(), val.end());
    std::sort(fit.begin(), fit.end());
    Fold fold{k, train.Subset(fit), train.Subset(val)};
    if (AllCellsPresent(fold.fit) && AllCellsPresent(fold.validation)) {
      usable.push_back(std::move(fold));
    } else {
      result.skipped_folds.push_back(k);
    }
  }
  if (usable.size() < 2) {
    throw Error("grid search: only " + std::to_string(usable.size()) + " of " +
                std::to_string(folds) +
                " folds have every (y, a) cell populated; need at least 2");
  }

  for (double alpha : alphas) {
    for (double eta : etas) {
      GridPoint p;
      p.alpha = alpha;
      p.eta = eta;
      p.record.config = config;
      p.record.config.reweigh.alpha = alpha;
      p.record.config.reweigh.eta = eta;
      p.record.config.replications = static_cast<int>(usable.size());
      p.record.config_text = ToText(p.record.config);
      p.record.replications.resize(usable.size());
      result.points.push_back(std::move(p));
    }
  }

  const std::size_t jobs = result.points.size() * usable.size();
  std::vector<std::string> errors(jobs);
  std::vector<double> seconds(jobs, 0.0);
  ParallelFor(jobs, options.threads, [&](std::size_t job) {
    GridPoint& p = result.points[job / usable.size()];
    const Fold& fold = usable[job % usable.size()];
    ReplicationResult& rep = p.record.replications[job % usable.size()];
    rep.index = fold.index;
    rep.split_seed = config.split_seed;
    rep.model_seed = config.seed;
    rep.train_size = fold.fit.size();
    rep.test_size = fold.validation.size();
    const auto start = std::chrono::steady_clock::now();
    try {
      Evaluation eval = FitAndEvaluate(p.record.config,
                                       EffectiveReweighConfig(p.record.config),
                                       fold.fit, fold.validation, config.seed, options);
      rep.model = std::move(eval.model);
      rep.train = std::move(eval.train);
      rep.test = std::move(eval.test);
    } catch (const std::exception& e) {
      errors[job] = "fold " + std::to_string(fold.index) + ": " + e.what();
    }
    seconds[job] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });

  const Metric gap_metric = MetricFor(config.reweigh.criterion);
  for (std::size_t i = 0; i < result.points.size(); ++i) {
    GridPoint& p = result.points[i];
    for (std::size_t f = 0; f < usable.size(); ++f) {
      const std::size_t job = i * usable.size() + f;
      p.record.wall_seconds += seconds[job];
      if (!errors[job].empty() && p.error.empty()) p.error = errors[job];
    }
    if (!p.error.empty()) continue;
    p.record.summary = Summarize(p.record.replications);
    p.validation_gap = p.record.Summary(gap_metric).test_mean;
    p.validation_accuracy = p.record.Summary(Metric::kAccuracy).test_mean;
  }
  result.best_index = SelectGridPoint(result.points, config.grid.tolerance);
  result.best = EffectiveReweighConfig(result.points[result.best_index].record.config);
  return result;
}

}  // namespace fairweigh
