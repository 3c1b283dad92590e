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

#include "fairweigh/baselines.h"

#include <algorithm>
#include <string>

#include "fairweigh/error.h"
#include "fairweigh/random.h"

namespace fairweigh {
namespace {

ModelParams Fit(const Dataset& ds, std::span<const double> weights,
                const TrainSettings& settings, std::uint64_t seed) {
  ModelParams params = InitParams(ds.dim(), seed);
  params.feature_names = ds.feature_names;
  Engine rng = ShuffleEngine(seed);
  return TrainWeighted(std::move(params), ds, weights, settings, rng);
}

}  // namespace

ModelParams TrainErm(const Dataset& ds, const TrainSettings& settings,
                     std::uint64_t seed) {
  ds.Validate();
  const std::vector<double> uniform(ds.size(), 1.0 / static_cast<double>(ds.size()));
  return Fit(ds, uniform, settings, seed);
}

Dataset CuttingSubsample(const Dataset& ds, std::uint64_t seed) {
  ds.Validate();
  std::array<std::vector<std::size_t>, 2> groups;
  for (std::size_t i = 0; i < ds.size(); ++i) groups[ds.sensitive[i]].push_back(i);
  if (groups[0].empty() || groups[1].empty()) {
    throw Error("cutting: sensitive group " + std::string(groups[0].empty() ? "0" : "1") +
                " is empty");
  }
  const int larger = groups[1].size() > groups[0].size() ? 1 : 0;
  const std::size_t keep = groups[1 - larger].size();
  Engine rng(MixSeed(seed, 2));
  Shuffle(groups[larger], rng);
  groups[larger].resize(keep);

  std::vector<std::size_t> rows = groups[0];
  rows.insert(rows.end(), groups[1].begin(), groups[1].end());
  std::sort(rows.begin(), rows.end());
  return ds.Subset(rows);
}

ModelParams TrainCutting(const Dataset& ds, const TrainSettings& settings,
                         std::uint64_t seed) {
  return TrainErm(CuttingSubsample(ds, seed), settings, seed);
}

SubgroupWeights FixedReweighingSubgroupWeights(const SubgroupStats& stats) {
  SubgroupWeights w;
  const double m = static_cast<double>(stats.m);
  for (int y = 0; y < 2; ++y) {
    for (int a = 0; a < 2; ++a) {
      if (stats.count(y, a) == 0) {
        throw Error("fixed reweighing: empty cell (y=" + std::to_string(y) +
                    ", a=" + std::to_string(a) + ")");
      }
      w(y, a) = static_cast<double>(stats.row_totals[y]) *
                static_cast<double>(stats.col_totals[a]) /
                (m * static_cast<double>(stats.count(y, a)));
    }
  }
  return w;
}

std::vector<double> FixedReweighingWeights(std::span<const int> labels,
                                           std::span<const int> sensitive) {
  const SubgroupStats stats = ComputeSubgroupStats(labels, sensitive);
  const SubgroupWeights cell = FixedReweighingSubgroupWeights(stats);
  std::vector<double> w(labels.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = cell(labels[i], sensitive[i]);
    sum += w[i];
  }
  for (double& v : w) v /= sum;
  return w;
}

ModelParams TrainFixedReweighing(const Dataset& ds, const TrainSettings& settings,
                                 std::uint64_t seed) {
  ds.Validate();
  const auto weights = FixedReweighingWeights(ds.labels, ds.sensitive);
  return Fit(ds, weights, settings, seed);
}

}  // namespace fairweigh
