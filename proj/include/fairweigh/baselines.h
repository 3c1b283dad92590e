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

// Reference trainers: unweighted ERM, group-size cutting, and one-shot
// expected/observed reweighing on true labels. All three start from
// InitParams(dim, seed) and shuffle with ShuffleEngine(seed), the same
// streams TrainFair uses, so runs with equal seeds are comparable.

#ifndef FAIRWEIGH_BASELINES_H_
#define FAIRWEIGH_BASELINES_H_

#include <cstdint>
#include <span>
#include <vector>

#include "fairweigh/classifier.h"
#include "fairweigh/dataset.h"
#include "fairweigh/reweigher.h"

namespace fairweigh {

// TrainWeighted with w_i = 1/m.
ModelParams TrainErm(const Dataset& ds, const TrainSettings& settings,
                     std::uint64_t seed);

// Keeps every row of the smaller sensitive group and a seeded uniform
// sample of equal size from the larger one, in original row order.
Dataset CuttingSubsample(const Dataset& ds, std::uint64_t seed);

ModelParams TrainCutting(const Dataset& ds, const TrainSettings& settings,
                         std::uint64_t seed);

// W[y][a] = m[y][*] * m[*][a] / (m * m[y][a]). Throws on an empty cell.
SubgroupWeights FixedReweighingSubgroupWeights(const SubgroupStats& stats);

// Each row gets its cell's W, rescaled so the vector sums to 1.
std::vector<double> FixedReweighingWeights(std::span<const int> labels,
                                           std::span<const int> sensitive);

ModelParams TrainFixedReweighing(const Dataset& ds, const TrainSettings& settings,
                                 std::uint64_t seed);

}  // namespace fairweigh

#endif  // FAIRWEIGH_BASELINES_H_
