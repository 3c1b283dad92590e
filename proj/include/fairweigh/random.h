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

#ifndef FAIRWEIGH_RANDOM_H_
#define FAIRWEIGH_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace fairweigh {

// std::mt19937_64 output is fixed by the standard. Distributions come from
// Boost.Random, whose algorithms do not vary between standard libraries, so
// every seeded result in this project is reproducible across toolchains.
using Engine = std::mt19937_64;

// Uniform integer in [lo, hi].
std::size_t UniformIndex(Engine& rng, std::size_t lo, std::size_t hi);

// In-place Fisher-Yates shuffle.
void Shuffle(std::vector<std::size_t>& values, Engine& rng);

// A shuffled 0..n-1.
std::vector<std::size_t> Permutation(std::size_t n, Engine& rng);

// Derives an independent-looking stream seed from a base seed and a salt.
std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t salt);

}  // namespace fairweigh

#endif  // FAIRWEIGH_RANDOM_H_
