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

#include "fairweigh/random.h"

#include <numeric>

#include <boost/random/uniform_int_distribution.hpp>

namespace fairweigh {

std::size_t UniformIndex(Engine& rng, std::size_t lo, std::size_t hi) {
  boost::random::uniform_int_distribution<std::size_t> dist(lo, hi);
  return dist(rng);
}

void Shuffle(std::vector<std::size_t>& values, Engine& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::size_t j = UniformIndex(rng, 0, i - 1);
    std::swap(values[i - 1], values[j]);
  }
}

std::vector<std::size_t> Permutation(std::size_t n, Engine& rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Shuffle(order, rng);
  return order;
}

std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t salt) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace fairweigh
