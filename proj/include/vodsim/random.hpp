// Copyright 2026 The vodsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace vodsim {

// Every stochastic component draws from this engine. std::mt19937_64 has a
// fully specified output sequence, unlike the standard distributions, so the
// helpers below map raw words to values by hand to keep runs bit-identical
// across standard library implementations.
using Rng = std::mt19937_64;

/// Uniform double in [0, 1) built from the top 53 bits of one engine word.
template <class URBG>
double uniform01(URBG& rng) {
  static_assert(URBG::min() == 0 &&
                URBG::max() == std::numeric_limits<std::uint64_t>::max());
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Unbiased integer in [0, bound) by rejection. bound must be positive.
template <class URBG>
std::uint64_t uniform_index(URBG& rng, std::uint64_t bound) {
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t word = rng();
  while (word >= limit) word = rng();
  return word % bound;
}

/// Poisson variate by inversion of the cumulative sum. Intended for the
/// small per-tick means used by the arrival process.
template <class URBG>
std::uint64_t poisson(URBG& rng, double mean) {
  if (mean <= 0.0) return 0;
  // Split large means so exp(-mean) never underflows.
  std::uint64_t total = 0;
  while (mean > 500.0) {
    total += poisson(rng, 500.0);
    mean -= 500.0;
  }
  const double u = uniform01(rng);
  double p = std::exp(-mean);
  double cdf = p;
  std::uint64_t k = 0;
  while (u >= cdf && k < 100000) {
    ++k;
    p *= mean / static_cast<double>(k);
    cdf += p;
  }
  return total + k;
}

}  // namespace vodsim
