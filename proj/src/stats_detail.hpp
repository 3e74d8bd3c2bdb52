/* Copyright 2026 The gazesal Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include "gazesal/common.hpp"

namespace gazesal::stats::detail {

inline double two_sided_from_tails(double le, double ge, double total) {
  return std::min(1.0, (2.0 * std::min(le, ge)) / total);
}

// |mean_a - mean_b| given the sum of the values labelled a.
struct MeanGap {
  MeanGap(std::size_t n_a, std::size_t n_b, std::span<const double> pooled)
      : na(static_cast<double>(n_a)), nb(static_cast<double>(n_b)),
        total(std::accumulate(pooled.begin(), pooled.end(), 0.0)) {}

  double operator()(double sum_a) const { return std::abs(sum_a / na - (total - sum_a) / nb); }

  double na;
  double nb;
  double total;
};

// Permuted statistics equal to the observed one up to summation-order
// rounding count as ties.
inline bool at_least(double permuted, double observed) {
  return permuted >= observed - 1e-12 * std::max(1.0, std::abs(observed));
}

// Sum of the values that permutation `index` assigns to group a. Partial
// Fisher-Yates over a copy of the pooled data, driven by an engine seeded
// from (seed, index) only.
inline double permuted_sum_a(std::span<const double> pooled, std::size_t n_a, std::uint64_t seed,
                             std::uint64_t index, std::vector<double>& buffer) {
  std::copy(pooled.begin(), pooled.end(), buffer.begin());
  std::mt19937_64 rng(substream_seed(seed, index));
  const std::size_t n = buffer.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < n_a; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(buffer[i], buffer[pick(rng)]);
    sum += buffer[i];
  }
  return sum;
}

}  // namespace gazesal::stats::detail
