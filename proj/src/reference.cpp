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

#include "gazesal/reference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "stats_detail.hpp"

namespace gazesal::reference {

SaliencyMap gaussian_smooth_serial(const SaliencyMap& map, double sigma_px) {
  if (sigma_px < 0.0) throw std::invalid_argument("smoothing sigma must be non-negative");
  if (sigma_px == 0.0) return map;
  const auto taps = gaussian_kernel(sigma_px);
  const int radius = static_cast<int>(taps.size() / 2);
  const int w = map.width();
  const int h = map.height();

  SaliencyMap tmp(w, h, map.kind());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) acc += taps[k + radius] * map.at(reflect_index(x + k, w), y);
      tmp.at(x, y) = acc;
    }
  }
  SaliencyMap out = map;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) acc += taps[k + radius] * tmp.at(x, reflect_index(y + k, h));
      out.at(x, y) = acc;
    }
  }
  return out;
}

double permutation_test_serial(std::span<const double> a, std::span<const double> b,
                               const stats::PermutationConfig& config) {
  if (a.empty() || b.empty()) throw std::invalid_argument("permutation test: empty sample");
  if (config.n_perm < 1) throw std::invalid_argument("permutation test: n_perm must be >= 1");
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const stats::detail::MeanGap gap(a.size(), b.size(), pooled);
  const double observed = gap(std::accumulate(a.begin(), a.end(), 0.0));
  std::vector<double> buffer(pooled.size());
  std::size_t hits = 0;
  for (std::size_t k = 0; k < config.n_perm; ++k) {
    const double s = stats::detail::permuted_sum_a(pooled, a.size(), config.seed, k, buffer);
    if (stats::detail::at_least(gap(s), observed)) ++hits;
  }
  return static_cast<double>(hits + 1) / static_cast<double>(config.n_perm + 1);
}

std::vector<TrialMetrics> analyze_trials_serial(const Cohort& cohort, const AnalysisConfig& config,
                                                const PreparedMaps& maps) {
  std::vector<const TrialEntry*> trials;
  for (const auto& t : cohort.manifest.trials) trials.push_back(&t);
  std::stable_sort(trials.begin(), trials.end(), [](const TrialEntry* a, const TrialEntry* b) {
    return std::tie(a->subject_id, a->trial_id) < std::tie(b->subject_id, b->trial_id);
  });
  std::vector<TrialMetrics> out;
  out.reserve(trials.size());
  for (const auto* t : trials) out.push_back(analyze_trial(*t, cohort, maps, config));
  return out;
}

}  // namespace gazesal::reference
