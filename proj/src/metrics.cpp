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

#include "gazesal/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gazesal {

namespace {

Point2 clamp_to_map(Point2 p, const SaliencyMap& map) {
  return {std::clamp(p.x, 0.0, static_cast<double>(map.width() - 1)),
          std::clamp(p.y, 0.0, static_cast<double>(map.height() - 1))};
}

bool on_image(Point2 p, ImageSize s) { return p.x >= 0.0 && p.x < s.width && p.y >= 0.0 && p.y < s.height; }

}  // namespace

std::vector<double> fixation_saliencies(std::span<const FixationEvent> fixations, const SaliencyMap& map) {
  std::vector<double> out;
  out.reserve(fixations.size());
  for (const auto& fx : fixations) out.push_back(sample_saliency(map, clamp_to_map(fx.centroid, map)));
  return out;
}

std::optional<double> trial_fixation_saliency(std::span<const FixationEvent> fixations, const SaliencyMap& map,
                                              SaliencySampling mode) {
  if (fixations.empty()) return std::nullopt;
  if (mode == SaliencySampling::FixationCentroid) {
    const auto values = fixation_saliencies(fixations, map);
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  }
  double total = 0.0;
  std::size_t n = 0;
  for (const auto& fx : fixations) {
    for (const auto& p : fx.image_samples) {
      if (!on_image(p, map.size())) continue;
      total += sample_saliency(map, clamp_to_map(p, map));
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return total / static_cast<double>(n);
}

std::optional<double> latency_to_salient_fixation(std::span<const FixationEvent> fixations,
                                                  const SaliencyMap& map, double threshold, double onset_ms) {
  for (const auto& fx : fixations) {
    if (sample_saliency(map, clamp_to_map(fx.centroid, map)) >= threshold) return fx.start_ms - onset_ms;
  }
  return std::nullopt;
}

SaliencyMap fixation_density(std::span<const std::vector<FixationEvent>> fixation_sets, ImageSize size,
                             double sigma_px) {
  SaliencyMap mass(size.width, size.height, MapKind::Raw);
  double total = 0.0;
  for (const auto& set : fixation_sets) {
    for (const auto& fx : set) {
      const long x = std::lround(fx.centroid.x);
      const long y = std::lround(fx.centroid.y);
      if (x < 0 || y < 0 || x >= size.width || y >= size.height) continue;
      mass.at(static_cast<int>(x), static_cast<int>(y)) += fx.duration_ms();
      total += fx.duration_ms();
    }
  }
  if (!(total > 0.0)) return mass;
  SaliencyMap density = gaussian_smooth(mass, sigma_px);
  auto v = density.values();
  const double sum = std::accumulate(v.begin(), v.end(), 0.0);
  for (auto& x : v) x /= sum;
  density.set_provenance("fixation density");
  return density;
}

stats::PearsonResult duration_saliency_correlation(std::span<const FixationSaliency> pairs) {
  std::vector<double> d, s;
  d.reserve(pairs.size());
  s.reserve(pairs.size());
  for (const auto& p : pairs) {
    d.push_back(p.duration_ms);
    s.push_back(p.saliency);
  }
  return stats::pearson(d, s);
}

std::optional<SubjectSummary> summarize_subject(std::span<const TrialMetrics> trials) {
  if (trials.empty()) return std::nullopt;
  SubjectSummary out;
  out.subject_id = trials.front().subject_id;
  out.group = trials.front().group;

  double fix_total = 0.0;
  double center_total = 0.0;
  std::size_t center_n = 0;
  for (const auto& t : trials) {
    if (t.fixation_count == 0) continue;
    fix_total += static_cast<double>(t.fixation_count);
    ++out.fixation_trials;
    if (t.center_bias) {
      center_total += *t.center_bias;
      ++center_n;
    }
    for (const auto& [attr, value] : t.saliency) {
      if (!value) continue;
      out.saliency[attr] += *value;
      ++out.saliency_trials[attr];
    }
    for (const auto& [attr, value] : t.latency_ms) {
      if (!value) continue;
      out.latency_ms[attr] += *value;
      ++out.latency_trials[attr];
    }
  }
  if (out.fixation_trials == 0) return std::nullopt;
  out.fixation_count = fix_total / static_cast<double>(out.fixation_trials);
  if (center_n > 0) out.center_bias = center_total / static_cast<double>(center_n);
  for (auto& [attr, sum] : out.saliency) sum /= static_cast<double>(out.saliency_trials[attr]);
  for (auto& [attr, sum] : out.latency_ms) sum /= static_cast<double>(out.latency_trials[attr]);
  return out;
}

}  // namespace gazesal
