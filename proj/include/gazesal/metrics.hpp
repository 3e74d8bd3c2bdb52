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

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gazesal/events.hpp"
#include "gazesal/salmap.hpp"
#include "gazesal/stats.hpp"

namespace gazesal {

/// How a trial's fixation saliency is averaged.
enum class SaliencySampling {
  FixationCentroid,  // one value per fixation, read at its centroid
  Samples,           // every fixation sample, pooled
};

struct FixationSaliency {
  double duration_ms = 0.0;
  double saliency = 0.0;
};

struct TrialMetrics {
  std::string trial_id;
  std::string subject_id;
  Group group = Group::Case;
  std::string stimulus_id;
  std::size_t fixation_count = 0;
  std::optional<double> center_bias;
  std::map<std::string, std::optional<double>> saliency;    // attribute -> mean fixation saliency
  std::map<std::string, std::optional<double>> latency_ms;  // attribute -> latency to salient fixation
  std::map<std::string, std::vector<FixationSaliency>> fixations;
};

struct SubjectSummary {
  std::string subject_id;
  Group group = Group::Case;
  std::map<std::string, double> saliency;
  std::map<std::string, std::size_t> saliency_trials;
  std::optional<double> fixation_count;
  std::size_t fixation_trials = 0;
  std::optional<double> center_bias;
  std::map<std::string, double> latency_ms;
  std::map<std::string, std::size_t> latency_trials;
};

/// Per-fixation saliency values (centroids clamped into the bilinear domain).
std::vector<double> fixation_saliencies(std::span<const FixationEvent> fixations, const SaliencyMap& map);

/// Mean saliency over fixations; nullopt when there are none.
std::optional<double> trial_fixation_saliency(std::span<const FixationEvent> fixations, const SaliencyMap& map,
                                              SaliencySampling mode = SaliencySampling::FixationCentroid);

/// Time from onset to the first fixation whose saliency is >= threshold.
std::optional<double> latency_to_salient_fixation(std::span<const FixationEvent> fixations,
                                                  const SaliencyMap& map, double threshold, double onset_ms);

inline constexpr double kDefaultSalientThreshold = 127.0;

/// Duration-weighted point masses at fixation centroids, Gaussian-smoothed
/// and rescaled to sum 1. All zeros when no fixation lands on the image.
SaliencyMap fixation_density(std::span<const std::vector<FixationEvent>> fixation_sets, ImageSize size,
                             double sigma_px);

stats::PearsonResult duration_saliency_correlation(std::span<const FixationSaliency> pairs);

/// Unweighted means over the trials where each value is present. Returns
/// nullopt (subject excluded) when no trial has any filtered fixation.
std::optional<SubjectSummary> summarize_subject(std::span<const TrialMetrics> trials);

}  // namespace gazesal
