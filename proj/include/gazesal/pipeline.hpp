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
#include <string>
#include <vector>

#include "gazesal/events.hpp"
#include "gazesal/manifest.hpp"
#include "gazesal/metrics.hpp"
#include "gazesal/stats.hpp"

namespace gazesal {

enum class Granularity { Subject, Trial };

std::string to_string(Granularity g);
Granularity parse_granularity(const std::string& s);

struct AnalysisConfig {
  DetectionConfig detection;
  Granularity granularity = Granularity::Subject;
  std::vector<std::string> attributes;  // empty: every manifest attribute
  std::uint64_t seed = 1;
  std::size_t n_perm = 4999;
  SaliencySampling sampling = SaliencySampling::FixationCentroid;
  double latency_threshold = kDefaultSalientThreshold;
  std::optional<double> center_prior_sigma_px;
  std::optional<double> density_sigma_px;
  int jobs = 0;  // OpenMP threads; 0 keeps the runtime default
  bool keep_events = false;
  bool densities = true;
};

/// Prepared (smoothed, normalized, combined) maps for one cohort.
struct PreparedMaps {
  std::map<std::string, SaliencyMap> attribute;  // map_key(stimulus, attribute name)
  std::map<std::string, SaliencyMap> center;     // stimulus id -> center prior
};

PreparedMaps prepare_maps(const Cohort& cohort, const AnalysisConfig& config);

struct TrialEvents {
  std::vector<BlinkEvent> blinks;
  EventSet detected;
  std::vector<FixationEvent> kept;
};

/// One trial end to end: window clip, binocular average, blink excision,
/// event detection, filtering, metrics.
TrialMetrics analyze_trial(const TrialEntry& trial, const Cohort& cohort, const PreparedMaps& maps,
                           const AnalysisConfig& config, TrialEvents* events_out = nullptr);

struct CorrelationRow {
  Group group = Group::Case;
  std::string attribute;
  std::size_t n = 0;
  std::optional<double> r;
  std::optional<double> p;
};

struct DensityResult {
  std::string stimulus_id;
  Group group = Group::Case;
  std::size_t n_fixations = 0;
  SaliencyMap density;
};

struct AnalysisResult {
  std::vector<TrialMetrics> trials;  // ordered by subject id, then trial id
  std::vector<TrialEvents> events;   // parallel to trials when keep_events
  std::vector<SubjectSummary> subjects;
  std::vector<std::string> selected_attributes;
  std::vector<stats::GroupComparison> comparisons;
  std::vector<CorrelationRow> correlations;
  std::vector<DensityResult> densities;
  std::vector<std::string> warnings;
};

/// Full analysis. Throws DegenerateError when a group has no subject (or,
/// at trial granularity, no trial) with surviving fixations.
AnalysisResult analyze(const Cohort& cohort, const AnalysisConfig& config);
AnalysisResult analyze(const Cohort& cohort, const AnalysisConfig& config, const PreparedMaps& maps);

/// Names of the comparison rows, in report order.
std::vector<std::string> comparison_metric_names(const std::vector<std::string>& attributes);

}  // namespace gazesal
