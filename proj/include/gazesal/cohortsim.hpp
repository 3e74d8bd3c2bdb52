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

#include <filesystem>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "gazesal/manifest.hpp"
#include "gazesal/salmap.hpp"

namespace gazesal {

/// Gaze behaviour of one simulated group.
struct SimProfile {
  double bias = 0.5;                 // P(fixation drawn map-proportionally) vs uniformly
  double fixations_per_trial = 3.0;  // mean; count = 1 + Poisson(mean - 1)
  double duration_mu = 5.3;          // log-normal duration parameters, ms
  double duration_sigma = 0.4;
  double jitter_deg = 0.02;          // per-eye, per-axis sample noise
  double min_duration_ms = 100.0;
  double pupil = 1500.0;

  void validate() const;
};

struct CohortSimConfig {
  SimProfile case_profile;
  SimProfile control_profile;
  int subjects_per_group = 30;
  int trials_per_subject = 20;
  int n_stimuli = 4;
  ImageSize stimulus_size{800, 600};
  ScreenRect display_rect{560.0, 240.0, 800.0, 600.0};
  ViewingGeometry geometry;
  double trial_duration_ms = 2000.0;
  double inter_trial_ms = 500.0;
  double saccade_ms = 20.0;
  double min_separation_deg = 1.0;
  std::string attribute = "target";
  std::uint64_t seed = 1;
  std::uint64_t map_seed = 1;

  void validate() const;
};

CohortSimConfig parse_sim_config(const std::string& json_text);
std::string sim_config_to_json(const CohortSimConfig& config);

/// Draws fixation pixels from bias * (map-proportional) + (1 - bias) * uniform.
class FixationPointSampler {
public:
  FixationPointSampler(const SaliencyMap& map, double bias);
  Point2 operator()(std::mt19937_64& rng) const;

private:
  ImageSize size_;
  double bias_;
  std::vector<double> cumulative_;  // running sum of pixel weights
};

std::vector<Point2> sample_fixation_points(const SaliencyMap& map, double bias, std::size_t n,
                                           std::mt19937_64& rng);

/// Binocular 500 Hz-style trace (sample interval from geometry): stationary
/// jittered segments joined by linear ramps of saccade_ms. Ramps are omitted
/// after the last point. Samples are interleaved L, R per timestamp.
GazeTrace synthesize_trace(std::span<const Point2> points, std::span<const double> durations_ms,
                           const ViewingGeometry& geometry, const StimulusFrame& frame, const SimProfile& profile,
                           double onset_ms, double saccade_ms, std::mt19937_64& rng);

/// Procedural nonuniform 8-bit map: a few Gaussian blobs on a dim floor.
SaliencyMap synthetic_stimulus_map(ImageSize size, std::uint64_t seed);

struct PlantedFixation {
  Point2 point;
  double start_ms = 0.0;
  double duration_ms = 0.0;
};

struct SimulatedCohort {
  Cohort cohort;
  std::map<std::string, std::vector<PlantedFixation>> planted;  // trial id -> truth
};

/// Stimulus maps shared by cohorts: raw (as written to disk) and the
/// prepared version used to draw biased fixations.
struct SimStimuli {
  std::vector<std::string> ids;
  std::vector<SaliencyMap> raw;
  std::vector<SaliencyMap> prepared;
};

SimStimuli make_sim_stimuli(const CohortSimConfig& config);

SimulatedCohort simulate_cohort(const CohortSimConfig& config);
SimulatedCohort simulate_cohort(const CohortSimConfig& config, const SimStimuli& stimuli);

/// Writes manifest.json, gaze/<subject>.csv and maps/<stimulus>.<attribute>.pgm
/// under out_dir. Returns the manifest path.
std::filesystem::path generate_cohort(const CohortSimConfig& config, const std::filesystem::path& out_dir);
std::filesystem::path write_cohort(const Cohort& cohort, const std::filesystem::path& out_dir);

}  // namespace gazesal
