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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gazesal/ingest.hpp"

namespace gazesal {

/// Thresholds for event classification and fixation filtering.
struct DetectionConfig {
  double fixation_dispersion_deg = 0.1;  // max pairwise visual angle within a fixation
  double fixation_min_ms = 100.0;
  double saccade_velocity_deg_s = 30.0;
  double saccade_min_amplitude_deg = 0.1;
  double fixation_keep_min_ms = 50.0;
  double oob_discard_fraction = 0.20;
  double blink_pad_ms = 50.0;

  void validate() const;
};

struct FixationEvent {
  double start_ms = 0.0;
  double end_ms = 0.0;  // exclusive: last sample time + one sample interval
  Point2 centroid;      // stimulus image pixels
  Point2 screen_centroid;
  double dispersion_deg = 0.0;
  std::size_t first_sample = 0;
  std::size_t last_sample = 0;  // inclusive
  std::vector<Point2> image_samples;
  double oob_fraction = 0.0;

  double duration_ms() const { return end_ms - start_ms; }
};

struct SaccadeEvent {
  double start_ms = 0.0;
  double end_ms = 0.0;
  double amplitude_deg = 0.0;
  double peak_velocity_deg_s = 0.0;
  std::size_t first_sample = 0;
  std::size_t last_sample = 0;
};

struct BlinkEvent {
  double start_ms = 0.0;
  double end_ms = 0.0;
};

struct EventSet {
  std::vector<FixationEvent> fixations;
  std::vector<SaccadeEvent> saccades;
};

/// Runs of untracked samples (invalid or pupil 0), padded by blink_pad_ms on
/// both sides, merged when padded intervals overlap, and clipped to the
/// window when one is given.
std::vector<BlinkEvent> detect_blinks(std::span<const GazeSample> trace, const DetectionConfig& config,
                                      std::optional<std::pair<double, double>> window = std::nullopt);

/// Copy of the trace with every sample inside a blink interval marked invalid.
GazeTrace excise_blinks(std::span<const GazeSample> trace, std::span<const BlinkEvent> blinks);

/// Hybrid dispersion/velocity classification. A fixation is a maximal run of
/// contiguous tracked samples, each below the saccade velocity, whose largest
/// pairwise visual angle stays within fixation_dispersion_deg, lasting at
/// least fixation_min_ms. Saccades are maximal runs of supra-threshold
/// velocity outside fixations with sufficient net amplitude. Without a frame
/// the screen itself is the image.
EventSet detect_events(std::span<const GazeSample> trace, const ViewingGeometry& geometry,
                       const DetectionConfig& config,
                       const std::optional<StimulusFrame>& frame = std::nullopt);

/// Drops fixations shorter than fixation_keep_min_ms and those with an
/// off-image sample fraction of at least oob_discard_fraction.
std::vector<FixationEvent> filter_fixations(std::span<const FixationEvent> fixations, ImageSize image,
                                            const DetectionConfig& config);

/// Per-timestamp mean of the two eyes when both are tracked, the single
/// tracked eye otherwise. Throws InputError on mismatched timestamp grids.
/// An empty trace on one side passes the other through.
GazeTrace binocular_average(std::span<const GazeSample> left, std::span<const GazeSample> right);

/// Debug dump: one JSON object per event.
std::string events_to_json(const EventSet& events, std::span<const BlinkEvent> blinks);

}  // namespace gazesal
