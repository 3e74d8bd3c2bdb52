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

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "gazesal/common.hpp"

namespace gazesal {

// Display and recording geometry. The eye sits on the normal through the
// screen centre at viewing_distance_mm.
struct ViewingGeometry {
  int screen_width_px = 1920;
  int screen_height_px = 1080;
  double screen_width_mm = 531.0;
  double screen_height_mm = 298.6875;
  double viewing_distance_mm = 600.0;
  double sampling_rate_hz = 500.0;

  double pitch_x_mm() const { return screen_width_mm / screen_width_px; }
  double pitch_y_mm() const { return screen_height_mm / screen_height_px; }
  double sample_interval_ms() const { return 1000.0 / sampling_rate_hz; }

  /// Throws InputError if any field is non-positive or the pixel pitch of
  /// the two axes differs by more than 1%.
  void validate() const;
};

enum class Eye { Left, Right, Cyclopean };

struct GazeSample {
  double timestamp_ms = 0.0;
  Eye eye = Eye::Left;
  double x_px = 0.0;
  double y_px = 0.0;
  double pupil = 0.0;
  bool valid = false;

  /// Usable for event classification: coordinates present and pupil tracked.
  bool tracked() const { return valid && pupil > 0.0; }
};

using GazeTrace = std::vector<GazeSample>;

/// Screen-pixel rectangle the stimulus image was drawn into.
struct ScreenRect {
  double x = 0.0;
  double y = 0.0;
  double width = 0.0;
  double height = 0.0;
};

/// Where a stimulus was shown and how large its image is.
struct StimulusFrame {
  ScreenRect rect;
  ImageSize image;
};

/// Parses the gaze CSV dialect (`timestamp_ms,eye,x_px,y_px,pupil`).
/// Comment lines start with '#'. Blank or "." coordinates mark lost signal.
/// Throws InputError naming the 1-based line on malformed rows or on a
/// timestamp regression within one eye.
GazeTrace parse_gaze_csv(std::istream& in);

/// Writes samples in the same dialect, shortest round-trip number format.
void write_gaze_csv(std::ostream& out, std::span<const GazeSample> samples);

struct EyeTraces {
  GazeTrace left;
  GazeTrace right;
};

EyeTraces split_eyes(std::span<const GazeSample> samples);

/// Samples with onset_ms <= t < offset_ms.
GazeTrace clip_to_window(std::span<const GazeSample> samples, double onset_ms, double offset_ms);

/// Unit direction from the eye to a screen point (x right, y down, z toward screen).
std::array<double, 3> gaze_direction(const ViewingGeometry& geometry, Point2 screen_px);

/// Angle subtended at the eye between rays to two screen points, in degrees.
double visual_angle_deg(const ViewingGeometry& geometry, Point2 p, Point2 q);

/// Per-sample angular speed (deg/s). Central difference over three samples,
/// one-sided at the ends or next to an invalid neighbour. Returns an empty
/// profile when fewer than two tracked samples exist.
std::vector<std::optional<double>> angular_velocity(std::span<const GazeSample> trace,
                                                    const ViewingGeometry& geometry);

Point2 to_stimulus_coords(Point2 screen_px, const StimulusFrame& frame);
Point2 to_screen_coords(Point2 image_px, const StimulusFrame& frame);

}  // namespace gazesal
