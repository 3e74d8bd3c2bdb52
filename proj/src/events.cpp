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

#include "gazesal/events.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace gazesal {

void DetectionConfig::validate() const {
  if (fixation_dispersion_deg <= 0.0 || fixation_min_ms <= 0.0 || saccade_velocity_deg_s <= 0.0 ||
      saccade_min_amplitude_deg <= 0.0 || fixation_keep_min_ms <= 0.0 || oob_discard_fraction <= 0.0 ||
      blink_pad_ms < 0.0) {
    throw InputError("detection config: thresholds must be positive");
  }
}

namespace {

constexpr double kTimeEps = 1e-9;

bool contiguous(const GazeSample& a, const GazeSample& b, double interval_ms) {
  return b.timestamp_ms - a.timestamp_ms <= 1.5 * interval_ms;
}

double chord2(const std::array<double, 3>& u, const std::array<double, 3>& v) {
  const double dx = u[0] - v[0];
  const double dy = u[1] - v[1];
  const double dz = u[2] - v[2];
  return dx * dx + dy * dy + dz * dz;
}

double chord2_to_deg(double c2) { return 2.0 * std::asin(std::min(1.0, 0.5 * std::sqrt(c2))) * (180.0 / M_PI); }

bool outside(Point2 p, ImageSize img) {
  return !(p.x >= 0.0 && p.x < img.width && p.y >= 0.0 && p.y < img.height);
}

double oob_fraction_of(std::span<const Point2> pts, ImageSize img) {
  if (pts.empty()) return 0.0;
  std::size_t n = 0;
  for (const auto& p : pts) n += outside(p, img) ? 1 : 0;
  return static_cast<double>(n) / static_cast<double>(pts.size());
}

}  // namespace

std::vector<BlinkEvent> detect_blinks(std::span<const GazeSample> trace, const DetectionConfig& config,
                                      std::optional<std::pair<double, double>> window) {
  std::vector<BlinkEvent> blinks;
  std::size_t i = 0;
  while (i < trace.size()) {
    if (trace[i].tracked()) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < trace.size() && !trace[j + 1].tracked()) ++j;
    BlinkEvent b{trace[i].timestamp_ms - config.blink_pad_ms, trace[j].timestamp_ms + config.blink_pad_ms};
    if (window) {
      b.start_ms = std::max(b.start_ms, window->first);
      b.end_ms = std::min(b.end_ms, window->second);
    }
    if (!blinks.empty() && b.start_ms <= blinks.back().end_ms) {
      blinks.back().end_ms = std::max(blinks.back().end_ms, b.end_ms);
    } else {
      blinks.push_back(b);
    }
    i = j + 1;
  }
  return blinks;
}

GazeTrace excise_blinks(std::span<const GazeSample> trace, std::span<const BlinkEvent> blinks) {
  GazeTrace out(trace.begin(), trace.end());
  std::size_t b = 0;
  for (auto& s : out) {
    while (b < blinks.size() && blinks[b].end_ms < s.timestamp_ms) ++b;
    if (b < blinks.size() && s.timestamp_ms >= blinks[b].start_ms) {
      s.valid = false;
      s.pupil = 0.0;
    }
  }
  return out;
}

EventSet detect_events(std::span<const GazeSample> trace, const ViewingGeometry& geometry,
                       const DetectionConfig& config, const std::optional<StimulusFrame>& frame) {
  EventSet events;
  const auto velocity = angular_velocity(trace, geometry);
  if (velocity.empty()) return events;

  const double interval = geometry.sample_interval_ms();
  const std::size_t n = trace.size();
  const StimulusFrame f = frame.value_or(StimulusFrame{
      {0.0, 0.0, double(geometry.screen_width_px), double(geometry.screen_height_px)},
      {geometry.screen_width_px, geometry.screen_height_px}});

  std::vector<std::array<double, 3>> dir(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (trace[i].tracked()) dir[i] = gaze_direction(geometry, {trace[i].x_px, trace[i].y_px});
  }
  auto slow = [&](std::size_t i) {
    return trace[i].tracked() && velocity[i] && *velocity[i] < config.saccade_velocity_deg_s;
  };
  const double half = 0.5 * config.fixation_dispersion_deg * (M_PI / 180.0);
  const double max_chord2 = 4.0 * std::sin(half) * std::sin(half);

  std::vector<bool> in_fixation(n, false);
  std::size_t i = 0;
  while (i < n) {
    if (!slow(i)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    double widest = 0.0;
    while (j + 1 < n && slow(j + 1) && contiguous(trace[j], trace[j + 1], interval)) {
      double worst = 0.0;
      bool ok = true;
      for (std::size_t k = i; k <= j; ++k) {
        const double c2 = chord2(dir[k], dir[j + 1]);
        if (c2 > max_chord2) {
          ok = false;
          break;
        }
        worst = std::max(worst, c2);
      }
      if (!ok) break;
      widest = std::max(widest, worst);
      ++j;
    }
    const double duration = trace[j].timestamp_ms - trace[i].timestamp_ms + interval;
    if (duration + kTimeEps < config.fixation_min_ms) {
      ++i;
      continue;
    }

    FixationEvent fx;
    fx.start_ms = trace[i].timestamp_ms;
    fx.end_ms = trace[j].timestamp_ms + interval;
    fx.first_sample = i;
    fx.last_sample = j;
    fx.dispersion_deg = chord2_to_deg(widest);
    double sx = 0.0, sy = 0.0;
    fx.image_samples.reserve(j - i + 1);
    for (std::size_t k = i; k <= j; ++k) {
      sx += trace[k].x_px;
      sy += trace[k].y_px;
      fx.image_samples.push_back(to_stimulus_coords({trace[k].x_px, trace[k].y_px}, f));
      in_fixation[k] = true;
    }
    const double count = static_cast<double>(j - i + 1);
    fx.screen_centroid = {sx / count, sy / count};
    fx.centroid = to_stimulus_coords(fx.screen_centroid, f);
    fx.oob_fraction = oob_fraction_of(fx.image_samples, f.image);
    events.fixations.push_back(std::move(fx));
    i = j + 1;
  }

  auto fast = [&](std::size_t k) {
    return !in_fixation[k] && trace[k].tracked() && velocity[k] &&
           *velocity[k] >= config.saccade_velocity_deg_s;
  };
  i = 0;
  while (i < n) {
    if (!fast(i)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    double peak = *velocity[i];
    while (j + 1 < n && fast(j + 1) && contiguous(trace[j], trace[j + 1], interval)) {
      ++j;
      peak = std::max(peak, *velocity[j]);
    }
    std::size_t from = i;
    std::size_t to = j;
    if (i > 0 && trace[i - 1].tracked() && contiguous(trace[i - 1], trace[i], interval)) from = i - 1;
    if (j + 1 < n && trace[j + 1].tracked() && contiguous(trace[j], trace[j + 1], interval)) to = j + 1;
    const double amplitude = visual_angle_deg(geometry, {trace[from].x_px, trace[from].y_px},
                                              {trace[to].x_px, trace[to].y_px});
    if (amplitude >= config.saccade_min_amplitude_deg) {
      events.saccades.push_back(
          {trace[i].timestamp_ms, trace[j].timestamp_ms + interval, amplitude, peak, i, j});
    }
    i = j + 1;
  }
  return events;
}

std::vector<FixationEvent> filter_fixations(std::span<const FixationEvent> fixations, ImageSize image,
                                            const DetectionConfig& config) {
  std::vector<FixationEvent> kept;
  for (const auto& fx : fixations) {
    if (fx.duration_ms() + kTimeEps < config.fixation_keep_min_ms) continue;
    const double oob = fx.image_samples.empty() ? fx.oob_fraction : oob_fraction_of(fx.image_samples, image);
    if (oob >= config.oob_discard_fraction) continue;
    kept.push_back(fx);
    kept.back().oob_fraction = oob;
  }
  return kept;
}

GazeTrace binocular_average(std::span<const GazeSample> left, std::span<const GazeSample> right) {
  if (left.empty()) return {right.begin(), right.end()};
  if (right.empty()) return {left.begin(), left.end()};
  if (left.size() != right.size()) {
    throw InputError("binocular average: eyes have different sample counts (" + std::to_string(left.size()) +
                     " vs " + std::to_string(right.size()) + ")");
  }
  GazeTrace out(left.size());
  for (std::size_t i = 0; i < left.size(); ++i) {
    const auto& l = left[i];
    const auto& r = right[i];
    if (std::abs(l.timestamp_ms - r.timestamp_ms) > kTimeEps) {
      throw InputError("binocular average: timestamp grids differ at sample " + std::to_string(i));
    }
    GazeSample s;
    s.timestamp_ms = l.timestamp_ms;
    s.eye = Eye::Cyclopean;
    if (l.tracked() && r.tracked()) {
      s.x_px = 0.5 * (l.x_px + r.x_px);
      s.y_px = 0.5 * (l.y_px + r.y_px);
      s.pupil = 0.5 * (l.pupil + r.pupil);
      s.valid = true;
    } else if (l.tracked() || r.tracked()) {
      const auto& one = l.tracked() ? l : r;
      s.x_px = one.x_px;
      s.y_px = one.y_px;
      s.pupil = one.pupil;
      s.valid = true;
    }
    out[i] = s;
  }
  return out;
}

std::string events_to_json(const EventSet& events, std::span<const BlinkEvent> blinks) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& fx : events.fixations) {
    arr.push_back({{"type", "fixation"},
                   {"start_ms", fx.start_ms},
                   {"end_ms", fx.end_ms},
                   {"centroid", {fx.centroid.x, fx.centroid.y}},
                   {"dispersion_deg", fx.dispersion_deg},
                   {"oob_fraction", fx.oob_fraction}});
  }
  for (const auto& sc : events.saccades) {
    arr.push_back({{"type", "saccade"},
                   {"start_ms", sc.start_ms},
                   {"end_ms", sc.end_ms},
                   {"amplitude_deg", sc.amplitude_deg},
                   {"peak_velocity_deg_s", sc.peak_velocity_deg_s}});
  }
  for (const auto& b : blinks) {
    arr.push_back({{"type", "blink"}, {"start_ms", b.start_ms}, {"end_ms", b.end_ms}});
  }
  return arr.dump(2);
}

}  // namespace gazesal
