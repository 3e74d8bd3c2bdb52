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

#include "gazesal/ingest.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "format.hpp"

namespace gazesal {

std::string to_string(Group g) { return g == Group::Case ? "case" : "control"; }

Group parse_group(const std::string& s) {
  if (s == "case") return Group::Case;
  if (s == "control") return Group::Control;
  throw InputError("unknown group label '" + s + "' (expected case or control)");
}

void ViewingGeometry::validate() const {
  if (screen_width_px <= 0 || screen_height_px <= 0 || screen_width_mm <= 0.0 ||
      screen_height_mm <= 0.0 || viewing_distance_mm <= 0.0 || sampling_rate_hz <= 0.0) {
    throw InputError("viewing geometry: all fields must be strictly positive");
  }
  const double px = pitch_x_mm();
  const double py = pitch_y_mm();
  if (std::abs(px - py) > 0.01 * std::max(px, py)) {
    throw InputError("viewing geometry: pixel pitch differs between axes by more than 1% (" +
                     detail::format_number(px) + " vs " + detail::format_number(py) + " mm/px)");
  }
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw InputError("gaze csv: " + what + " at line " + std::to_string(line));
}

constexpr std::string_view kHeader = "timestamp_ms,eye,x_px,y_px,pupil";

}  // namespace

GazeTrace parse_gaze_csv(std::istream& in) {
  GazeTrace samples;
  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::optional<double> last_ts[2];

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != kHeader) fail(line_no, "missing or unexpected header");
      header_seen = true;
      continue;
    }

    std::array<std::string_view, 5> fields;
    std::size_t n = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      if (n == fields.size()) fail(line_no, "too many columns");
      fields[n++] = trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (n != fields.size()) fail(line_no, "expected 5 columns, found " + std::to_string(n));

    GazeSample s;
    if (!parse_double(fields[0], s.timestamp_ms)) fail(line_no, "bad timestamp");
    if (fields[1] == "L") {
      s.eye = Eye::Left;
    } else if (fields[1] == "R") {
      s.eye = Eye::Right;
    } else {
      fail(line_no, "bad eye field '" + std::string(fields[1]) + "'");
    }

    auto lost = [](std::string_view f) { return f.empty() || f == "."; };
    if (lost(fields[2]) || lost(fields[3])) {
      s.valid = false;
      s.pupil = 0.0;
    } else {
      if (!parse_double(fields[2], s.x_px) || !parse_double(fields[3], s.y_px)) {
        fail(line_no, "bad coordinate");
      }
      s.valid = true;
      if (lost(fields[4])) {
        s.pupil = 0.0;
      } else if (!parse_double(fields[4], s.pupil) || s.pupil < 0.0) {
        fail(line_no, "bad pupil value");
      }
    }

    auto& prev = last_ts[s.eye == Eye::Left ? 0 : 1];
    if (prev && s.timestamp_ms < *prev) fail(line_no, "non-monotonic timestamp");
    prev = s.timestamp_ms;
    samples.push_back(s);
  }
  if (!header_seen) throw InputError("gaze csv: missing header");
  return samples;
}

void write_gaze_csv(std::ostream& out, std::span<const GazeSample> samples) {
  out << kHeader << '\n';
  std::string row;
  for (const auto& s : samples) {
    row.clear();
    row += detail::format_number(s.timestamp_ms);
    row += s.eye == Eye::Right ? ",R," : ",L,";
    if (s.valid) {
      row += detail::format_number(s.x_px);
      row += ',';
      row += detail::format_number(s.y_px);
      row += ',';
      row += detail::format_number(s.pupil);
    } else {
      row += ".,.,0";
    }
    row += '\n';
    out << row;
  }
}

EyeTraces split_eyes(std::span<const GazeSample> samples) {
  EyeTraces out;
  for (const auto& s : samples) {
    (s.eye == Eye::Right ? out.right : out.left).push_back(s);
  }
  return out;
}

GazeTrace clip_to_window(std::span<const GazeSample> samples, double onset_ms, double offset_ms) {
  GazeTrace out;
  for (const auto& s : samples) {
    if (s.timestamp_ms >= onset_ms && s.timestamp_ms < offset_ms) out.push_back(s);
  }
  return out;
}

std::array<double, 3> gaze_direction(const ViewingGeometry& g, Point2 p) {
  const double x = (p.x - 0.5 * g.screen_width_px) * g.pitch_x_mm();
  const double y = (p.y - 0.5 * g.screen_height_px) * g.pitch_y_mm();
  const double z = g.viewing_distance_mm;
  const double norm = std::sqrt(x * x + y * y + z * z);
  return {x / norm, y / norm, z / norm};
}

double visual_angle_deg(const ViewingGeometry& g, Point2 p, Point2 q) {
  const auto u = gaze_direction(g, p);
  const auto v = gaze_direction(g, q);
  const double cx = u[1] * v[2] - u[2] * v[1];
  const double cy = u[2] * v[0] - u[0] * v[2];
  const double cz = u[0] * v[1] - u[1] * v[0];
  const double cross = std::sqrt(cx * cx + cy * cy + cz * cz);
  const double dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
  return std::atan2(cross, dot) * (180.0 / M_PI);
}

std::vector<std::optional<double>> angular_velocity(std::span<const GazeSample> trace,
                                                    const ViewingGeometry& g) {
  std::size_t tracked = 0;
  for (const auto& s : trace) tracked += s.tracked() ? 1 : 0;
  if (tracked < 2) return {};

  std::vector<std::optional<double>> v(trace.size());
  auto speed = [&](std::size_t a, std::size_t b) -> std::optional<double> {
    const double dt = trace[b].timestamp_ms - trace[a].timestamp_ms;
    if (dt <= 0.0) return std::nullopt;
    const double deg = visual_angle_deg(g, {trace[a].x_px, trace[a].y_px}, {trace[b].x_px, trace[b].y_px});
    return deg / (dt * 1e-3);
  };
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (!trace[i].tracked()) continue;
    const bool has_prev = i > 0 && trace[i - 1].tracked();
    const bool has_next = i + 1 < trace.size() && trace[i + 1].tracked();
    if (has_prev && has_next) {
      v[i] = speed(i - 1, i + 1);
    } else if (has_next) {
      v[i] = speed(i, i + 1);
    } else if (has_prev) {
      v[i] = speed(i - 1, i);
    }
  }
  return v;
}

Point2 to_stimulus_coords(Point2 p, const StimulusFrame& f) {
  return {(p.x - f.rect.x) * f.image.width / f.rect.width,
          (p.y - f.rect.y) * f.image.height / f.rect.height};
}

Point2 to_screen_coords(Point2 p, const StimulusFrame& f) {
  return {f.rect.x + p.x * f.rect.width / f.image.width,
          f.rect.y + p.y * f.rect.height / f.image.height};
}

}  // namespace gazesal
