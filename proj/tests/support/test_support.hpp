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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gazesal/ingest.hpp"

namespace gazesal::testing {

inline constexpr double kPi = 3.14159265358979323846;

/// Fresh directory under the build tree, wiped on creation.
inline std::filesystem::path temp_dir(const std::string& name) {
  const std::filesystem::path p = std::filesystem::path(GAZESAL_TEST_TMP) / name;
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << text;
}

/// Horizontal screen x, measured from the screen centre along the row through
/// it, at which the ray from the eye makes `deg` degrees with the normal.
inline double x_at_angle(const ViewingGeometry& g, double deg) {
  return g.screen_width_px / 2.0 + g.viewing_distance_mm * std::tan(deg * kPi / 180.0) / g.pitch_x_mm();
}

inline GazeSample sample(double t, double x, double y, Eye eye = Eye::Cyclopean, double pupil = 1000.0) {
  GazeSample s;
  s.timestamp_ms = t;
  s.eye = eye;
  s.x_px = x;
  s.y_px = y;
  s.pupil = pupil;
  s.valid = true;
  return s;
}

inline GazeSample lost(double t, Eye eye = Eye::Cyclopean) {
  GazeSample s;
  s.timestamp_ms = t;
  s.eye = eye;
  return s;
}

/// Angular position along the centre row as a function of time; sampled at
/// the geometry's rate on [t0, t1).
inline GazeTrace trace_from_angle(const ViewingGeometry& g, double t0, double t1,
                                  const std::function<double(double)>& angle_deg) {
  GazeTrace out;
  const double dt = g.sample_interval_ms();
  const double cy = g.screen_height_px / 2.0;
  for (int k = 0;; ++k) {
    const double t = t0 + k * dt;
    if (t >= t1 - 1e-9) break;
    out.push_back(sample(t, x_at_angle(g, angle_deg(t)), cy));
  }
  return out;
}

/// Stationary at 0 deg until ramp_start, a symmetric constant-acceleration
/// ramp of `amplitude` over `ramp_ms`, then stationary at `amplitude`.
/// Peak angular speed is 2 * amplitude / ramp_ms.
inline std::function<double(double)> triangular_step(double ramp_start, double ramp_ms, double amplitude) {
  return [=](double t) {
    const double tau = (t - ramp_start) / ramp_ms;
    if (tau <= 0.0) return 0.0;
    if (tau >= 1.0) return amplitude;
    if (tau <= 0.5) return 2.0 * amplitude * tau * tau;
    return amplitude - 2.0 * amplitude * (1.0 - tau) * (1.0 - tau);
  };
}

/// Binocular samples around a fixed screen point, independent Gaussian
/// jitter per eye and axis of sigma_deg (converted at the screen centre).
inline GazeTrace jittered_binocular(const ViewingGeometry& g, Point2 p, double t0, std::size_t n, double sigma_deg,
                                    std::mt19937_64& rng) {
  const double sigma_px = std::tan(sigma_deg * kPi / 180.0) * g.viewing_distance_mm / g.pitch_x_mm();
  std::normal_distribution<double> noise(0.0, sigma_px);
  GazeTrace out;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = t0 + k * g.sample_interval_ms();
    for (Eye e : {Eye::Left, Eye::Right}) {
      const double x = p.x + noise(rng);
      const double y = p.y + noise(rng);
      out.push_back(sample(t, x, y, e));
    }
  }
  return out;
}

}  // namespace gazesal::testing
