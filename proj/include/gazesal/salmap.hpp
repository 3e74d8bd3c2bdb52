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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gazesal/common.hpp"

namespace gazesal {

enum class MapKind { Raw, Normalized, Differential };

std::string to_string(MapKind k);

/// Dense row-major grayscale attribute map over stimulus pixels.
class SaliencyMap {
public:
  SaliencyMap() = default;
  SaliencyMap(int width, int height, MapKind kind, double fill = 0.0);
  SaliencyMap(int width, int height, MapKind kind, std::vector<double> values);

  int width() const { return width_; }
  int height() const { return height_; }
  ImageSize size() const { return {width_, height_}; }
  MapKind kind() const { return kind_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  double at(int x, int y) const { return values_[static_cast<std::size_t>(y) * width_ + x]; }
  double& at(int x, int y) { return values_[static_cast<std::size_t>(y) * width_ + x]; }

  const std::string& attribute() const { return attribute_; }
  const std::string& provenance() const { return provenance_; }
  void set_attribute(std::string a) { attribute_ = std::move(a); }
  void set_provenance(std::string p) { provenance_ = std::move(p); }
  void set_kind(MapKind k) { kind_ = k; }

  /// Whether every value lies in the range its kind promises.
  bool within_kind_bounds() const;

private:
  int width_ = 0;
  int height_ = 0;
  MapKind kind_ = MapKind::Raw;
  std::vector<double> values_;
  std::string attribute_;
  std::string provenance_;
};

/// One saliency attribute; a negative prompt makes it differential.
struct AttributeSpec {
  std::string name;
  std::string positive_prompt;
  std::optional<std::string> negative_prompt;
  std::string map_pattern = "maps/{stimulus_id}.{attribute}.pgm";
  std::optional<double> smoothing_sigma_px;
  std::optional<double> latency_threshold;

  bool differential() const { return negative_prompt.has_value(); }
  /// Names of the map files to load: {name} or {name.pos, name.neg}.
  std::vector<std::string> constituent_names() const;
  /// Pattern with {stimulus_id} and {attribute} substituted.
  std::string map_path(const std::string& stimulus_id, const std::string& constituent) const;
};

/// Reads an 8-bit grayscale PGM (P5) or PNG into a raw map.
SaliencyMap load_map(const std::filesystem::path& path, std::optional<ImageSize> expected = std::nullopt);

/// Separable Gaussian, kernel truncated at 3 sigma, half-sample symmetric
/// reflection at the borders. sigma 0 returns the input unchanged.
SaliencyMap gaussian_smooth(const SaliencyMap& map, double sigma_px);

/// Normalized 1-D Gaussian taps for offsets -r..r, r = ceil(3 sigma).
std::vector<double> gaussian_kernel(double sigma_px);

/// Reflect index into [0, n) with period 2n: ... 1 0 | 0 1 .. n-1 | n-1 n-2 ...
int reflect_index(int i, int n);

/// Affine rescale onto [0, 255]; a constant map becomes all zeros.
SaliencyMap normalize_255(const SaliencyMap& map);

/// pos - neg, not renormalized. Both inputs must be normalized maps of equal size.
SaliencyMap differential_map(const SaliencyMap& pos, const SaliencyMap& neg);

/// Isotropic Gaussian at the image centre, normalized to [0, 255].
/// sigma defaults to 0.25 * min(width, height).
SaliencyMap center_prior_map(int width, int height, std::optional<double> sigma_px = std::nullopt);

/// Bilinear interpolation; throws std::out_of_range outside [0,w-1]x[0,h-1].
double sample_saliency(const SaliencyMap& map, Point2 p);

double default_smoothing_sigma(ImageSize size);

/// Smooth and normalize each raw constituent map of one attribute, then
/// subtract them when the attribute is differential.
SaliencyMap prepare_attribute_map(const AttributeSpec& spec, std::span<const SaliencyMap> raw_constituents);

}  // namespace gazesal
