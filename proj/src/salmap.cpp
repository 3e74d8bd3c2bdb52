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

#include "gazesal/salmap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gazesal/image_io.hpp"

namespace gazesal {

std::string to_string(MapKind k) {
  switch (k) {
    case MapKind::Raw: return "raw";
    case MapKind::Normalized: return "normalized";
    case MapKind::Differential: return "differential";
  }
  return "raw";
}

SaliencyMap::SaliencyMap(int width, int height, MapKind kind, double fill)
    : SaliencyMap(width, height, kind, std::vector<double>(static_cast<std::size_t>(std::max(width, 0)) *
                                                              static_cast<std::size_t>(std::max(height, 0)),
                                                          fill)) {}

SaliencyMap::SaliencyMap(int width, int height, MapKind kind, std::vector<double> values)
    : width_(width), height_(height), kind_(kind), values_(std::move(values)) {
  if (width <= 0 || height <= 0) throw std::invalid_argument("saliency map dimensions must be positive");
  if (values_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw std::invalid_argument("saliency map value count does not match dimensions");
  }
}

bool SaliencyMap::within_kind_bounds() const {
  const double lo = kind_ == MapKind::Differential ? -255.0 : 0.0;
  return std::all_of(values_.begin(), values_.end(),
                     [lo](double v) { return std::isfinite(v) && v >= lo && v <= 255.0; });
}

std::vector<std::string> AttributeSpec::constituent_names() const {
  if (differential()) return {name + ".pos", name + ".neg"};
  return {name};
}

std::string AttributeSpec::map_path(const std::string& stimulus_id, const std::string& constituent) const {
  std::string out = map_pattern;
  auto replace_all = [&out](const std::string& token, const std::string& value) {
    for (std::size_t pos = out.find(token); pos != std::string::npos; pos = out.find(token, pos + value.size())) {
      out.replace(pos, token.size(), value);
    }
  };
  replace_all("{stimulus_id}", stimulus_id);
  replace_all("{attribute}", constituent);
  return out;
}

SaliencyMap load_map(const std::filesystem::path& path, std::optional<ImageSize> expected) {
  const Gray8Image img = read_gray8(path);
  if (expected && img.size != *expected) {
    throw InputError(path.string() + ": map is " + std::to_string(img.size.width) + "x" +
                     std::to_string(img.size.height) + ", stimulus is " + std::to_string(expected->width) + "x" +
                     std::to_string(expected->height));
  }
  std::vector<double> values(img.pixels.begin(), img.pixels.end());
  SaliencyMap map(img.size.width, img.size.height, MapKind::Raw, std::move(values));
  map.set_provenance("file:" + path.filename().string());
  return map;
}

std::vector<double> gaussian_kernel(double sigma_px) {
  if (!(sigma_px > 0.0)) return {1.0};
  const int radius = static_cast<int>(std::ceil(3.0 * sigma_px));
  std::vector<double> taps(2 * radius + 1);
  double total = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    taps[k + radius] = std::exp(-0.5 * (k * k) / (sigma_px * sigma_px));
    total += taps[k + radius];
  }
  for (auto& t : taps) t /= total;
  return taps;
}

int reflect_index(int i, int n) {
  const int period = 2 * n;
  int m = i % period;
  if (m < 0) m += period;
  return m < n ? m : period - 1 - m;
}

SaliencyMap gaussian_smooth(const SaliencyMap& map, double sigma_px) {
  if (sigma_px < 0.0) throw std::invalid_argument("smoothing sigma must be non-negative");
  if (sigma_px == 0.0) return map;

  const auto taps = gaussian_kernel(sigma_px);
  const int radius = static_cast<int>(taps.size() / 2);
  const int w = map.width();
  const int h = map.height();
  const auto in = map.values();

  std::vector<int> col_index(static_cast<std::size_t>(w) + 2 * radius);
  for (int x = -radius; x < w + radius; ++x) col_index[x + radius] = reflect_index(x, w);
  std::vector<int> row_index(static_cast<std::size_t>(h) + 2 * radius);
  for (int y = -radius; y < h + radius; ++y) row_index[y + radius] = reflect_index(y, h);

  std::vector<double> tmp(in.size());
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    const double* src = in.data() + static_cast<std::size_t>(y) * w;
    double* dst = tmp.data() + static_cast<std::size_t>(y) * w;
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = 0; k <= 2 * radius; ++k) acc += taps[k] * src[col_index[x + k]];
      dst[x] = acc;
    }
  }

  SaliencyMap out = map;
  auto res = out.values();
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    double* dst = res.data() + static_cast<std::size_t>(y) * w;
    std::fill(dst, dst + w, 0.0);
    for (int k = 0; k <= 2 * radius; ++k) {
      const double* src = tmp.data() + static_cast<std::size_t>(row_index[y + k]) * w;
      const double t = taps[k];
      for (int x = 0; x < w; ++x) dst[x] += t * src[x];
    }
  }
  return out;
}

SaliencyMap normalize_255(const SaliencyMap& map) {
  const auto v = map.values();
  const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
  const double lo = *lo_it;
  const double range = *hi_it - lo;
  SaliencyMap out = map;
  out.set_kind(MapKind::Normalized);
  auto o = out.values();
  if (!(range > 0.0)) {
    std::fill(o.begin(), o.end(), 0.0);
    return out;
  }
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = ((v[i] - lo) / range) * 255.0;
  return out;
}

SaliencyMap differential_map(const SaliencyMap& pos, const SaliencyMap& neg) {
  if (pos.size() != neg.size()) throw InputError("differential map: constituent dimensions differ");
  if (pos.kind() != MapKind::Normalized || neg.kind() != MapKind::Normalized) {
    throw InputError("differential map: constituents must be normalized");
  }
  std::vector<double> diff(pos.values().size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = pos.values()[i] - neg.values()[i];
  SaliencyMap out(pos.width(), pos.height(), MapKind::Differential, std::move(diff));
  out.set_attribute(pos.attribute());
  out.set_provenance(pos.provenance() + " minus " + neg.provenance());
  return out;
}

SaliencyMap center_prior_map(int width, int height, std::optional<double> sigma_px) {
  const double sigma = sigma_px.value_or(0.25 * std::min(width, height));
  const double cx = 0.5 * (width - 1);
  const double cy = 0.5 * (height - 1);
  SaliencyMap map(width, height, MapKind::Raw);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double dx = x - cx;
      const double dy = y - cy;
      map.at(x, y) = std::exp(-0.5 * (dx * dx + dy * dy) / (sigma * sigma));
    }
  }
  SaliencyMap out = normalize_255(map);
  out.set_attribute("center_bias");
  out.set_provenance("synthetic center prior");
  return out;
}

double sample_saliency(const SaliencyMap& map, Point2 p) {
  if (!(p.x >= 0.0 && p.x <= map.width() - 1 && p.y >= 0.0 && p.y <= map.height() - 1)) {
    throw std::out_of_range("sample_saliency: point outside map");
  }
  const int x0 = std::min(static_cast<int>(p.x), map.width() - 1);
  const int y0 = std::min(static_cast<int>(p.y), map.height() - 1);
  const int x1 = std::min(x0 + 1, map.width() - 1);
  const int y1 = std::min(y0 + 1, map.height() - 1);
  const double fx = p.x - x0;
  const double fy = p.y - y0;
  const double top = map.at(x0, y0) + fx * (map.at(x1, y0) - map.at(x0, y0));
  const double bottom = map.at(x0, y1) + fx * (map.at(x1, y1) - map.at(x0, y1));
  return top + fy * (bottom - top);
}

double default_smoothing_sigma(ImageSize size) { return 0.02 * std::min(size.width, size.height); }

SaliencyMap prepare_attribute_map(const AttributeSpec& spec, std::span<const SaliencyMap> raw) {
  const std::size_t expected = spec.differential() ? 2 : 1;
  if (raw.size() != expected) {
    throw InputError("attribute '" + spec.name + "' expects " + std::to_string(expected) + " map(s)");
  }
  auto process = [&](const SaliencyMap& m) {
    const double sigma = spec.smoothing_sigma_px.value_or(default_smoothing_sigma(m.size()));
    return normalize_255(gaussian_smooth(m, sigma));
  };
  SaliencyMap out = spec.differential() ? differential_map(process(raw[0]), process(raw[1])) : process(raw[0]);
  out.set_attribute(spec.name);
  return out;
}

}  // namespace gazesal
