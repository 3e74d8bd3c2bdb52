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

#include "gazesal/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "format.hpp"
#include "gazesal/image_io.hpp"

namespace gazesal {

using nlohmann::ordered_json;
using detail::format_number;

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

// Quote a CSV field only when it needs it.
std::string field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

ordered_json opt_json(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
  if (!out) throw InputError("write failed: " + path.string());
}

std::string safe_name(const std::string& s) {
  std::string out = s;
  for (char& c : out) {
    if (c == '/' || c == '\\' || c == ':') c = '_';
  }
  return out;
}

}  // namespace

std::string comparison_csv(const AnalysisResult& result) {
  std::ostringstream os;
  os << "attribute,n_case,n_control,mean_case,mean_control,U,p_mw,d,p_perm,significant\n";
  for (const auto& c : result.comparisons) {
    os << field(c.attribute) << ',' << c.n_case << ',' << c.n_control << ',' << format_number(c.mean_case) << ','
       << format_number(c.mean_control) << ',' << format_number(c.u) << ',' << format_number(c.p_mw) << ','
       << format_number(c.d) << ',' << format_number(c.p_perm) << ',' << (c.significant ? "true" : "false") << '\n';
  }
  return os.str();
}

std::string comparison_json(const AnalysisResult& result) {
  ordered_json rows = ordered_json::array();
  for (const auto& c : result.comparisons) {
    rows.push_back({{"attribute", c.attribute},
                    {"n_case", c.n_case},
                    {"n_control", c.n_control},
                    {"mean_case", c.mean_case},
                    {"mean_control", c.mean_control},
                    {"U", c.u},
                    {"p_mw", c.p_mw},
                    {"d", c.d},
                    {"p_perm", c.p_perm},
                    {"significant", c.significant}});
  }
  return rows.dump(2) + "\n";
}

std::string subject_metrics_csv(const AnalysisResult& result) {
  std::ostringstream os;
  os << "subject_id,group,attribute,mean_saliency,n_trials\n";
  for (const auto& s : result.subjects) {
    if (s.center_bias) {
      os << field(s.subject_id) << ',' << to_string(s.group) << ",center_bias," << format_number(*s.center_bias)
         << ',' << s.fixation_trials << '\n';
    }
    for (const auto& attr : result.selected_attributes) {
      auto it = s.saliency.find(attr);
      if (it == s.saliency.end()) continue;
      os << field(s.subject_id) << ',' << to_string(s.group) << ',' << field(attr) << ','
         << format_number(it->second) << ',' << s.saliency_trials.at(attr) << '\n';
    }
  }
  return os.str();
}

std::string subject_fixations_csv(const AnalysisResult& result) {
  std::ostringstream os;
  os << "subject_id,group,mean_fixation_count,n_trials\n";
  for (const auto& s : result.subjects) {
    os << field(s.subject_id) << ',' << to_string(s.group) << ',' << opt(s.fixation_count) << ','
       << s.fixation_trials << '\n';
  }
  return os.str();
}

std::string subject_latency_csv(const AnalysisResult& result) {
  std::ostringstream os;
  os << "subject_id,group,attribute,mean_latency_ms,n_trials\n";
  for (const auto& s : result.subjects) {
    for (const auto& attr : result.selected_attributes) {
      auto it = s.latency_ms.find(attr);
      if (it == s.latency_ms.end()) continue;
      os << field(s.subject_id) << ',' << to_string(s.group) << ',' << field(attr) << ','
         << format_number(it->second) << ',' << s.latency_trials.at(attr) << '\n';
    }
  }
  return os.str();
}

std::string trial_metrics_csv(const AnalysisResult& result) {
  std::ostringstream os;
  os << "trial_id,subject_id,group,stimulus_id,fixation_count,center_bias";
  for (const auto& attr : result.selected_attributes) os << ',' << field(attr);
  for (const auto& attr : result.selected_attributes) os << ',' << field("latency:" + attr);
  os << '\n';
  for (const auto& t : result.trials) {
    os << field(t.trial_id) << ',' << field(t.subject_id) << ',' << to_string(t.group) << ',' << field(t.stimulus_id)
       << ',' << t.fixation_count << ',' << opt(t.center_bias);
    for (const auto& attr : result.selected_attributes) os << ',' << opt(t.saliency.at(attr));
    for (const auto& attr : result.selected_attributes) os << ',' << opt(t.latency_ms.at(attr));
    os << '\n';
  }
  return os.str();
}

std::string correlations_csv(const AnalysisResult& result) {
  std::ostringstream os;
  os << "group,attribute,n,r,p\n";
  for (const auto& c : result.correlations) {
    os << to_string(c.group) << ',' << field(c.attribute) << ',' << c.n << ',' << opt(c.r) << ',' << opt(c.p)
       << '\n';
  }
  return os.str();
}

std::string run_metadata_json(const AnalysisResult& result, const AnalysisConfig& config,
                              const std::string& manifest_path) {
  const auto& d = config.detection;
  ordered_json j;
  j["tool"] = "gazesal";
  j["version"] = kVersion;
  j["manifest"] = manifest_path;
  j["seed"] = config.seed;
  j["n_perm"] = config.n_perm;
  j["granularity"] = to_string(config.granularity);
  j["attributes"] = result.selected_attributes;
  j["sampling"] = config.sampling == SaliencySampling::FixationCentroid ? "fixation_centroid" : "samples";
  j["latency_threshold"] = config.latency_threshold;
  j["center_prior_sigma_px"] = opt_json(config.center_prior_sigma_px);
  j["density_sigma_px"] = opt_json(config.density_sigma_px);
  j["detection"] = {{"fixation_dispersion_deg", d.fixation_dispersion_deg},
                    {"fixation_min_ms", d.fixation_min_ms},
                    {"saccade_velocity_deg_s", d.saccade_velocity_deg_s},
                    {"saccade_min_amplitude_deg", d.saccade_min_amplitude_deg},
                    {"fixation_keep_min_ms", d.fixation_keep_min_ms},
                    {"oob_discard_fraction", d.oob_discard_fraction},
                    {"blink_pad_ms", d.blink_pad_ms}};
  j["significance_level"] = stats::kSignificanceLevel;
  j["exact_mann_whitney_max_group_size"] = stats::kExactMaxGroupSize;
  j["smoothing_sigma_default"] = "0.02 * min(width, height) px unless the attribute sets smoothing_sigma_px";
  j["center_prior_sigma_default"] = "0.25 * min(width, height) px";
  j["binocular"] = "per-timestamp average of both eyes before detection";
  j["n_trials"] = result.trials.size();
  j["n_subjects"] = result.subjects.size();
  j["warnings"] = result.warnings;
  return j.dump(2) + "\n";
}

Gray8Image quantize_density(const SaliencyMap& density) {
  Gray8Image img{density.size(), std::vector<std::uint8_t>(density.values().size(), 0)};
  const auto v = density.values();
  const double peak = v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
  if (!(peak > 0.0)) return img;
  for (std::size_t i = 0; i < v.size(); ++i) {
    img.pixels[i] = static_cast<std::uint8_t>(std::clamp(std::lround(255.0 * v[i] / peak), 0L, 255L));
  }
  return img;
}

void write_report_tree(const AnalysisResult& result, const AnalysisConfig& config, const std::string& manifest_path,
                       const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw InputError("cannot create output directory " + out_dir.string() + ": " + ec.message());

  write_text(out_dir / "comparison.csv", comparison_csv(result));
  write_text(out_dir / "comparison.json", comparison_json(result));
  write_text(out_dir / "subject_metrics.csv", subject_metrics_csv(result));
  write_text(out_dir / "subject_fixations.csv", subject_fixations_csv(result));
  write_text(out_dir / "subject_latency.csv", subject_latency_csv(result));
  write_text(out_dir / "trial_metrics.csv", trial_metrics_csv(result));
  write_text(out_dir / "correlations.csv", correlations_csv(result));
  write_text(out_dir / "run_metadata.json", run_metadata_json(result, config, manifest_path));

  if (!result.densities.empty()) {
    fs::create_directories(out_dir / "density", ec);
    if (ec) throw InputError("cannot create " + (out_dir / "density").string());
    for (const auto& d : result.densities) {
      const std::string stem = safe_name(d.stimulus_id) + "." + to_string(d.group);
      const Gray8Image img = quantize_density(d.density);
      write_pgm(out_dir / "density" / (stem + ".pgm"), img);
      write_png_colormap(out_dir / "density" / (stem + ".png"), img, heat_colormap());
      const auto v = d.density.values();
      ordered_json side = {{"stimulus_id", d.stimulus_id},
                           {"group", to_string(d.group)},
                           {"width", d.density.width()},
                           {"height", d.density.height()},
                           {"n_fixations", d.n_fixations},
                           {"peak", v.empty() ? 0.0 : *std::max_element(v.begin(), v.end())},
                           {"colormap", "heat: r=3v, g=3v-1, b=3v-2 clamped to [0,1]"}};
      write_text(out_dir / "density" / (stem + ".json"), side.dump(2) + "\n");
    }
  }

  if (!result.events.empty()) {
    fs::create_directories(out_dir / "events", ec);
    if (ec) throw InputError("cannot create " + (out_dir / "events").string());
    for (std::size_t i = 0; i < result.events.size(); ++i) {
      const auto& ev = result.events[i];
      write_text(out_dir / "events" / (safe_name(result.trials[i].trial_id) + ".json"),
                 events_to_json(ev.detected, ev.blinks) + "\n");
    }
  }
}

}  // namespace gazesal
