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

#include "gazesal/cohortsim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "gazesal/image_io.hpp"

namespace gazesal {

using nlohmann::json;
using nlohmann::ordered_json;

void SimProfile::validate() const {
  if (!(bias >= 0.0 && bias <= 1.0)) throw InputError("profile: bias must lie in [0, 1]");
  if (!(fixations_per_trial >= 1.0)) throw InputError("profile: fixations_per_trial must be >= 1");
  if (!(duration_sigma >= 0.0)) throw InputError("profile: duration_sigma must be >= 0");
  if (!(jitter_deg >= 0.0)) throw InputError("profile: jitter_deg must be >= 0");
  if (!(min_duration_ms > 0.0)) throw InputError("profile: min_duration_ms must be > 0");
  if (!(pupil > 0.0)) throw InputError("profile: pupil must be > 0");
}

void CohortSimConfig::validate() const {
  case_profile.validate();
  control_profile.validate();
  geometry.validate();
  if (subjects_per_group < 1 || trials_per_subject < 1 || n_stimuli < 1) {
    throw InputError("simulation: subject, trial and stimulus counts must be >= 1");
  }
  if (stimulus_size.width <= 0 || stimulus_size.height <= 0) throw InputError("simulation: bad stimulus size");
  if (!(trial_duration_ms > 0.0) || inter_trial_ms < 0.0 || !(saccade_ms > 0.0) || min_separation_deg < 0.0) {
    throw InputError("simulation: timing parameters must be positive");
  }
  if (display_rect.x < 0 || display_rect.y < 0 || display_rect.width <= 0 || display_rect.height <= 0 ||
      display_rect.x + display_rect.width > geometry.screen_width_px ||
      display_rect.y + display_rect.height > geometry.screen_height_px) {
    throw InputError("simulation: display_rect must lie on the screen");
  }
  if (attribute.empty()) throw InputError("simulation: attribute name is empty");
}

namespace {

SimProfile parse_profile(const json& j, SimProfile p) {
  p.bias = j.value("bias", p.bias);
  p.fixations_per_trial = j.value("fixations_per_trial", p.fixations_per_trial);
  p.duration_mu = j.value("duration_mu", p.duration_mu);
  p.duration_sigma = j.value("duration_sigma", p.duration_sigma);
  p.jitter_deg = j.value("jitter_deg", p.jitter_deg);
  p.min_duration_ms = j.value("min_duration_ms", p.min_duration_ms);
  p.pupil = j.value("pupil", p.pupil);
  return p;
}

ordered_json profile_json(const SimProfile& p) {
  return {{"bias", p.bias},
          {"fixations_per_trial", p.fixations_per_trial},
          {"duration_mu", p.duration_mu},
          {"duration_sigma", p.duration_sigma},
          {"jitter_deg", p.jitter_deg},
          {"min_duration_ms", p.min_duration_ms},
          {"pupil", p.pupil}};
}

double snap_up(double ms, double interval) { return std::ceil(ms / interval - 1e-9) * interval; }
double snap_down(double ms, double interval) { return std::floor(ms / interval + 1e-9) * interval; }

}  // namespace

CohortSimConfig parse_sim_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("profile: invalid JSON: ") + e.what());
  }
  CohortSimConfig c;
  try {
    if (j.contains("case")) c.case_profile = parse_profile(j.at("case"), c.case_profile);
    if (j.contains("control")) c.control_profile = parse_profile(j.at("control"), c.control_profile);
    c.subjects_per_group = j.value("subjects_per_group", c.subjects_per_group);
    c.trials_per_subject = j.value("trials_per_subject", c.trials_per_subject);
    c.n_stimuli = j.value("n_stimuli", c.n_stimuli);
    c.stimulus_size.width = j.value("stimulus_width", c.stimulus_size.width);
    c.stimulus_size.height = j.value("stimulus_height", c.stimulus_size.height);
    if (j.contains("display_rect")) {
      const auto& r = j.at("display_rect");
      c.display_rect = {r.at("x").get<double>(), r.at("y").get<double>(), r.at("width").get<double>(),
                        r.at("height").get<double>()};
    }
    if (j.contains("geometry")) {
      const auto& g = j.at("geometry");
      c.geometry.screen_width_px = g.value("screen_width_px", c.geometry.screen_width_px);
      c.geometry.screen_height_px = g.value("screen_height_px", c.geometry.screen_height_px);
      c.geometry.screen_width_mm = g.value("screen_width_mm", c.geometry.screen_width_mm);
      c.geometry.screen_height_mm = g.value("screen_height_mm", c.geometry.screen_height_mm);
      c.geometry.viewing_distance_mm = g.value("viewing_distance_mm", c.geometry.viewing_distance_mm);
      c.geometry.sampling_rate_hz = g.value("sampling_rate_hz", c.geometry.sampling_rate_hz);
    }
    c.trial_duration_ms = j.value("trial_duration_ms", c.trial_duration_ms);
    c.inter_trial_ms = j.value("inter_trial_ms", c.inter_trial_ms);
    c.saccade_ms = j.value("saccade_ms", c.saccade_ms);
    c.min_separation_deg = j.value("min_separation_deg", c.min_separation_deg);
    c.attribute = j.value("attribute", c.attribute);
    c.seed = j.value("seed", c.seed);
    c.map_seed = j.value("map_seed", c.seed);
  } catch (const json::exception& e) {
    throw InputError(std::string("profile: ") + e.what());
  }
  c.validate();
  return c;
}

std::string sim_config_to_json(const CohortSimConfig& c) {
  const auto& g = c.geometry;
  ordered_json j = {
      {"seed", c.seed},
      {"map_seed", c.map_seed},
      {"subjects_per_group", c.subjects_per_group},
      {"trials_per_subject", c.trials_per_subject},
      {"n_stimuli", c.n_stimuli},
      {"stimulus_width", c.stimulus_size.width},
      {"stimulus_height", c.stimulus_size.height},
      {"display_rect",
       {{"x", c.display_rect.x}, {"y", c.display_rect.y}, {"width", c.display_rect.width},
        {"height", c.display_rect.height}}},
      {"geometry",
       {{"screen_width_px", g.screen_width_px},
        {"screen_height_px", g.screen_height_px},
        {"screen_width_mm", g.screen_width_mm},
        {"screen_height_mm", g.screen_height_mm},
        {"viewing_distance_mm", g.viewing_distance_mm},
        {"sampling_rate_hz", g.sampling_rate_hz}}},
      {"trial_duration_ms", c.trial_duration_ms},
      {"inter_trial_ms", c.inter_trial_ms},
      {"saccade_ms", c.saccade_ms},
      {"min_separation_deg", c.min_separation_deg},
      {"attribute", c.attribute},
      {"case", profile_json(c.case_profile)},
      {"control", profile_json(c.control_profile)},
  };
  return j.dump(2) + "\n";
}

FixationPointSampler::FixationPointSampler(const SaliencyMap& map, double bias)
    : size_(map.size()), bias_(bias) {
  if (!(bias >= 0.0 && bias <= 1.0)) throw std::invalid_argument("sampler: bias must lie in [0, 1]");
  cumulative_.reserve(map.values().size());
  double total = 0.0;
  for (double v : map.values()) {
    total += std::max(v, 0.0);
    cumulative_.push_back(total);
  }
  if (bias > 0.0 && !(total > 0.0)) throw InputError("sampler: map has no positive saliency to bias toward");
}

Point2 FixationPointSampler::operator()(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t index;
  if (bias_ > 0.0 && unit(rng) < bias_) {
    const double u = unit(rng) * cumulative_.back();
    index = static_cast<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), u) -
                                     cumulative_.begin());
    index = std::min(index, cumulative_.size() - 1);
  } else {
    std::uniform_int_distribution<std::size_t> pick(0, cumulative_.size() - 1);
    index = pick(rng);
  }
  return {static_cast<double>(index % size_.width), static_cast<double>(index / size_.width)};
}

std::vector<Point2> sample_fixation_points(const SaliencyMap& map, double bias, std::size_t n,
                                           std::mt19937_64& rng) {
  const FixationPointSampler sampler(map, bias);
  std::vector<Point2> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(sampler(rng));
  return out;
}

GazeTrace synthesize_trace(std::span<const Point2> points, std::span<const double> durations_ms,
                           const ViewingGeometry& geometry, const StimulusFrame& frame, const SimProfile& profile,
                           double onset_ms, double saccade_ms, std::mt19937_64& rng) {
  if (points.size() != durations_ms.size()) throw std::invalid_argument("synthesize_trace: length mismatch");
  const double interval = geometry.sample_interval_ms();
  const double jitter_px =
      std::tan(profile.jitter_deg * M_PI / 180.0) * geometry.viewing_distance_mm / geometry.pitch_x_mm();
  std::normal_distribution<double> noise(0.0, 1.0);

  GazeTrace out;
  std::size_t tick = 0;
  auto emit = [&](Point2 base) {
    const double t = onset_ms + static_cast<double>(tick) * interval;
    for (Eye eye : {Eye::Left, Eye::Right}) {
      GazeSample s;
      s.timestamp_ms = t;
      s.eye = eye;
      s.x_px = base.x;
      s.y_px = base.y;
      if (jitter_px > 0.0) {
        s.x_px += jitter_px * noise(rng);
        s.y_px += jitter_px * noise(rng);
      }
      s.pupil = profile.pupil;
      s.valid = true;
      out.push_back(s);
    }
    ++tick;
  };

  const auto ramp_samples = static_cast<std::size_t>(std::llround(saccade_ms / interval));
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point2 a = to_screen_coords(points[i], frame);
    const auto n = static_cast<std::size_t>(std::llround(durations_ms[i] / interval));
    for (std::size_t k = 0; k < n; ++k) emit(a);
    if (i + 1 == points.size()) break;
    const Point2 b = to_screen_coords(points[i + 1], frame);
    for (std::size_t j = 1; j <= ramp_samples; ++j) {
      const double f = static_cast<double>(j) / static_cast<double>(ramp_samples + 1);
      emit({a.x + f * (b.x - a.x), a.y + f * (b.y - a.y)});
    }
  }
  return out;
}

SaliencyMap synthetic_stimulus_map(ImageSize size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  struct Blob {
    double x, y, sigma, amp;
  };
  const double short_side = std::min(size.width, size.height);
  std::vector<Blob> blobs(3);
  for (auto& b : blobs) {
    b.x = (0.15 + 0.7 * unit(rng)) * size.width;
    b.y = (0.15 + 0.7 * unit(rng)) * size.height;
    b.sigma = (0.06 + 0.06 * unit(rng)) * short_side;
    b.amp = 0.5 + 0.5 * unit(rng);
  }
  SaliencyMap field(size.width, size.height, MapKind::Raw);
  double peak = 0.0;
  for (int y = 0; y < size.height; ++y) {
    for (int x = 0; x < size.width; ++x) {
      double v = 0.05;
      for (const auto& b : blobs) {
        const double dx = x - b.x;
        const double dy = y - b.y;
        v += b.amp * std::exp(-0.5 * (dx * dx + dy * dy) / (b.sigma * b.sigma));
      }
      field.at(x, y) = v;
      peak = std::max(peak, v);
    }
  }
  for (auto& v : field.values()) v = static_cast<double>(std::lround(255.0 * v / peak));
  field.set_provenance("synthetic");
  return field;
}

SimStimuli make_sim_stimuli(const CohortSimConfig& config) {
  SimStimuli s;
  AttributeSpec spec;
  spec.name = config.attribute;
  spec.positive_prompt = config.attribute;
  for (int i = 0; i < config.n_stimuli; ++i) {
    char id[32];
    std::snprintf(id, sizeof(id), "stim%02d", i + 1);
    s.ids.emplace_back(id);
    s.raw.push_back(synthetic_stimulus_map(config.stimulus_size, substream_seed(config.map_seed, i)));
    s.raw.back().set_attribute(config.attribute);
    const SaliencyMap raw[] = {s.raw.back()};
    s.prepared.push_back(prepare_attribute_map(spec, raw));
  }
  return s;
}

SimulatedCohort simulate_cohort(const CohortSimConfig& config) {
  config.validate();
  return simulate_cohort(config, make_sim_stimuli(config));
}

SimulatedCohort simulate_cohort(const CohortSimConfig& config, const SimStimuli& stimuli) {
  config.validate();
  SimulatedCohort sim;
  CohortManifest& m = sim.cohort.manifest;
  m.geometry = config.geometry;
  const double interval = config.geometry.sample_interval_ms();

  AttributeSpec spec;
  spec.name = config.attribute;
  spec.positive_prompt = config.attribute;
  m.attributes.push_back(spec);
  for (std::size_t i = 0; i < stimuli.ids.size(); ++i) {
    m.stimuli.push_back({stimuli.ids[i], config.stimulus_size, ""});
    sim.cohort.raw_maps.emplace(map_key(stimuli.ids[i], config.attribute), stimuli.raw[i]);
  }

  const int n_subjects = 2 * config.subjects_per_group;
  for (int s = 0; s < n_subjects; ++s) {
    const bool is_case = s < config.subjects_per_group;
    char id[32];
    std::snprintf(id, sizeof(id), "%s%02d", is_case ? "case" : "ctrl",
                  (is_case ? s : s - config.subjects_per_group) + 1);
    m.subjects.push_back({id, is_case ? Group::Case : Group::Control});
  }

  std::vector<FixationPointSampler> case_samplers, control_samplers;
  for (const auto& map : stimuli.prepared) {
    case_samplers.emplace_back(map, config.case_profile.bias);
    control_samplers.emplace_back(map, config.control_profile.bias);
  }

  const StimulusFrame frame{config.display_rect, config.stimulus_size};
  const double trial_stride = snap_up(config.trial_duration_ms + config.inter_trial_ms, interval);
  const double first_onset = snap_up(1000.0, interval);

  struct SubjectOutput {
    std::vector<TrialEntry> trials;
    GazeTrace recording;
    std::vector<std::vector<PlantedFixation>> planted;
  };
  std::vector<SubjectOutput> outputs(n_subjects);

#pragma omp parallel for schedule(dynamic)
  for (int s = 0; s < n_subjects; ++s) {
    const auto& subject = m.subjects[s];
    const bool is_case = subject.group == Group::Case;
    const SimProfile& profile = is_case ? config.case_profile : config.control_profile;
    const auto& samplers = is_case ? case_samplers : control_samplers;
    std::mt19937_64 rng(substream_seed(config.seed, static_cast<std::uint64_t>(s)));
    std::lognormal_distribution<double> duration(profile.duration_mu, profile.duration_sigma);
    SubjectOutput& out = outputs[s];
    // A 3-sample velocity estimate can hand the sample next to each ramp to
    // the saccade, so holds get two samples of headroom over the minimum.
    const double floor_ms = profile.min_duration_ms + 2.0 * interval;
    // Keep targets far enough from the border that jitter cannot push a
    // fixation toward the off-image discard rule.
    const double margin = std::ceil(4.0 * std::tan(profile.jitter_deg * M_PI / 180.0) *
                                    config.geometry.viewing_distance_mm / config.geometry.pitch_x_mm());
    auto inset = [&](Point2 p) {
      const double mx = std::min(margin, 0.5 * (config.stimulus_size.width - 1));
      const double my = std::min(margin, 0.5 * (config.stimulus_size.height - 1));
      return Point2{std::clamp(p.x, mx, config.stimulus_size.width - 1 - mx),
                    std::clamp(p.y, my, config.stimulus_size.height - 1 - my)};
    };

    for (int k = 0; k < config.trials_per_subject; ++k) {
      const std::size_t stim = static_cast<std::size_t>(k) % stimuli.ids.size();
      TrialEntry t;
      char tid[64];
      std::snprintf(tid, sizeof(tid), "%s-t%02d", subject.id.c_str(), k + 1);
      t.trial_id = tid;
      t.subject_id = subject.id;
      t.stimulus_id = stimuli.ids[stim];
      t.display_rect = config.display_rect;
      t.onset_ms = first_onset + k * trial_stride;
      t.offset_ms = t.onset_ms + config.trial_duration_ms;
      t.gaze_file = "gaze/" + subject.id + ".csv";

      const double extra_mean = profile.fixations_per_trial - 1.0;
      std::size_t count = 1;
      if (extra_mean > 0.0) count += std::poisson_distribution<std::size_t>(extra_mean)(rng);

      std::vector<Point2> points;
      std::vector<double> durations;
      std::vector<PlantedFixation> planted;
      double cursor = t.onset_ms;
      for (std::size_t f = 0; f < count; ++f) {
        Point2 p = inset(samplers[stim](rng));
        if (!points.empty()) {
          const Point2 prev = to_screen_coords(points.back(), frame);
          for (int attempt = 0; attempt < 64; ++attempt) {
            if (visual_angle_deg(config.geometry, prev, to_screen_coords(p, frame)) >= config.min_separation_deg) {
              break;
            }
            p = inset(samplers[stim](rng));
          }
        }
        double d = snap_up(std::max(duration(rng), floor_ms), interval);
        const double start = points.empty() ? cursor : cursor + snap_up(config.saccade_ms, interval);
        const double remaining = snap_down(t.offset_ms - start, interval);
        if (remaining < floor_ms) break;
        d = std::min(d, remaining);
        points.push_back(p);
        durations.push_back(d);
        planted.push_back({p, start, d});
        cursor = start + d;
      }

      const GazeTrace trace = synthesize_trace(points, durations, config.geometry, frame, profile, t.onset_ms,
                                               snap_up(config.saccade_ms, interval), rng);
      out.recording.insert(out.recording.end(), trace.begin(), trace.end());
      out.trials.push_back(std::move(t));
      out.planted.push_back(std::move(planted));
    }
  }

  for (int s = 0; s < n_subjects; ++s) {
    auto& out = outputs[s];
    sim.cohort.recordings.emplace("gaze/" + m.subjects[s].id + ".csv", std::move(out.recording));
    for (std::size_t k = 0; k < out.trials.size(); ++k) {
      sim.planted.emplace(out.trials[k].trial_id, std::move(out.planted[k]));
      m.trials.push_back(std::move(out.trials[k]));
    }
  }
  m.validate();
  return sim;
}

std::filesystem::path write_cohort(const Cohort& cohort, const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  const auto& m = cohort.manifest;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw InputError("cannot create " + out_dir.string() + ": " + ec.message());

  for (const auto& [file, samples] : cohort.recordings) {
    const fs::path path = out_dir / file;
    fs::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    write_gaze_csv(out, samples);
    if (!out) throw InputError("write failed: " + path.string());
  }
  for (const auto& stim : m.stimuli) {
    for (const auto& attr : m.attributes) {
      for (const auto& part : attr.constituent_names()) {
        auto it = cohort.raw_maps.find(map_key(stim.id, part));
        if (it == cohort.raw_maps.end()) continue;
        const fs::path path = out_dir / attr.map_path(stim.id, part);
        fs::create_directories(path.parent_path(), ec);
        Gray8Image img{it->second.size(), {}};
        img.pixels.reserve(it->second.values().size());
        for (double v : it->second.values()) {
          img.pixels.push_back(static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)));
        }
        write_pgm(path, img);
      }
    }
  }
  const fs::path manifest_path = out_dir / "manifest.json";
  std::ofstream out(manifest_path, std::ios::binary);
  if (!out) throw InputError("cannot write " + manifest_path.string());
  out << manifest_to_json(m);
  if (!out) throw InputError("write failed: " + manifest_path.string());
  return manifest_path;
}

std::filesystem::path generate_cohort(const CohortSimConfig& config, const std::filesystem::path& out_dir) {
  const auto sim = simulate_cohort(config);
  const auto manifest = write_cohort(sim.cohort, out_dir);
  std::ofstream profile(out_dir / "profile.json", std::ios::binary);
  if (!profile) throw InputError("cannot write " + (out_dir / "profile.json").string());
  profile << sim_config_to_json(config);
  return manifest;
}

}  // namespace gazesal
