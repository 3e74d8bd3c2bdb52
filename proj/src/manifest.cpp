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

#include "gazesal/manifest.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace gazesal {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

template <typename T>
T required(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw InputError("manifest: " + where + " is missing '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InputError("manifest: " + where + "." + key + ": " + e.what());
  }
}

ViewingGeometry parse_geometry(const json& j) {
  ViewingGeometry g;
  g.screen_width_px = required<int>(j, "screen_width_px", "geometry");
  g.screen_height_px = required<int>(j, "screen_height_px", "geometry");
  g.screen_width_mm = required<double>(j, "screen_width_mm", "geometry");
  g.screen_height_mm = required<double>(j, "screen_height_mm", "geometry");
  g.viewing_distance_mm = required<double>(j, "viewing_distance_mm", "geometry");
  g.sampling_rate_hz = required<double>(j, "sampling_rate_hz", "geometry");
  return g;
}

ScreenRect parse_rect(const json& j, const std::string& where) {
  if (j.is_array()) {
    if (j.size() != 4) throw InputError("manifest: " + where + ".display_rect must have 4 numbers");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
  }
  return {required<double>(j, "x", where + ".display_rect"), required<double>(j, "y", where + ".display_rect"),
          required<double>(j, "width", where + ".display_rect"),
          required<double>(j, "height", where + ".display_rect")};
}

AttributeSpec parse_attribute(const json& j) {
  AttributeSpec a;
  a.name = required<std::string>(j, "name", "attribute");
  a.positive_prompt = j.value("positive_prompt", a.name);
  if (j.contains("negative_prompt") && !j.at("negative_prompt").is_null()) {
    a.negative_prompt = j.at("negative_prompt").get<std::string>();
  }
  a.map_pattern = j.value("map_pattern", a.map_pattern);
  if (j.contains("smoothing_sigma_px")) a.smoothing_sigma_px = j.at("smoothing_sigma_px").get<double>();
  if (j.contains("latency_threshold")) a.latency_threshold = j.at("latency_threshold").get<double>();
  return a;
}

ordered_json attribute_json(const AttributeSpec& a) {
  ordered_json j;
  j["name"] = a.name;
  j["positive_prompt"] = a.positive_prompt;
  if (a.negative_prompt) j["negative_prompt"] = *a.negative_prompt;
  j["map_pattern"] = a.map_pattern;
  if (a.smoothing_sigma_px) j["smoothing_sigma_px"] = *a.smoothing_sigma_px;
  if (a.latency_threshold) j["latency_threshold"] = *a.latency_threshold;
  return j;
}

void validate_attributes(const std::vector<AttributeSpec>& attrs) {
  std::set<std::string> names;
  for (const auto& a : attrs) {
    if (a.name.empty()) throw InputError("manifest: attribute with empty name");
    if (!names.insert(a.name).second) throw InputError("manifest: duplicate attribute '" + a.name + "'");
    if (a.positive_prompt.empty() || (a.negative_prompt && a.negative_prompt->empty())) {
      throw InputError("manifest: attribute '" + a.name + "' has an empty prompt");
    }
    if (a.smoothing_sigma_px && *a.smoothing_sigma_px < 0.0) {
      throw InputError("manifest: attribute '" + a.name + "' has negative smoothing sigma");
    }
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

const SubjectEntry& CohortManifest::subject(const std::string& id) const {
  for (const auto& s : subjects) {
    if (s.id == id) return s;
  }
  throw InputError("manifest: unknown subject '" + id + "'");
}

const StimulusEntry& CohortManifest::stimulus(const std::string& id) const {
  for (const auto& s : stimuli) {
    if (s.id == id) return s;
  }
  throw InputError("manifest: unknown stimulus '" + id + "'");
}

void CohortManifest::validate() const {
  geometry.validate();
  std::set<std::string> ids;
  for (const auto& s : subjects) {
    if (!ids.insert(s.id).second) throw InputError("manifest: duplicate subject '" + s.id + "'");
  }
  ids.clear();
  for (const auto& s : stimuli) {
    if (!ids.insert(s.id).second) throw InputError("manifest: duplicate stimulus '" + s.id + "'");
    if (s.size.width <= 0 || s.size.height <= 0) {
      throw InputError("manifest: stimulus '" + s.id + "' has non-positive size");
    }
  }
  ids.clear();
  for (const auto& t : trials) {
    if (!ids.insert(t.trial_id).second) throw InputError("manifest: duplicate trial '" + t.trial_id + "'");
    subject(t.subject_id);
    stimulus(t.stimulus_id);
    if (!(t.offset_ms > t.onset_ms)) throw InputError("manifest: trial '" + t.trial_id + "' has offset <= onset");
    const auto& r = t.display_rect;
    if (!(r.width > 0.0 && r.height > 0.0)) {
      throw InputError("manifest: trial '" + t.trial_id + "' has a degenerate display_rect");
    }
    if (r.x < 0.0 || r.y < 0.0 || r.x + r.width > geometry.screen_width_px ||
        r.y + r.height > geometry.screen_height_px) {
      throw InputError("manifest: trial '" + t.trial_id + "' display_rect exceeds the screen");
    }
    if (t.gaze_file.empty()) throw InputError("manifest: trial '" + t.trial_id + "' has no gaze_file");
  }
  validate_attributes(attributes);
}

CohortManifest parse_manifest(const std::string& text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("manifest: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("manifest: expected a JSON object");
  CohortManifest m;
  m.base_dir = base_dir;
  if (!doc.contains("geometry")) throw InputError("manifest: missing 'geometry'");
  try {
    m.geometry = parse_geometry(doc.at("geometry"));

    for (const auto& s : doc.value("subjects", json::array())) {
      m.subjects.push_back({required<std::string>(s, "id", "subject"),
                            parse_group(required<std::string>(s, "group", "subject"))});
    }
    for (const auto& s : doc.value("stimuli", json::array())) {
      StimulusEntry e;
      e.id = required<std::string>(s, "id", "stimulus");
      e.size = {required<int>(s, "width", "stimulus " + e.id), required<int>(s, "height", "stimulus " + e.id)};
      e.image = s.value("image", std::string());
      m.stimuli.push_back(e);
    }
    std::size_t index = 0;
    for (const auto& t : doc.value("trials", json::array())) {
      TrialEntry e;
      e.subject_id = required<std::string>(t, "subject_id", "trial");
      e.trial_id = t.value("trial_id", e.subject_id + "-" + std::to_string(index));
      const std::string where = "trial " + e.trial_id;
      e.stimulus_id = required<std::string>(t, "stimulus_id", where);
      if (!t.contains("display_rect")) throw InputError("manifest: " + where + " is missing 'display_rect'");
      e.display_rect = parse_rect(t.at("display_rect"), where);
      e.onset_ms = required<double>(t, "onset_ms", where);
      e.offset_ms = t.value("offset_ms", e.onset_ms + kDefaultTrialDurationMs);
      e.gaze_file = required<std::string>(t, "gaze_file", where);
      m.trials.push_back(e);
      ++index;
    }
    for (const auto& a : doc.value("attributes", json::array())) m.attributes.push_back(parse_attribute(a));
  } catch (const json::exception& e) {
    throw InputError(std::string("manifest: ") + e.what());
  }
  m.validate();
  return m;
}

CohortManifest load_manifest(const std::filesystem::path& path) {
  return parse_manifest(read_text(path), path.parent_path());
}

std::string manifest_to_json(const CohortManifest& m) {
  ordered_json doc;
  const auto& g = m.geometry;
  doc["geometry"] = {{"screen_width_px", g.screen_width_px},   {"screen_height_px", g.screen_height_px},
                     {"screen_width_mm", g.screen_width_mm},   {"screen_height_mm", g.screen_height_mm},
                     {"viewing_distance_mm", g.viewing_distance_mm}, {"sampling_rate_hz", g.sampling_rate_hz}};
  doc["subjects"] = ordered_json::array();
  for (const auto& s : m.subjects) doc["subjects"].push_back({{"id", s.id}, {"group", to_string(s.group)}});
  doc["stimuli"] = ordered_json::array();
  for (const auto& s : m.stimuli) {
    ordered_json j = {{"id", s.id}, {"width", s.size.width}, {"height", s.size.height}};
    if (!s.image.empty()) j["image"] = s.image;
    doc["stimuli"].push_back(j);
  }
  doc["trials"] = ordered_json::array();
  for (const auto& t : m.trials) {
    doc["trials"].push_back({{"trial_id", t.trial_id},
                             {"subject_id", t.subject_id},
                             {"stimulus_id", t.stimulus_id},
                             {"display_rect",
                              {{"x", t.display_rect.x},
                               {"y", t.display_rect.y},
                               {"width", t.display_rect.width},
                               {"height", t.display_rect.height}}},
                             {"onset_ms", t.onset_ms},
                             {"offset_ms", t.offset_ms},
                             {"gaze_file", t.gaze_file}});
  }
  doc["attributes"] = ordered_json::array();
  for (const auto& a : m.attributes) doc["attributes"].push_back(attribute_json(a));
  return doc.dump(2) + "\n";
}

std::vector<AttributeSpec> parse_attribute_specs(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("attributes: invalid JSON: ") + e.what());
  }
  const json& arr = doc.is_object() ? doc.value("attributes", json::array()) : doc;
  if (!arr.is_array()) throw InputError("attributes: expected an array");
  std::vector<AttributeSpec> out;
  try {
    for (const auto& a : arr) out.push_back(parse_attribute(a));
  } catch (const json::exception& e) {
    throw InputError(std::string("attributes: ") + e.what());
  }
  validate_attributes(out);
  return out;
}

std::string attribute_specs_to_json(const std::vector<AttributeSpec>& specs) {
  ordered_json arr = ordered_json::array();
  for (const auto& a : specs) arr.push_back(attribute_json(a));
  return arr.dump(2) + "\n";
}

std::string map_key(const std::string& stimulus_id, const std::string& constituent) {
  return stimulus_id + "|" + constituent;
}

Cohort load_cohort(const CohortManifest& manifest) {
  Cohort cohort;
  cohort.manifest = manifest;

  std::vector<std::pair<std::string, std::string>> files;  // (gaze_file, first trial id)
  std::set<std::string> seen;
  for (const auto& t : manifest.trials) {
    if (seen.insert(t.gaze_file).second) files.emplace_back(t.gaze_file, t.trial_id);
  }
  std::vector<GazeTrace> traces(files.size());
  std::vector<std::string> errors(files.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < files.size(); ++i) {
    try {
      std::ifstream in(manifest.base_dir / files[i].first, std::ios::binary);
      if (!in) throw InputError("cannot open " + (manifest.base_dir / files[i].first).string());
      traces[i] = parse_gaze_csv(in);
    } catch (const std::exception& e) {
      errors[i] = "unreadable recording for trial '" + files[i].second + "': " + e.what();
    }
  }
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (!errors[i].empty()) throw InputError(errors[i]);
    cohort.recordings.emplace(files[i].first, std::move(traces[i]));
  }

  for (const auto& stim : manifest.stimuli) {
    for (const auto& attr : manifest.attributes) {
      for (const auto& part : attr.constituent_names()) {
        const auto path = manifest.base_dir / attr.map_path(stim.id, part);
        if (!std::filesystem::exists(path)) {
          throw InputError("missing map for attribute '" + attr.name + "' stimulus '" + stim.id +
                           "': " + path.string());
        }
        try {
          cohort.raw_maps.emplace(map_key(stim.id, part), load_map(path, stim.size));
        } catch (const InputError& e) {
          throw InputError("bad map for attribute '" + attr.name + "' stimulus '" + stim.id + "': " + e.what());
        }
      }
    }
  }
  return cohort;
}

}  // namespace gazesal
