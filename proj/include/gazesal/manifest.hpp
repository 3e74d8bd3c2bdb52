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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gazesal/ingest.hpp"
#include "gazesal/salmap.hpp"

namespace gazesal {

struct SubjectEntry {
  std::string id;
  Group group = Group::Case;
};

struct StimulusEntry {
  std::string id;
  ImageSize size;
  std::string image;  // optional path to the stimulus picture
};

struct TrialEntry {
  std::string trial_id;
  std::string subject_id;
  std::string stimulus_id;
  ScreenRect display_rect;
  double onset_ms = 0.0;
  double offset_ms = 2000.0;
  std::string gaze_file;
};

struct CohortManifest {
  ViewingGeometry geometry;
  std::vector<SubjectEntry> subjects;
  std::vector<StimulusEntry> stimuli;
  std::vector<TrialEntry> trials;
  std::vector<AttributeSpec> attributes;
  std::filesystem::path base_dir;  // relative paths resolve against this

  const SubjectEntry& subject(const std::string& id) const;
  const StimulusEntry& stimulus(const std::string& id) const;

  /// Checks the cross-references and invariants; throws InputError.
  void validate() const;
};

inline constexpr double kDefaultTrialDurationMs = 2000.0;

/// Parses the manifest JSON document. Missing trial_id defaults to
/// "<subject_id>-<index>"; missing offset_ms defaults to onset + 2000.
CohortManifest parse_manifest(const std::string& json_text, const std::filesystem::path& base_dir);
CohortManifest load_manifest(const std::filesystem::path& path);
std::string manifest_to_json(const CohortManifest& manifest);

/// Attribute list on its own (the `attributes` array, or a document holding one).
std::vector<AttributeSpec> parse_attribute_specs(const std::string& json_text);
std::string attribute_specs_to_json(const std::vector<AttributeSpec>& specs);

/// Manifest plus everything it references, held in memory.
struct Cohort {
  CohortManifest manifest;
  std::map<std::string, GazeTrace> recordings;  // gaze_file -> samples
  std::map<std::string, SaliencyMap> raw_maps;  // "<stimulus>|<constituent>" -> map
};

std::string map_key(const std::string& stimulus_id, const std::string& constituent);

/// Reads every gaze file and map the manifest names.
/// Throws InputError naming the trial, or the attribute and stimulus.
Cohort load_cohort(const CohortManifest& manifest);

}  // namespace gazesal
