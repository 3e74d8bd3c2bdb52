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

#include <gtest/gtest.h>

#include <json.hpp>

#include "../support/test_support.hpp"
#include "gazesal/image_io.hpp"
#include "gazesal/manifest.hpp"

using namespace gazesal;
namespace t = gazesal::testing;

namespace {

const char* kGeometry = R"("geometry": {"screen_width_px": 1920, "screen_height_px": 1080,
  "screen_width_mm": 531, "screen_height_mm": 298.6875, "viewing_distance_mm": 600, "sampling_rate_hz": 500})";

std::string manifest_text(const std::string& trials, const std::string& attributes = R"([{"name": "depth"}])") {
  return std::string("{") + kGeometry + R"(,
  "subjects": [{"id": "s1", "group": "case"}, {"id": "s2", "group": "control"}],
  "stimuli": [{"id": "img1", "width": 8, "height": 6}],
  "trials": )" + trials + R"(,
  "attributes": )" + attributes + "}";
}

const char* kTwoTrials = R"([
  {"trial_id": "a", "subject_id": "s1", "stimulus_id": "img1", "display_rect": {"x": 560, "y": 240, "width": 800, "height": 600},
   "onset_ms": 1000, "offset_ms": 3000, "gaze_file": "gaze/s1.csv"},
  {"subject_id": "s2", "stimulus_id": "img1", "display_rect": [0, 0, 1920, 1080], "onset_ms": 500, "gaze_file": "gaze/s2.csv"}])";

std::string error_of(const std::string& text) {
  try {
    parse_manifest(text, ".");
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Manifest, ParsesFieldsAndDefaults) {
  const auto m = parse_manifest(manifest_text(kTwoTrials), "/data");
  EXPECT_EQ(m.geometry.screen_height_mm, 298.6875);
  ASSERT_EQ(m.trials.size(), 2u);
  EXPECT_EQ(m.trials[0].trial_id, "a");
  EXPECT_EQ(m.trials[0].display_rect.x, 560.0);
  EXPECT_EQ(m.trials[1].trial_id, "s2-1");
  EXPECT_EQ(m.trials[1].offset_ms, 2500.0);
  EXPECT_EQ(m.trials[1].display_rect.width, 1920.0);
  EXPECT_EQ(m.subject("s2").group, Group::Control);
  EXPECT_EQ(m.stimulus("img1").size, (ImageSize{8, 6}));
  EXPECT_EQ(m.attributes[0].positive_prompt, "depth");
  EXPECT_EQ(m.attributes[0].map_pattern, "maps/{stimulus_id}.{attribute}.pgm");
  EXPECT_EQ(m.base_dir, "/data");
}

TEST(Manifest, RoundTripsThroughJson) {
  const auto m = parse_manifest(manifest_text(kTwoTrials, R"([{"name": "complexity", "positive_prompt": "complex",
      "negative_prompt": "smooth", "smoothing_sigma_px": 3, "latency_threshold": 100}])"), ".");
  const std::string text = manifest_to_json(m);
  const auto back = parse_manifest(text, ".");
  EXPECT_EQ(manifest_to_json(back), text);
  EXPECT_EQ(*back.attributes[0].negative_prompt, "smooth");
  EXPECT_EQ(*back.attributes[0].smoothing_sigma_px, 3.0);
  EXPECT_EQ(*back.attributes[0].latency_threshold, 100.0);
}

TEST(Manifest, RejectsBrokenReferences) {
  EXPECT_NE(error_of("{").find("invalid JSON"), std::string::npos);
  EXPECT_NE(error_of("[]").find("object"), std::string::npos);
  EXPECT_NE(error_of(manifest_text(R"([{"subject_id": "nobody", "stimulus_id": "img1", "display_rect": [0,0,10,10],
      "onset_ms": 0, "gaze_file": "g.csv"}])")).find("unknown subject 'nobody'"), std::string::npos);
  EXPECT_NE(error_of(manifest_text(R"([{"subject_id": "s1", "stimulus_id": "img1", "display_rect": [1900,0,100,10],
      "onset_ms": 0, "gaze_file": "g.csv"}])")).find("exceeds the screen"), std::string::npos);
  EXPECT_NE(error_of(manifest_text(R"([{"subject_id": "s1", "stimulus_id": "img1", "display_rect": [0,0,10,10],
      "onset_ms": 0}])")).find("gaze_file"), std::string::npos);
  EXPECT_NE(error_of(manifest_text(R"([{"subject_id": "s1", "stimulus_id": "img1", "display_rect": [0,0,10],
      "onset_ms": 0, "gaze_file": "g"}])")).find("4 numbers"), std::string::npos);
  EXPECT_NE(error_of(manifest_text("[]", R"([{"name": "a"}, {"name": "a"}])")).find("duplicate attribute"),
            std::string::npos);
  EXPECT_NE(error_of(manifest_text("[]", R"([{"name": "a", "negative_prompt": ""}])")).find("empty prompt"),
            std::string::npos);
  EXPECT_FALSE(error_of(std::string("{") + kGeometry + R"(, "subjects": [{"id": "x", "group": "patient"}]})").empty());
  EXPECT_FALSE(error_of(manifest_text(R"([{"subject_id": 5}])")).empty());
}

TEST(AttributesFile, StandaloneArrayOrObject) {
  const auto a = parse_attribute_specs(R"([{"name": "depth"}, {"name": "fg", "positive_prompt": "foreground",
      "negative_prompt": "background"}])");
  ASSERT_EQ(a.size(), 2u);
  EXPECT_TRUE(a[1].differential());
  const auto b = parse_attribute_specs(R"({"attributes": [{"name": "depth"}]})");
  EXPECT_EQ(b.size(), 1u);
  EXPECT_EQ(parse_attribute_specs(attribute_specs_to_json(a)).size(), 2u);
  EXPECT_EQ(attribute_specs_to_json(parse_attribute_specs(attribute_specs_to_json(a))), attribute_specs_to_json(a));
  EXPECT_THROW(parse_attribute_specs(R"({"attributes": 3})"), InputError);
  EXPECT_THROW(parse_attribute_specs(R"([{"positive_prompt": "x"}])"), InputError);
  EXPECT_THROW(parse_attribute_specs(R"([{"name": "x", "smoothing_sigma_px": -1}])"), InputError);
}

TEST(LoadCohort, ReadsRecordingsAndMaps) {
  const auto dir = t::temp_dir("manifest_load");
  t::spit(dir / "manifest.json", manifest_text(kTwoTrials));
  t::spit(dir / "gaze/s1.csv", "timestamp_ms,eye,x_px,y_px,pupil\n1000,L,1,2,3\n");
  t::spit(dir / "gaze/s2.csv", "timestamp_ms,eye,x_px,y_px,pupil\n");
  std::filesystem::create_directories(dir / "maps");
  write_pgm(dir / "maps/img1.depth.pgm", Gray8Image{{8, 6}, std::vector<std::uint8_t>(48, 9)});
  const auto c = load_cohort(load_manifest(dir / "manifest.json"));
  EXPECT_EQ(c.recordings.at("gaze/s1.csv").size(), 1u);
  EXPECT_EQ(c.raw_maps.at(map_key("img1", "depth")).at(7, 5), 9.0);
}

TEST(LoadCohort, ErrorsNameTrialAttributeAndStimulus) {
  const auto dir = t::temp_dir("manifest_errors");
  t::spit(dir / "manifest.json", manifest_text(kTwoTrials));
  t::spit(dir / "gaze/s1.csv", "timestamp_ms,eye,x_px,y_px,pupil\n");
  try {
    load_cohort(load_manifest(dir / "manifest.json"));
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("unreadable recording for trial 's2-1'"), std::string::npos) << e.what();
  }
  t::spit(dir / "gaze/s2.csv", "timestamp_ms,eye,x_px,y_px,pupil\n");
  try {
    load_cohort(load_manifest(dir / "manifest.json"));
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("missing map for attribute 'depth' stimulus 'img1'"), std::string::npos);
  }
  std::filesystem::create_directories(dir / "maps");
  write_pgm(dir / "maps/img1.depth.pgm", Gray8Image{{6, 8}, std::vector<std::uint8_t>(48, 9)});
  try {
    load_cohort(load_manifest(dir / "manifest.json"));
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("attribute 'depth' stimulus 'img1'"), std::string::npos);
  }
  EXPECT_THROW(load_manifest(dir / "absent.json"), InputError);
}
