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

#include <random>

#include <json.hpp>

#include "../support/test_support.hpp"
#include "gazesal/events.hpp"

using namespace gazesal;
namespace t = gazesal::testing;

namespace {

const ViewingGeometry kGeom;
const DetectionConfig kCfg;

GazeTrace pupil_gap(double t0, double t1, double lost_from, double lost_to) {
  GazeTrace tr;
  for (double t = t0; t < t1; t += 2.0) {
    auto s = t::sample(t, 960, 540);
    if (t >= lost_from && t <= lost_to) s.pupil = 0.0;
    tr.push_back(s);
  }
  return tr;
}

FixationEvent synthetic_fixation(double duration_ms, std::size_t n_outside, std::size_t n_total = 100) {
  FixationEvent fx;
  fx.start_ms = 1000.0;
  fx.end_ms = 1000.0 + duration_ms;
  for (std::size_t k = 0; k < n_total; ++k) fx.image_samples.push_back(k < n_outside ? Point2{-1, 5} : Point2{5, 5});
  return fx;
}

}  // namespace

TEST(DetectionConfig, DefaultsAndValidation) {
  const DetectionConfig c;
  EXPECT_EQ(c.fixation_dispersion_deg, 0.1);
  EXPECT_EQ(c.fixation_min_ms, 100.0);
  EXPECT_EQ(c.saccade_velocity_deg_s, 30.0);
  EXPECT_EQ(c.saccade_min_amplitude_deg, 0.1);
  EXPECT_EQ(c.fixation_keep_min_ms, 50.0);
  EXPECT_EQ(c.oob_discard_fraction, 0.20);
  EXPECT_EQ(c.blink_pad_ms, 50.0);
  EXPECT_NO_THROW(c.validate());
  DetectionConfig bad;
  bad.saccade_velocity_deg_s = -1;
  EXPECT_THROW(bad.validate(), InputError);
}

TEST(Blinks, NoLostSamplesNoBlinks) { EXPECT_TRUE(detect_blinks(pupil_gap(0, 1000, -1, -1), kCfg).empty()); }

TEST(Blinks, PaddedBySideLength) {
  const auto b = detect_blinks(pupil_gap(0, 1000, 500, 620), kCfg);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0].start_ms, 450.0);
  EXPECT_EQ(b[0].end_ms, 670.0);
}

TEST(Blinks, CloseRunsMerge) {
  auto tr = pupil_gap(0, 1000, 500, 520);
  for (auto& s : tr) {
    if (s.timestamp_ms >= 550 && s.timestamp_ms <= 570) s.valid = false;
  }
  const auto b = detect_blinks(tr, kCfg);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0].start_ms, 450.0);
  EXPECT_EQ(b[0].end_ms, 620.0);
}

TEST(Blinks, ClippedToWindowAndExcised) {
  const auto tr = pupil_gap(0, 1000, 0, 20);
  const auto b = detect_blinks(tr, kCfg, std::make_pair(0.0, 1000.0));
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0].start_ms, 0.0);
  EXPECT_EQ(b[0].end_ms, 70.0);
  const auto clean = excise_blinks(tr, b);
  for (const auto& s : clean) EXPECT_EQ(s.tracked(), s.timestamp_ms > 70.0) << s.timestamp_ms;
}

TEST(Events, TwoFixationsAndOneSaccadeWithExactBoundaries) {
  // 150 ms still, 20 ms ramp of 2 deg peaking at 200 deg/s, 150 ms still.
  const auto tr = t::trace_from_angle(kGeom, 0, 318, t::triangular_step(148, 20, 2.0));
  const auto ev = detect_events(tr, kGeom, kCfg);
  ASSERT_EQ(ev.fixations.size(), 2u);
  ASSERT_EQ(ev.saccades.size(), 1u);
  EXPECT_EQ(ev.fixations[0].start_ms, 0.0);
  EXPECT_EQ(ev.fixations[0].end_ms, 150.0);
  EXPECT_EQ(ev.fixations[1].start_ms, 168.0);
  EXPECT_EQ(ev.fixations[1].end_ms, 318.0);
  EXPECT_EQ(ev.saccades[0].start_ms, 150.0);
  EXPECT_EQ(ev.saccades[0].end_ms, 168.0);
  EXPECT_NEAR(ev.saccades[0].amplitude_deg, 2.0, 1e-9);
  EXPECT_GE(ev.saccades[0].peak_velocity_deg_s, 30.0);
  EXPECT_EQ(ev.fixations[0].dispersion_deg, 0.0);
}

TEST(Events, ShortStillSegmentIsNoFixation) {
  const auto tr = t::trace_from_angle(kGeom, 0, 80, [](double) { return 1.0; });
  EXPECT_TRUE(detect_events(tr, kGeom, kCfg).fixations.empty());
  const auto exactly = t::trace_from_angle(kGeom, 0, 100, [](double) { return 1.0; });
  EXPECT_EQ(detect_events(exactly, kGeom, kCfg).fixations.size(), 1u);
  const auto short_by_one = t::trace_from_angle(kGeom, 0, 98, [](double) { return 1.0; });
  EXPECT_TRUE(detect_events(short_by_one, kGeom, kCfg).fixations.empty());
}

TEST(Events, EmptyAndSingleSampleTraces) {
  EXPECT_TRUE(detect_events(GazeTrace{}, kGeom, kCfg).fixations.empty());
  const GazeTrace one{t::sample(0, 1, 1)};
  EXPECT_TRUE(detect_events(one, kGeom, kCfg).fixations.empty());
}

TEST(Events, JitteredBinocularFixationRecoveredNearTruth) {
  std::mt19937_64 rng(20240501);
  const Point2 truth{960, 540};
  const auto raw = t::jittered_binocular(kGeom, truth, 0, 150, 0.02, rng);
  const auto eyes = split_eyes(raw);
  const auto cyc = binocular_average(eyes.left, eyes.right);
  const auto ev = detect_events(cyc, kGeom, kCfg);
  ASSERT_EQ(ev.fixations.size(), 1u);
  EXPECT_LE(ev.fixations[0].dispersion_deg, kCfg.fixation_dispersion_deg);
  EXPECT_LT(visual_angle_deg(kGeom, ev.fixations[0].screen_centroid, truth), 0.05);
}

TEST(Events, DriftAboveDispersionStaysUnclassified) {
  // 5 deg/s drift: too fast to stay within 0.1 deg for 100 ms, too slow for a saccade.
  const auto tr = t::trace_from_angle(kGeom, 0, 500, [](double ms) { return 0.005 * ms; });
  const auto ev = detect_events(tr, kGeom, kCfg);
  EXPECT_TRUE(ev.fixations.empty());
  EXPECT_TRUE(ev.saccades.empty());
}

TEST(Events, SmallFastJumpIsNotASaccade) {
  // A 0.05 deg step in one sample is fast but below the amplitude minimum.
  const auto tr = t::trace_from_angle(kGeom, 0, 400, [](double ms) { return ms < 200 ? 0.0 : 0.05; });
  const auto ev = detect_events(tr, kGeom, kCfg);
  EXPECT_TRUE(ev.saccades.empty());
}

TEST(Events, BlinkGapsSplitFixations) {
  GazeTrace tr = t::trace_from_angle(kGeom, 0, 600, [](double) { return 0.0; });
  for (auto& s : tr) {
    if (s.timestamp_ms >= 290 && s.timestamp_ms <= 310) s.pupil = 0.0;
  }
  const auto blinks = detect_blinks(tr, kCfg);
  const auto ev = detect_events(excise_blinks(tr, blinks), kGeom, kCfg);
  ASSERT_EQ(ev.fixations.size(), 2u);
  EXPECT_EQ(ev.fixations[0].end_ms, 240.0);
  EXPECT_EQ(ev.fixations[1].start_ms, 362.0);
  for (const auto& fx : ev.fixations) {
    for (const auto& b : blinks) EXPECT_TRUE(fx.end_ms <= b.start_ms || fx.start_ms > b.end_ms);
  }
}

TEST(Events, InvariantsHoldOnRandomScanpaths) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> ux(200, 1700), uy(150, 900), ud(60, 400);
  for (int trial = 0; trial < 20; ++trial) {
    GazeTrace tr;
    double t0 = 0;
    for (int f = 0; f < 6; ++f) {
      const Point2 p{ux(rng), uy(rng)};
      const auto n = static_cast<std::size_t>(ud(rng) / 2);
      const auto part = t::jittered_binocular(kGeom, p, t0, n, 0.01, rng);
      const auto eyes = split_eyes(part);
      const auto cyc = binocular_average(eyes.left, eyes.right);
      tr.insert(tr.end(), cyc.begin(), cyc.end());
      t0 += 2.0 * n;
    }
    const auto ev = detect_events(tr, kGeom, kCfg);
    double last_end = -1;
    for (const auto& fx : ev.fixations) {
      EXPECT_GE(fx.duration_ms(), 100.0 - 1e-9);
      EXPECT_LE(fx.dispersion_deg, 0.1 + 1e-12);
      EXPECT_GE(fx.start_ms, last_end);
      last_end = fx.end_ms;
    }
    for (const auto& sc : ev.saccades) {
      EXPECT_GE(sc.peak_velocity_deg_s, 30.0);
      EXPECT_GE(sc.amplitude_deg, 0.1);
      for (const auto& fx : ev.fixations) EXPECT_TRUE(sc.end_ms <= fx.start_ms || sc.start_ms >= fx.end_ms);
    }
    const auto again = detect_events(tr, kGeom, kCfg);
    EXPECT_EQ(events_to_json(again, {}), events_to_json(ev, {}));
  }
}

TEST(Events, CentroidIsMeanOfSamplesInImageCoordinates) {
  const StimulusFrame frame{{560, 240, 800, 600}, {400, 300}};
  GazeTrace tr;
  for (int k = 0; k < 60; ++k) tr.push_back(t::sample(2.0 * k, 960 + (k % 2 ? 0.5 : -0.5), 540));
  const auto ev = detect_events(tr, kGeom, kCfg, frame);
  ASSERT_EQ(ev.fixations.size(), 1u);
  EXPECT_NEAR(ev.fixations[0].screen_centroid.x, 960.0, 1e-12);
  EXPECT_NEAR(ev.fixations[0].centroid.x, 200.0, 1e-12);
  EXPECT_NEAR(ev.fixations[0].centroid.y, 150.0, 1e-12);
  EXPECT_EQ(ev.fixations[0].image_samples.size(), 60u);
}

class DurationFilter : public ::testing::TestWithParam<std::pair<double, bool>> {};

TEST_P(DurationFilter, KeepsAtOrAboveMinimum) {
  const auto [duration, kept] = GetParam();
  const std::vector<FixationEvent> fx{synthetic_fixation(duration, 0)};
  EXPECT_EQ(filter_fixations(fx, {10, 10}, kCfg).size(), kept ? 1u : 0u);
}

INSTANTIATE_TEST_SUITE_P(Boundary, DurationFilter,
                         ::testing::Values(std::make_pair(40.0, false), std::make_pair(49.0, false),
                                           std::make_pair(50.0, true), std::make_pair(51.0, true)));

class OffImageFilter : public ::testing::TestWithParam<std::pair<std::size_t, bool>> {};

TEST_P(OffImageFilter, DiscardsAtTwentyPercent) {
  const auto [outside, kept] = GetParam();
  const std::vector<FixationEvent> fx{synthetic_fixation(200, outside)};
  EXPECT_EQ(filter_fixations(fx, {10, 10}, kCfg).size(), kept ? 1u : 0u);
}

INSTANTIATE_TEST_SUITE_P(Boundary, OffImageFilter,
                         ::testing::Values(std::make_pair(std::size_t{10}, true), std::make_pair(std::size_t{19}, true),
                                           std::make_pair(std::size_t{20}, false),
                                           std::make_pair(std::size_t{21}, false),
                                           std::make_pair(std::size_t{30}, false)));

TEST(Filter, ImageEdgeIsHalfOpenAndOrderPreserved) {
  FixationEvent a = synthetic_fixation(200, 0);
  a.image_samples.assign(100, Point2{9.999, 0.0});
  FixationEvent b = synthetic_fixation(300, 0);
  b.image_samples.assign(100, Point2{10.0, 5.0});
  FixationEvent c = synthetic_fixation(400, 0);
  const std::vector<FixationEvent> in{a, b, c};
  const auto kept = filter_fixations(in, {10, 10}, kCfg);
  ASSERT_EQ(kept.size(), 2u);
  EXPECT_EQ(kept[0].duration_ms(), 200.0);
  EXPECT_EQ(kept[1].duration_ms(), 400.0);
  EXPECT_TRUE(filter_fixations(std::vector<FixationEvent>{}, {10, 10}, kCfg).empty());
}

TEST(Binocular, MeanWhenBothTracked) {
  const GazeTrace l{t::sample(0, 100, 100, Eye::Left)};
  const GazeTrace r{t::sample(0, 110, 120, Eye::Right)};
  const auto c = binocular_average(l, r);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].x_px, 105.0);
  EXPECT_EQ(c[0].y_px, 110.0);
  EXPECT_EQ(c[0].eye, Eye::Cyclopean);
}

TEST(Binocular, SingleEyePassesThrough) {
  const GazeTrace l{t::sample(0, 100, 100, Eye::Left), t::sample(2, 101, 99, Eye::Left)};
  const GazeTrace r{t::lost(0, Eye::Right), t::sample(2, 50, 50, Eye::Right, 0.0)};
  const auto c = binocular_average(l, r);
  EXPECT_EQ(c[0].x_px, 100.0);
  EXPECT_EQ(c[1].x_px, 101.0);
  const GazeTrace none{t::lost(0, Eye::Left)};
  const GazeTrace none_r{t::lost(0, Eye::Right)};
  EXPECT_FALSE(binocular_average(none, none_r)[0].valid);
  EXPECT_EQ(binocular_average(l, {}).size(), 2u);
}

TEST(Binocular, IdenticalTracesAreIdempotent) {
  std::mt19937_64 rng(5);
  const auto raw = t::jittered_binocular(kGeom, {500, 500}, 0, 50, 0.05, rng);
  const auto eyes = split_eyes(raw);
  const auto c = binocular_average(eyes.left, eyes.left);
  for (std::size_t i = 0; i < c.size(); ++i) {
    EXPECT_EQ(c[i].x_px, eyes.left[i].x_px);
    EXPECT_EQ(c[i].y_px, eyes.left[i].y_px);
  }
}

TEST(Binocular, MismatchedGridsThrow) {
  const GazeTrace l{t::sample(0, 1, 1, Eye::Left), t::sample(2, 1, 1, Eye::Left)};
  const GazeTrace r{t::sample(0, 1, 1, Eye::Right), t::sample(3, 1, 1, Eye::Right)};
  EXPECT_THROW(binocular_average(l, r), InputError);
  EXPECT_THROW(binocular_average(l, std::span(r).first(1)), InputError);
}

TEST(EventDump, OneObjectPerEvent) {
  const auto tr = t::trace_from_angle(kGeom, 0, 318, t::triangular_step(148, 20, 2.0));
  const auto ev = detect_events(tr, kGeom, kCfg);
  const std::vector<BlinkEvent> blinks{{400, 450}};
  const auto j = nlohmann::json::parse(events_to_json(ev, blinks));
  ASSERT_EQ(j.size(), 4u);
  EXPECT_EQ(j[0]["type"], "fixation");
  EXPECT_EQ(j[2]["type"], "saccade");
  EXPECT_EQ(j[3]["type"], "blink");
  EXPECT_EQ(j[1]["start_ms"], 168.0);
  EXPECT_TRUE(j[0].contains("dispersion_deg"));
  EXPECT_TRUE(j[0].contains("centroid"));
}
