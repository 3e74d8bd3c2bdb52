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

#include <cmath>
#include <random>
#include <sstream>

#include "../support/test_support.hpp"
#include "gazesal/ingest.hpp"

using namespace gazesal;
using gazesal::testing::kPi;

namespace {

GazeTrace parse(const std::string& text) {
  std::istringstream in(text);
  return parse_gaze_csv(in);
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(GazeCsv, ParsesRowsCommentsAndLostSignal) {
  const auto t = parse(
      "# recorded on tracker A\n"
      "timestamp_ms,eye,x_px,y_px,pupil\n"
      "0,L,100.5,200,1500\n"
      "0,R,101,201.25,1480\n"
      "\n"
      "2,L,.,.,0\n"
      "2,R,,,\n"
      "4,L,102,203,0\n");
  ASSERT_EQ(t.size(), 5u);
  EXPECT_EQ(t[0].eye, Eye::Left);
  EXPECT_DOUBLE_EQ(t[0].x_px, 100.5);
  EXPECT_DOUBLE_EQ(t[1].y_px, 201.25);
  EXPECT_TRUE(t[1].tracked());
  EXPECT_FALSE(t[2].valid);
  EXPECT_FALSE(t[3].valid);
  EXPECT_TRUE(t[4].valid);
  EXPECT_FALSE(t[4].tracked());
}

TEST(GazeCsv, AcceptsByteOrderMarkAndCrLf) {
  const auto t = parse("\xEF\xBB\xBFtimestamp_ms,eye,x_px,y_px,pupil\r\n0,L,1,2,3\r\n");
  ASSERT_EQ(t.size(), 1u);
  EXPECT_DOUBLE_EQ(t[0].pupil, 3.0);
}

TEST(GazeCsv, ErrorsNameTheLine) {
  EXPECT_NE(error_of("time,eye\n").find("header at line 1"), std::string::npos);
  EXPECT_NE(error_of("timestamp_ms,eye,x_px,y_px,pupil\n0,L,1,2\n").find("line 2"), std::string::npos);
  EXPECT_NE(error_of("timestamp_ms,eye,x_px,y_px,pupil\n0,X,1,2,3\n").find("bad eye"), std::string::npos);
  EXPECT_NE(error_of("timestamp_ms,eye,x_px,y_px,pupil\n0,L,1,2,3,4\n").find("too many"), std::string::npos);
  EXPECT_NE(error_of("timestamp_ms,eye,x_px,y_px,pupil\n0,L,abc,2,3\n").find("bad coordinate at line 2"),
            std::string::npos);
  EXPECT_NE(error_of("").find("missing header"), std::string::npos);
}

TEST(GazeCsv, TimestampsMustNotRegressWithinAnEye) {
  EXPECT_NO_THROW(parse("timestamp_ms,eye,x_px,y_px,pupil\n2,L,1,1,1\n0,R,1,1,1\n"));
  const auto msg = error_of("timestamp_ms,eye,x_px,y_px,pupil\n2,L,1,1,1\n4,R,1,1,1\n0,L,1,1,1\n");
  EXPECT_NE(msg.find("non-monotonic timestamp at line 4"), std::string::npos);
}

TEST(GazeCsv, WriteParseRoundTripIsLossless) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-500.0, 2500.0);
  std::bernoulli_distribution drop(0.1);
  GazeTrace in;
  for (int k = 0; k < 2000; ++k) {
    for (Eye e : {Eye::Left, Eye::Right}) {
      GazeSample s;
      s.timestamp_ms = k * 2.0 + 1.0 / 3.0;
      s.eye = e;
      if (!drop(rng)) {
        s.valid = true;
        s.x_px = u(rng);
        s.y_px = u(rng);
        s.pupil = std::abs(u(rng));
      }
      in.push_back(s);
    }
  }
  std::ostringstream out;
  write_gaze_csv(out, in);
  const auto back = parse(out.str());
  ASSERT_EQ(back.size(), in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    EXPECT_EQ(back[i].timestamp_ms, in[i].timestamp_ms);
    EXPECT_EQ(back[i].eye, in[i].eye);
    EXPECT_EQ(back[i].valid, in[i].valid);
    if (in[i].valid) {
      EXPECT_EQ(back[i].x_px, in[i].x_px);
      EXPECT_EQ(back[i].y_px, in[i].y_px);
      EXPECT_EQ(back[i].pupil, in[i].pupil);
    }
  }
  std::ostringstream again;
  write_gaze_csv(again, back);
  EXPECT_EQ(again.str(), out.str());
}

TEST(Geometry, ValidatesPositiveFieldsAndSquarePixels) {
  ViewingGeometry g;
  EXPECT_NO_THROW(g.validate());
  g.viewing_distance_mm = 0;
  EXPECT_THROW(g.validate(), InputError);
  g = ViewingGeometry{};
  g.screen_height_mm *= 1.05;
  EXPECT_THROW(g.validate(), InputError);
  EXPECT_DOUBLE_EQ(ViewingGeometry{}.sample_interval_ms(), 2.0);
}

TEST(Geometry, VisualAngleFromCentreMatchesArctangent) {
  const ViewingGeometry g;
  const Point2 c{960, 540};
  for (double dx : {1.0, 10.0, 37.9, 400.0, 900.0}) {
    const double expected = std::atan(dx * g.pitch_x_mm() / g.viewing_distance_mm) * 180.0 / kPi;
    EXPECT_NEAR(visual_angle_deg(g, c, {c.x + dx, c.y}), expected, 1e-12);
  }
  EXPECT_EQ(visual_angle_deg(g, c, c), 0.0);
}

TEST(Geometry, VisualAngleIsSymmetricAndObeysTriangleInequality) {
  const ViewingGeometry g;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ux(0, 1920), uy(0, 1080);
  for (int i = 0; i < 200; ++i) {
    const Point2 a{ux(rng), uy(rng)}, b{ux(rng), uy(rng)}, c{ux(rng), uy(rng)};
    EXPECT_NEAR(visual_angle_deg(g, a, b), visual_angle_deg(g, b, a), 1e-12);
    EXPECT_LE(visual_angle_deg(g, a, c), visual_angle_deg(g, a, b) + visual_angle_deg(g, b, c) + 1e-9);
  }
}

TEST(Geometry, VisualAngleIsStableForTinyDisplacements) {
  const ViewingGeometry g;
  const double a = visual_angle_deg(g, {960, 540}, {960 + 1e-6, 540});
  const double expected = std::atan(1e-6 * g.pitch_x_mm() / g.viewing_distance_mm) * 180.0 / kPi;
  EXPECT_NEAR(a / expected, 1.0, 1e-6);
}

TEST(Velocity, ConstantAngularSpeedIsRecovered) {
  const ViewingGeometry g;
  const auto trace = gazesal::testing::trace_from_angle(g, 0, 40, [](double t) { return 0.05 * t; });  // 50 deg/s
  const auto v = angular_velocity(trace, g);
  ASSERT_EQ(v.size(), trace.size());
  for (const auto& x : v) {
    ASSERT_TRUE(x);
    EXPECT_NEAR(*x, 50.0, 1e-9);
  }
}

TEST(Velocity, OneSidedNextToLostSamples) {
  const ViewingGeometry g;
  auto trace = gazesal::testing::trace_from_angle(g, 0, 20, [](double t) { return t < 7 ? 0.0 : 0.5; });
  trace[4] = gazesal::testing::lost(trace[4].timestamp_ms);
  const auto v = angular_velocity(trace, g);
  EXPECT_FALSE(v[4]);
  ASSERT_TRUE(v[3]);
  EXPECT_NEAR(*v[3], 0.0, 1e-9);  // backward difference only
  ASSERT_TRUE(v[5]);
  EXPECT_NEAR(*v[5], 0.0, 1e-9);  // forward difference only
  EXPECT_TRUE(angular_velocity(std::span(trace).first(1), g).empty());
}

TEST(Traces, SplitAndClipToWindow) {
  GazeTrace t;
  for (int k = 0; k < 10; ++k) {
    t.push_back(gazesal::testing::sample(k * 2.0, 1, 1, Eye::Left));
    t.push_back(gazesal::testing::sample(k * 2.0, 2, 2, Eye::Right));
  }
  const auto eyes = split_eyes(t);
  EXPECT_EQ(eyes.left.size(), 10u);
  EXPECT_EQ(eyes.right.size(), 10u);
  EXPECT_EQ(eyes.right[3].x_px, 2.0);
  const auto w = clip_to_window(t, 4.0, 10.0);
  ASSERT_EQ(w.size(), 6u);
  EXPECT_EQ(w.front().timestamp_ms, 4.0);
  EXPECT_EQ(w.back().timestamp_ms, 8.0);
}

TEST(Traces, StimulusScreenMappingRoundTrips) {
  const StimulusFrame f{{560, 240, 800, 600}, {400, 300}};
  EXPECT_EQ(to_stimulus_coords({560, 240}, f), (Point2{0, 0}));
  EXPECT_EQ(to_stimulus_coords({960, 540}, f), (Point2{200, 150}));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-100, 1000);
  for (int i = 0; i < 100; ++i) {
    const Point2 p{u(rng), u(rng)};
    const Point2 q = to_stimulus_coords(to_screen_coords(p, f), f);
    EXPECT_NEAR(q.x, p.x, 1e-9);
    EXPECT_NEAR(q.y, p.y, 1e-9);
  }
}

TEST(Groups, ParseAndPrint) {
  EXPECT_EQ(parse_group("case"), Group::Case);
  EXPECT_EQ(parse_group("control"), Group::Control);
  EXPECT_EQ(to_string(Group::Control), "control");
  EXPECT_THROW(parse_group("patient"), InputError);
}
