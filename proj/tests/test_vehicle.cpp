// Copyright 2026 The utmsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>

#include "utm/vehicle.hpp"

namespace utm {
namespace {

VehicleParams quiet(double speed = 2.0) {
  VehicleParams p;
  p.speed = speed;
  p.noise_sigma = 0.0;
  return p;
}

TEST(Vehicle, ZeroStepStaysPut) {
  Rng rng(1);
  const Vec3 p{1, 2, 3};
  EXPECT_EQ(step_vehicle(p, quiet(), {9, 9, 9}, 0.0, rng), p);
  EXPECT_THROW(step_vehicle(p, quiet(), {9, 9, 9}, -0.1, rng), std::invalid_argument);
}

TEST(Vehicle, MovesAtSpeed) {
  Rng rng(1);
  const auto q = step_vehicle({0, 0, 0}, quiet(2.0), {10, 0, 0}, 1.0, rng);
  EXPECT_NEAR(q[0], 2.0, 1e-12);
  EXPECT_EQ(q[1], 0.0);
}

TEST(Vehicle, LandsExactlyWhenInReach) {
  Rng rng(1);
  const Vec3 target{0.5, 0.5, 0};
  EXPECT_EQ(step_vehicle({0, 0, 0}, quiet(2.0), target, 1.0, rng), target);
}

TEST(Vehicle, NoiseIsTruncated) {
  Rng rng(3);
  for (int i = 0; i < 20000; ++i) ASSERT_LE(std::abs(truncated_noise(0.1, rng)), 0.3);
  EXPECT_EQ(truncated_noise(0.0, rng), 0.0);
}

TEST(Vehicle, FollowerHoldsUntilRelease) {
  Rng rng(1);
  WaypointFollower f({0, 0, 0}, {{1, 0, 0}, {2, 0, 0}}, {0.0, 5.0});
  Vec3 p{0, 0, 0};
  for (int k = 0; k < 40; ++k) p = f.step(p, 0.1 * k, 0.1, quiet(1.0), rng);
  // First waypoint reached by t = 4; second leg waits for t = 5.
  EXPECT_EQ(f.next_index(), 1u);
  EXPECT_NEAR(p[0], 1.0, 0.2);
  for (int k = 40; k < 50; ++k) p = f.step(p, 0.1 * k, 0.1, quiet(1.0), rng);
  EXPECT_NEAR(p[0], 1.0, 0.21);
  for (int k = 50; k < 100; ++k) p = f.step(p, 0.1 * k, 0.1, quiet(1.0), rng);
  EXPECT_TRUE(f.finished());
}

TEST(FlightPlan, ConservativeIsOneHullThenLanding) {
  const auto c = make_ov(Strategy::kConservative, {0, 0, 1}, 3.0, {{10, 0, 1}}, quiet(1.0));
  ASSERT_EQ(c.len(), 2u);
  EXPECT_EQ(c.times(), (std::vector<double>{3.0, 18.0}));
  ASSERT_EQ(c.pairs()[0].region.size(), 1u);
  EXPECT_EQ(c.pairs()[0].region.boxes()[0], Box({-1, -1, 0}, {11, 1, 2}));
  EXPECT_EQ(c.pairs()[1].region.boxes()[0], Box({9, -1, 0}, {11, 1, 2}));
}

TEST(FlightPlan, AggressiveLegsSitInsideConservative) {
  const std::vector<Vec3> wps{{0, 0, 5}, {20, 0, 5}, {20, 0, 1}};
  const Vec3 start{0, 0, 1};
  const auto fc = make_flight_plan(Strategy::kConservative, start, 0, wps, quiet());
  const auto fa = make_flight_plan(Strategy::kAggressive, start, 0, wps, quiet());
  EXPECT_EQ(fa.ov.len(), 4u);
  EXPECT_EQ(fa.ov.t_last(), fc.ov.t_last());
  const Box outer = fc.ov.pairs()[0].region.boxes()[0];
  for (std::size_t i = 0; i + 1 < fa.ov.len(); ++i) {
    const Box b = fa.ov.pairs()[i].region.boxes()[0];
    EXPECT_TRUE(outer.contains(b));
    EXPECT_LT(b.volume(), outer.volume());
  }
  EXPECT_TRUE(refines(fa.ov, fc.ov));
  EXPECT_FALSE(refines(fc.ov, fa.ov));
  EXPECT_EQ(fa.release, (std::vector<double>{0, 3, 18}));
}

TEST(FlightPlan, ZeroLengthLegIsSkipped) {
  const auto c = make_ov(Strategy::kAggressive, {0, 0, 1}, 0, {{0, 0, 1}, {4, 0, 1}}, quiet());
  EXPECT_EQ(c.times(), (std::vector<double>{0, 3}));
}

TEST(Reachtube, SingleSampleIsTraceHull) {
  const Box start = Box::around({0, 0, 1}, 0);
  const auto traces = sample_traces(start, {{4, 0, 1}}, quiet(), 1, 0.1);
  const auto tube = build_reachtube(start, traces, 1.0, 0.0);
  for (const auto& p : traces[0]) {
    const auto m = tube.bin_index(p.t);
    ASSERT_GE(m, 0);
    EXPECT_TRUE(tube.bins[static_cast<std::size_t>(m)].bound.contains(p.pos));
  }
  EXPECT_EQ(tube.bins.front().bound.lo[0], 0.0);
}

TEST(Reachtube, ContainsAllEstimationTraces) {
  VehicleParams p;
  p.seed = 4;
  const Box start = Box::around({0, 0, 1}, 0.2);
  const std::vector<Vec3> wps{{0, 0, 5}, {10, 5, 5}, {10, 5, 1}};
  const auto traces = sample_traces(start, wps, p, 30, 0.1);
  for (double bloat : {0.0, 0.1}) {
    const auto tube = build_reachtube(start, traces, 0.5, bloat);
    for (const auto& tr : traces) {
      for (const auto& pt : tr) {
        const auto m = tube.bin_index(pt.t);
        ASSERT_GE(m, 0);
        ASSERT_TRUE(tube.bins[static_cast<std::size_t>(m)].bound.contains(pt.pos));
      }
    }
  }
  const auto thin = build_reachtube(start, traces, 0.5, 0.0);
  const auto fat = build_reachtube(start, traces, 0.5, 0.3);
  for (std::size_t m = 0; m < thin.bins.size(); ++m) {
    EXPECT_TRUE(fat.bins[m].bound.contains(thin.bins[m].bound));
  }
}

TEST(Reachtube, ToOperationVolume) {
  const Box start = Box::around({0, 0, 1}, 0.2);
  const Box air({-60, -60, 0}, {60, 60, 20});
  const auto tube = estimate_reachtube(start, {{6, 0, 1}}, quiet(), 5, 0.5, 0.1);
  const double t1 = tube.t_start() + 1.0;
  const auto c = reachtube_to_ov(tube, {t1}, air);
  EXPECT_EQ(c.times(), (std::vector<double>{kNegInf, tube.t_start(), t1, tube.t_end()}));
  EXPECT_EQ(c.pairs().back().region.boxes()[0], air);
  const auto lb = reachtube_to_ov(tube, {}, air, TailMode::kLastBin);
  EXPECT_EQ(lb.pairs().back().region.boxes()[0], tube.bins.back().bound);
  for (const auto& bin : tube.bins) {
    const Vec3 mid{(bin.bound.lo[0] + bin.bound.hi[0]) / 2, 0, 1};
    EXPECT_TRUE(contains(c, {mid, bin.t_a}));
  }
  EXPECT_THROW(reachtube_to_ov(tube, {tube.t_start()}, air), std::invalid_argument);
  EXPECT_THROW(reachtube_to_ov(Reachtube{}, {}, air), std::invalid_argument);
}

}  // namespace
}  // namespace utm
