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

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "utm/geometry.hpp"
#include "utm/operation_volume.hpp"

namespace utm {

using Rng = std::mt19937_64;

/// Point-mass waypoint follower.
struct VehicleParams {
  double speed = 2.0;          // m/s
  double waypoint_tol = 0.2;   // m
  double noise_sigma = 0.02;   // m per tick, per axis
  std::uint64_t seed = 0;

  void validate() const;
};

/// Margins used when turning waypoints into operation volumes.
struct PlanParams {
  double bloat = 1.0;  // m on every face
  double slack = 1.5;  // multiplier on nominal travel time
};

enum class Strategy { kConservative, kAggressive };

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& s);

/// Gaussian sample truncated at three standard deviations.
double truncated_noise(double sigma, Rng& rng);

/// Moves `min(speed*dt, distance)` straight at `target`, then adds per-axis
/// noise.
Vec3 step_vehicle(const Vec3& pos, const VehicleParams& params, const Vec3& target, double dt,
                  Rng& rng);

/// Follows waypoints, each held back until its release time. Before the next
/// release the vehicle station-keeps on the last reached point.
class WaypointFollower {
 public:
  WaypointFollower() = default;
  WaypointFollower(const Vec3& hold, std::vector<Vec3> waypoints, std::vector<double> release);

  /// Advances one tick that starts at `t_start`.
  Vec3 step(const Vec3& pos, double t_start, double dt, const VehicleParams& params, Rng& rng);
  bool finished() const { return next_ >= waypoints_.size(); }
  std::size_t next_index() const { return next_; }

 private:
  Vec3 hold_{};
  std::vector<Vec3> waypoints_;
  std::vector<double> release_;
  std::size_t next_ = 0;
};

/// An operation volume together with the departure schedule that makes the
/// vehicle honour it.
struct FlightPlan {
  OperationVolume ov{BoxSet{}, kNegInf};
  std::vector<Vec3> waypoints;
  std::vector<double> release;
};

/// Conservative: one bloated hull of the start and all waypoints from `clk`,
/// then the landing box once the slack-scaled travel time has elapsed.
/// Aggressive: one bloated segment hull per leg with its own slack-scaled
/// window, then the landing box. Conservative releases every waypoint at
/// `clk`; Aggressive releases each leg at its window start.
FlightPlan make_flight_plan(Strategy strategy, const Vec3& pos, double clk,
                            const std::vector<Vec3>& waypoints, const VehicleParams& vehicle,
                            const PlanParams& plan = {});

OperationVolume make_ov(Strategy strategy, const Vec3& pos, double clk,
                        const std::vector<Vec3>& waypoints, const VehicleParams& vehicle,
                        const PlanParams& plan = {});

struct TracePoint {
  double t = 0.0;
  Vec3 pos{};
};

using Trace = std::vector<TracePoint>;

struct TubeBin {
  double t_a = 0.0;
  double t_b = 0.0;
  Box bound;
};

/// Time-binned bounding boxes over sampled traces. `initial` is the set the
/// traces start from.
struct Reachtube {
  Box initial;
  std::vector<TubeBin> bins;

  double t_start() const { return bins.front().t_a; }
  double t_end() const { return bins.back().t_b; }
  /// Bin whose half-open interval holds `t`, or -1.
  std::ptrdiff_t bin_index(double t) const;
};

/// Identity projection from point-mass state to airspace coordinates.
inline Vec3 project(const Vec3& state) { return state; }

/// Simulates `n_samples` seeded traces from uniform starts in `start_box`,
/// each running until every waypoint is reached and then padded by
/// station-keeping to a common horizon.
std::vector<Trace> sample_traces(const Box& start_box, const std::vector<Vec3>& waypoints,
                                 const VehicleParams& params, int n_samples, double dt,
                                 double t0 = 0.0);

Reachtube build_reachtube(const Box& start_box, std::span<const Trace> traces, double bin_width,
                          double bloat);

Reachtube estimate_reachtube(const Box& start_box, const std::vector<Vec3>& waypoints,
                             const VehicleParams& params, int n_samples, double bin_width,
                             double bloat, double dt = 0.1);

enum class TailMode { kAirspace, kLastBin };

/// `(initial, -inf), (hull of bins over [b_0, b_1), b_0), ..., (tail, t_end)`
/// where `b_0` is the tube start, `b_1..` are `splits`, and `t_end` closes the
/// horizon.
OperationVolume reachtube_to_ov(const Reachtube& tube, const std::vector<TimePoint>& splits,
                                const Box& airspace, TailMode tail = TailMode::kAirspace);

/// Per-bin `{t_a, t_b, lo, hi}` records.
nlohmann::json tube_to_json(const Reachtube& tube);

}  // namespace utm
