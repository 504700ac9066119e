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

#include "utm/vehicle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace utm {

void VehicleParams::validate() const {
  if (!(speed > 0.0)) throw std::invalid_argument("vehicle speed must be positive");
  if (!(waypoint_tol > 0.0)) throw std::invalid_argument("waypoint tolerance must be positive");
  if (!(noise_sigma >= 0.0)) throw std::invalid_argument("noise sigma must be nonnegative");
}

std::string to_string(Strategy s) {
  return s == Strategy::kConservative ? "conservative" : "aggressive";
}

Strategy strategy_from_string(const std::string& s) {
  if (s == "conservative" || s == "Conservative") return Strategy::kConservative;
  if (s == "aggressive" || s == "Aggressive") return Strategy::kAggressive;
  throw std::invalid_argument("unknown strategy: " + s);
}

double truncated_noise(double sigma, Rng& rng) {
  if (sigma <= 0.0) return 0.0;
  std::normal_distribution<double> n(0.0, sigma);
  for (;;) {
    const double x = n(rng);
    if (std::abs(x) <= 3.0 * sigma) return x;
  }
}

Vec3 step_vehicle(const Vec3& pos, const VehicleParams& params, const Vec3& target, double dt,
                  Rng& rng) {
  if (dt < 0.0) throw std::invalid_argument("step_vehicle: negative dt");
  if (dt == 0.0) return pos;
  Vec3 out = pos;
  const double d = distance(pos, target);
  const double reach = params.speed * dt;
  if (d <= reach) {
    out = target;
  } else if (d > 0.0) {
    const double f = reach / d;
    for (int a = 0; a < 3; ++a) out[a] += (target[a] - pos[a]) * f;
  }
  for (int a = 0; a < 3; ++a) out[a] += truncated_noise(params.noise_sigma, rng);
  return out;
}

WaypointFollower::WaypointFollower(const Vec3& hold, std::vector<Vec3> waypoints,
                                   std::vector<double> release)
    : hold_(hold), waypoints_(std::move(waypoints)), release_(std::move(release)) {
  if (release_.size() != waypoints_.size()) {
    throw std::invalid_argument("WaypointFollower: one release time per waypoint");
  }
}

Vec3 WaypointFollower::step(const Vec3& pos, double t_start, double dt,
                            const VehicleParams& params, Rng& rng) {
  const bool go = next_ < waypoints_.size() && t_start >= release_[next_];
  const Vec3 target = go ? waypoints_[next_] : hold_;
  Vec3 out = step_vehicle(pos, params, target, dt, rng);
  if (go && distance(out, target) <= params.waypoint_tol) {
    hold_ = target;
    ++next_;
  }
  return out;
}

FlightPlan make_flight_plan(Strategy strategy, const Vec3& pos, double clk,
                            const std::vector<Vec3>& waypoints, const VehicleParams& vehicle,
                            const PlanParams& plan) {
  if (waypoints.empty()) throw std::invalid_argument("make_flight_plan: no waypoints");
  vehicle.validate();

  FlightPlan fp;
  fp.waypoints = waypoints;
  const Box landing = Box::around(waypoints.back(), plan.bloat);

  // Window start of each leg, leg i running from point i to point i+1 of
  // [pos, waypoints...].
  std::vector<Vec3> pts;
  pts.reserve(waypoints.size() + 1);
  pts.push_back(pos);
  pts.insert(pts.end(), waypoints.begin(), waypoints.end());
  std::vector<double> leg_start(waypoints.size());
  double t = clk;
  for (std::size_t i = 0; i < waypoints.size(); ++i) {
    leg_start[i] = t;
    t += plan.slack * distance(pts[i], pts[i + 1]) / vehicle.speed;
  }
  const double t_end = t;

  std::vector<VolumePair> pairs;
  if (strategy == Strategy::kConservative) {
    fp.release.assign(waypoints.size(), clk);
    if (t_end > clk) pairs.push_back({BoxSet{Box::hull(pts, plan.bloat)}, clk});
  } else {
    fp.release = leg_start;
    for (std::size_t i = 0; i < waypoints.size(); ++i) {
      const double next = i + 1 < waypoints.size() ? leg_start[i + 1] : t_end;
      if (!(next > leg_start[i])) continue;  // zero-length leg
      const std::array<Vec3, 2> ends{pts[i], pts[i + 1]};
      pairs.push_back({BoxSet{Box::hull(ends, plan.bloat)}, leg_start[i]});
    }
  }
  pairs.push_back({BoxSet{landing}, t_end});
  fp.ov = OperationVolume(std::move(pairs));
  return fp;
}

OperationVolume make_ov(Strategy strategy, const Vec3& pos, double clk,
                        const std::vector<Vec3>& waypoints, const VehicleParams& vehicle,
                        const PlanParams& plan) {
  return make_flight_plan(strategy, pos, clk, waypoints, vehicle, plan).ov;
}

std::ptrdiff_t Reachtube::bin_index(double t) const {
  if (bins.empty() || t < t_start() || t >= t_end()) return -1;
  const double w = bins.front().t_b - bins.front().t_a;
  auto m = static_cast<std::ptrdiff_t>(std::floor((t - t_start()) / w));
  const auto n = static_cast<std::ptrdiff_t>(bins.size());
  m = std::clamp<std::ptrdiff_t>(m, 0, n - 1);
  while (m > 0 && t < bins[static_cast<std::size_t>(m)].t_a) --m;
  while (m + 1 < n && t >= bins[static_cast<std::size_t>(m)].t_b) ++m;
  return m;
}

std::vector<Trace> sample_traces(const Box& start_box, const std::vector<Vec3>& waypoints,
                                 const VehicleParams& params, int n_samples, double dt,
                                 double t0) {
  if (n_samples < 1) throw std::invalid_argument("sample_traces: need at least one sample");
  if (!(dt > 0.0)) throw std::invalid_argument("sample_traces: dt must be positive");
  params.validate();

  struct Run {
    Rng rng;
    WaypointFollower follower;
    Vec3 pos;
    Trace trace;
  };
  std::vector<Run> runs;
  runs.reserve(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) {
    std::seed_seq seq{params.seed, static_cast<std::uint64_t>(i)};
    Rng rng(seq);
    Vec3 start{};
    for (int a = 0; a < 3; ++a) {
      std::uniform_real_distribution<double> u(start_box.lo[a], start_box.hi[a]);
      start[a] = start_box.lo[a] == start_box.hi[a] ? start_box.lo[a] : u(rng);
    }
    WaypointFollower f(start, waypoints, std::vector<double>(waypoints.size(), t0));
    runs.push_back(Run{std::move(rng), std::move(f), start, Trace{{t0, start}}});
  }

  double path = 0.0;
  for (std::size_t i = 0; i < waypoints.size(); ++i) {
    path += distance(i == 0 ? start_box.lo : waypoints[i - 1], waypoints[i]);
  }
  const auto max_steps = static_cast<std::size_t>(20.0 * (path / params.speed) / dt) + 10000;

  for (std::size_t k = 1; k <= max_steps; ++k) {
    const bool all_done = std::all_of(runs.begin(), runs.end(),
                                      [](const Run& r) { return r.follower.finished(); });
    if (all_done) break;
    const double t_prev = t0 + static_cast<double>(k - 1) * dt;
    const double t_now = t0 + static_cast<double>(k) * dt;
    for (auto& r : runs) {
      r.pos = r.follower.step(r.pos, t_prev, dt, params, r.rng);
      r.trace.push_back({t_now, project(r.pos)});
    }
  }

  std::vector<Trace> out;
  out.reserve(runs.size());
  for (auto& r : runs) out.push_back(std::move(r.trace));
  return out;
}

Reachtube build_reachtube(const Box& start_box, std::span<const Trace> traces, double bin_width,
                          double bloat) {
  if (!(bin_width > 0.0)) throw std::invalid_argument("build_reachtube: bin width must be positive");
  if (bloat < 0.0) throw std::invalid_argument("build_reachtube: bloat must be nonnegative");
  double t0 = std::numeric_limits<double>::infinity();
  double t1 = -std::numeric_limits<double>::infinity();
  for (const auto& tr : traces) {
    for (const auto& p : tr) {
      t0 = std::min(t0, p.t);
      t1 = std::max(t1, p.t);
    }
  }
  if (!(t0 <= t1)) throw std::invalid_argument("build_reachtube: no trace points");

  Reachtube tube;
  tube.initial = start_box;
  const auto n_bins = static_cast<std::size_t>(std::floor((t1 - t0) / bin_width)) + 1;
  tube.bins.resize(n_bins);
  for (std::size_t m = 0; m < n_bins; ++m) {
    tube.bins[m].t_a = t0 + static_cast<double>(m) * bin_width;
    tube.bins[m].t_b = t0 + static_cast<double>(m + 1) * bin_width;
  }
  // Float rounding can leave the last point on the closing boundary.
  while (tube.bins.back().t_b <= t1) {
    const double a = tube.bins.back().t_b;
    tube.bins.push_back(TubeBin{a, a + bin_width, Box{}});
  }

  std::vector<std::vector<Vec3>> pts(tube.bins.size());
  for (const auto& tr : traces) {
    for (const auto& p : tr) {
      const auto m = tube.bin_index(p.t);
      pts[static_cast<std::size_t>(m)].push_back(p.pos);
    }
  }
  std::optional<Box> prev;
  for (std::size_t m = 0; m < tube.bins.size(); ++m) {
    if (!pts[m].empty()) prev = Box::hull(pts[m]);
    if (!prev) {
      // Leading bins with no samples inherit the first populated bound.
      for (std::size_t k = m; k < pts.size() && !prev; ++k) {
        if (!pts[k].empty()) prev = Box::hull(pts[k]);
      }
    }
    tube.bins[m].bound = prev->expanded(bloat);
  }
  return tube;
}

Reachtube estimate_reachtube(const Box& start_box, const std::vector<Vec3>& waypoints,
                             const VehicleParams& params, int n_samples, double bin_width,
                             double bloat, double dt) {
  const auto traces = sample_traces(start_box, waypoints, params, n_samples, dt);
  return build_reachtube(start_box, traces, bin_width, bloat);
}

OperationVolume reachtube_to_ov(const Reachtube& tube, const std::vector<TimePoint>& splits,
                                const Box& airspace, TailMode tail_mode) {
  if (tube.bins.empty()) throw std::invalid_argument("reachtube_to_ov: empty tube");
  std::vector<double> bounds{tube.t_start()};
  for (double s : splits) {
    if (!(s > bounds.back()) || s > tube.t_end()) {
      throw std::invalid_argument("reachtube_to_ov: splits must increase within the horizon");
    }
    bounds.push_back(s);
  }
  if (bounds.back() < tube.t_end()) bounds.push_back(tube.t_end());

  std::vector<VolumePair> pairs;
  pairs.push_back({BoxSet{tube.initial}, kNegInf});
  for (std::size_t m = 0; m + 1 < bounds.size(); ++m) {
    std::optional<Box> region;
    for (const auto& bin : tube.bins) {
      if (bin.t_a < bounds[m + 1] && bin.t_b > bounds[m]) {
        region = region ? hull(*region, bin.bound) : bin.bound;
      }
    }
    pairs.push_back({BoxSet{*region}, bounds[m]});
  }
  const Box last = tail_mode == TailMode::kAirspace ? airspace : tube.bins.back().bound;
  pairs.push_back({BoxSet{last}, bounds.back()});
  return OperationVolume(std::move(pairs));
}

nlohmann::json tube_to_json(const Reachtube& tube) {
  auto out = nlohmann::json::array();
  for (const auto& b : tube.bins) {
    out.push_back({{"t_a", b.t_a}, {"t_b", b.t_b}, {"lo", b.bound.lo}, {"hi", b.bound.hi}});
  }
  return out;
}

}  // namespace utm
