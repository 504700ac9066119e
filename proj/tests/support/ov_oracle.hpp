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

// Brute-force reference semantics for operation volumes. Nothing here calls
// into the library's set algebra: membership is a direct scan over the raw
// pairs and boxes.

#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "utm/geometry.hpp"
#include "utm/operation_volume.hpp"

namespace oracle {

using utm::Box;
using utm::BoxSet;
using utm::OperationVolume;
using utm::SetOp;
using utm::Vec3;
using Rng = std::mt19937_64;

inline bool in_range(double v, double lo, double hi, bool lo_open, bool hi_open) {
  const bool above = lo_open ? v > lo : v >= lo;
  const bool below = hi_open ? v < hi : v <= hi;
  return above && below;
}

inline bool box_has(const Box& b, const Vec3& p) {
  for (int a = 0; a < 3; ++a) {
    if (!in_range(p[a], b.lo[a], b.hi[a], b.lo_open[a], b.hi_open[a])) return false;
  }
  return true;
}

inline bool region_has(const BoxSet& r, const Vec3& p) {
  for (const auto& b : r.boxes()) {
    if (box_has(b, p)) return true;
  }
  return false;
}

/// Index of the pair active at `t` by linear scan, or -1 before the start.
inline int active(const OperationVolume& c, double t) {
  int idx = -1;
  for (std::size_t k = 0; k < c.len(); ++k) {
    if (c[k].time <= t) idx = static_cast<int>(k);
  }
  return idx;
}

inline bool ov_has(const OperationVolume& c, const Vec3& p, double t) {
  const int k = active(c, t);
  return k >= 0 && region_has(c[static_cast<std::size_t>(k)].region, p);
}

inline bool op_has(SetOp op, bool a, bool b) {
  switch (op) {
    case SetOp::kIntersect:
      return a && b;
    case SetOp::kUnion:
      return a || b;
    case SetOp::kDifference:
      return a && !b;
  }
  return false;
}

struct OvShape {
  int max_pairs = 4;
  int max_boxes = 2;
  double coord_hi = 20.0;
  double time_hi = 100.0;
  double neg_inf_prob = 0.1;
};

/// Uniform multiple of 0.5 in [lo, hi].
inline double half_step(Rng& rng, double lo, double hi) {
  std::uniform_int_distribution<int> d(static_cast<int>(lo * 2), static_cast<int>(hi * 2));
  return d(rng) * 0.5;
}

inline Box random_box(Rng& rng, double coord_hi) {
  Vec3 lo{}, hi{};
  for (int a = 0; a < 3; ++a) {
    double u = half_step(rng, 0.0, coord_hi);
    double v = half_step(rng, 0.0, coord_hi);
    if (u > v) std::swap(u, v);
    lo[a] = u;
    hi[a] = v;
  }
  return Box(lo, hi);
}

inline OperationVolume random_ov(Rng& rng, const OvShape& s = {}) {
  std::uniform_int_distribution<int> np(1, s.max_pairs);
  std::uniform_int_distribution<int> nb(0, s.max_boxes);
  std::bernoulli_distribution neg(s.neg_inf_prob);
  const int k = np(rng);
  std::set<double> ts;
  while (static_cast<int>(ts.size()) < k) ts.insert(half_step(rng, 0.0, s.time_hi));
  std::vector<utm::VolumePair> pairs;
  for (double t : ts) {
    BoxSet r;
    const int m = nb(rng);
    for (int i = 0; i < m; ++i) r.add(random_box(rng, s.coord_hi));
    pairs.push_back({r, t});
  }
  if (neg(rng)) pairs.front().time = utm::kNegInf;
  return OperationVolume(std::move(pairs));
}

/// Every box face of the given regions, with the grid neighbours on either
/// side. On a 0.5 grid whose faces are grid values, any grid value has the
/// same position relative to all faces as one of these representatives.
inline std::vector<double> axis_reps(const std::vector<const BoxSet*>& regions, int axis,
                                     double lo_end, double hi_end) {
  std::set<double> v{lo_end, hi_end};
  for (const auto* r : regions) {
    for (const auto& b : r->boxes()) {
      for (double f : {b.lo[axis], b.hi[axis]}) {
        for (double d : {-0.5, 0.0, 0.5}) v.insert(f + d);
      }
    }
  }
  std::vector<double> out;
  for (double x : v) {
    if (x >= lo_end && x <= hi_end) out.push_back(x);
  }
  return out;
}

/// Time representatives within [t_lo, t_hi] plus the far tail sample.
inline std::vector<double> time_reps(const std::vector<const OperationVolume*>& ovs, double t_lo,
                                     double t_hi, double tail = 1e6) {
  std::set<double> v{t_lo, t_hi};
  for (const auto* c : ovs) {
    for (const auto& p : c->pairs()) {
      if (utm::is_neg_inf(p.time)) continue;
      for (double d : {-0.5, 0.0, 0.5}) v.insert(p.time + d);
    }
  }
  std::vector<double> out;
  for (double t : v) {
    if (t >= t_lo && t <= t_hi) out.push_back(t);
  }
  out.push_back(tail);
  return out;
}

/// Calls `f(p, t)` on one representative of every grid class induced by
/// `ovs`: coordinates in [lo_end, hi_end], times in [t_lo, t_hi] plus the tail.
template <class F>
void for_each_class_point(const std::vector<const OperationVolume*>& ovs, double lo_end,
                          double hi_end, double t_lo, double t_hi, F&& f) {
  for (double t : time_reps(ovs, t_lo, t_hi)) {
    std::vector<const BoxSet*> regions;
    for (const auto* c : ovs) {
      const int k = active(*c, t);
      if (k >= 0) regions.push_back(&(*c)[static_cast<std::size_t>(k)].region);
    }
    std::array<std::vector<double>, 3> reps;
    for (int a = 0; a < 3; ++a) reps[a] = axis_reps(regions, a, lo_end, hi_end);
    for (double x : reps[0]) {
      for (double y : reps[1]) {
        for (double z : reps[2]) f(Vec3{x, y, z}, t);
      }
    }
  }
}

/// Union volume of a box set by inclusion of sample cell centres; exact when
/// all faces lie on multiples of `cell`.
inline double grid_volume(const BoxSet& r, const Box& frame, double cell) {
  double vol = 0.0;
  for (double x = frame.lo[0] + cell / 2; x < frame.hi[0]; x += cell) {
    for (double y = frame.lo[1] + cell / 2; y < frame.hi[1]; y += cell) {
      for (double z = frame.lo[2] + cell / 2; z < frame.hi[2]; z += cell) {
        if (region_has(r, {x, y, z})) vol += cell * cell * cell;
      }
    }
  }
  return vol;
}

}  // namespace oracle
