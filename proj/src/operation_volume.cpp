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

#include "utm/operation_volume.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

namespace utm {

OperationVolume::OperationVolume(std::vector<VolumePair> pairs) : pairs_(std::move(pairs)) {
  if (pairs_.empty()) throw InvalidVolume("operation volume needs at least one pair");
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    const double t = pairs_[i].time;
    if (std::isnan(t) || t == std::numeric_limits<double>::infinity()) {
      throw InvalidVolume("operation volume time must be finite or -inf");
    }
    if (i > 0) {
      if (is_neg_inf(t)) throw InvalidVolume("-inf is only allowed as the first time point");
      if (!(pairs_[i - 1].time < t)) throw InvalidVolume("time points must be strictly increasing");
    }
  }
}

OperationVolume::OperationVolume(BoxSet region, TimePoint t)
    : OperationVolume(std::vector<VolumePair>{{std::move(region), t}}) {}

BoxSet OperationVolume::r_all() const {
  BoxSet out;
  for (const auto& p : pairs_) out = set_union(out, p.region);
  return out;
}

double OperationVolume::dur() const {
  if (is_neg_inf(t_first())) throw InvalidVolume("duration undefined for a -inf start");
  return t_last() - t_first();
}

std::size_t OperationVolume::rect_count() const {
  std::size_t n = 0;
  for (const auto& p : pairs_) n += p.region.size();
  return n;
}

std::vector<TimePoint> OperationVolume::times() const {
  std::vector<TimePoint> out;
  out.reserve(pairs_.size());
  for (const auto& p : pairs_) out.push_back(p.time);
  return out;
}

std::ptrdiff_t OperationVolume::active_index(double t) const {
  // First pair whose time is > t, then step back one.
  auto it = std::upper_bound(pairs_.begin(), pairs_.end(), t,
                             [](double v, const VolumePair& p) { return v < p.time; });
  return std::distance(pairs_.begin(), it) - 1;
}

bool contains(const OperationVolume& c, const SpaceTimePoint& p) {
  const auto i = c.active_index(p.time);
  if (i < 0) return false;
  return c[static_cast<std::size_t>(i)].region.contains(p.position);
}

OperationVolume insert(const OperationVolume& c, TimePoint t) {
  auto pairs = c.pairs();
  if (t < c.t_first()) {
    // prepend
    pairs.insert(pairs.begin(), VolumePair{BoxSet{}, t});
    return OperationVolume(std::move(pairs));
  }
  if (t > c.t_last()) {
    // append
    pairs.push_back(VolumePair{c.r_last(), t});
    return OperationVolume(std::move(pairs));
  }
  const auto i = static_cast<std::size_t>(c.active_index(t));
  if (pairs[i].time == t) return c;
  // split: T_i < t < T_{i+1}
  pairs.insert(pairs.begin() + static_cast<std::ptrdiff_t>(i) + 1, VolumePair{pairs[i].region, t});
  return OperationVolume(std::move(pairs));
}

namespace {

// Region sequence of `c` over an ascending superset of its time points.
// Equivalent to inserting every point of `grid` into `c`.
OperationVolume expand_to(const OperationVolume& c, const std::vector<TimePoint>& grid) {
  OperationVolume out = c;
  for (TimePoint t : grid) out = insert(out, t);
  return out;
}

}  // namespace

std::pair<OperationVolume, OperationVolume> align(const OperationVolume& a,
                                                  const OperationVolume& b) {
  if (a.times() == b.times()) return {a, b};
  std::vector<TimePoint> grid;
  const auto ta = a.times();
  const auto tb = b.times();
  std::set_union(ta.begin(), ta.end(), tb.begin(), tb.end(), std::back_inserter(grid));
  return {expand_to(a, grid), expand_to(b, grid)};
}

OperationVolume combine(const OperationVolume& a, const OperationVolume& b, SetOp op) {
  const auto [xa, xb] = align(a, b);
  std::vector<VolumePair> out;
  out.reserve(xa.len());
  for (std::size_t i = 0; i < xa.len(); ++i) {
    out.push_back(VolumePair{boxset_op(xa[i].region, xb[i].region, op), xa[i].time});
  }
  return OperationVolume(std::move(out));
}

bool is_empty(const OperationVolume& c) {
  return std::all_of(c.pairs().begin(), c.pairs().end(),
                     [](const VolumePair& p) { return p.region.empty(); });
}

bool disjoint(const OperationVolume& a, const OperationVolume& b) {
  return is_empty(combine(a, b, SetOp::kIntersect));
}

bool refines(const OperationVolume& a, const OperationVolume& b) {
  return is_empty(combine(a, b, SetOp::kDifference));
}

bool equivalent(const OperationVolume& a, const OperationVolume& b) {
  return refines(a, b) && refines(b, a);
}

OperationVolume reschedule(const OperationVolume& c, double delta) {
  if (is_neg_inf(c.t_first())) {
    throw InvalidVolume("cannot reschedule a volume starting at -inf; trim it first");
  }
  if (!std::isfinite(delta) || delta < 0.0) {
    throw std::invalid_argument("reschedule delta must be finite and nonnegative");
  }
  auto pairs = c.pairs();
  for (auto& p : pairs) p.time += delta;
  return OperationVolume(std::move(pairs));
}

OperationVolume trim_neg_inf(const OperationVolume& c) {
  if (!is_neg_inf(c.t_first()) || c.len() < 2) return c;
  return OperationVolume(std::vector<VolumePair>(c.pairs().begin() + 1, c.pairs().end()));
}

OperationVolume simplify(const OperationVolume& c) {
  std::vector<VolumePair> out;
  out.reserve(c.len());
  for (const auto& p : c.pairs()) {
    BoxSet region = p.region.pruned();
    if (out.empty() && region.empty()) {
      // Leading empties contribute nothing; keep the time only if it is the
      // last pair standing.
      continue;
    }
    if (!out.empty() && out.back().region == region) continue;
    out.push_back(VolumePair{std::move(region), p.time});
  }
  if (out.empty()) return OperationVolume(BoxSet{}, c.t_first());
  return OperationVolume(std::move(out));
}

OperationVolume tail(const OperationVolume& c) { return OperationVolume(c.r_last(), c.t_last()); }

}  // namespace utm
