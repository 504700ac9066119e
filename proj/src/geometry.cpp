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

#include "utm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace utm {

double distance(const Vec3& a, const Vec3& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  const double dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

Box Box::around(const Vec3& c, double r) {
  return Box({c[0] - r, c[1] - r, c[2] - r}, {c[0] + r, c[1] + r, c[2] + r});
}

Box Box::hull(std::span<const Vec3> pts, double bloat) {
  if (pts.empty()) throw std::invalid_argument("Box::hull: no points");
  Vec3 lo = pts.front();
  Vec3 hi = pts.front();
  for (const auto& p : pts) {
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], p[a]);
      hi[a] = std::max(hi[a], p[a]);
    }
  }
  return Box(lo, hi).expanded(bloat);
}

bool Box::empty() const {
  for (int a = 0; a < 3; ++a) {
    if (lo[a] > hi[a]) return true;
    if (lo[a] == hi[a] && (lo_open[a] || hi_open[a])) return true;
  }
  return false;
}

bool Box::closed() const {
  for (int a = 0; a < 3; ++a) {
    if (lo_open[a] || hi_open[a]) return false;
  }
  return true;
}

bool Box::contains(const Vec3& p) const {
  for (int a = 0; a < 3; ++a) {
    if (lo_open[a] ? !(p[a] > lo[a]) : !(p[a] >= lo[a])) return false;
    if (hi_open[a] ? !(p[a] < hi[a]) : !(p[a] <= hi[a])) return false;
  }
  return true;
}

bool Box::contains(const Box& o) const {
  for (int a = 0; a < 3; ++a) {
    if (o.lo[a] < lo[a]) return false;
    if (o.lo[a] == lo[a] && lo_open[a] && !o.lo_open[a]) return false;
    if (o.hi[a] > hi[a]) return false;
    if (o.hi[a] == hi[a] && hi_open[a] && !o.hi_open[a]) return false;
  }
  return true;
}

double Box::volume() const {
  if (empty()) return 0.0;
  return (hi[0] - lo[0]) * (hi[1] - lo[1]) * (hi[2] - lo[2]);
}

Box Box::expanded(double by) const {
  Box out = *this;
  for (int a = 0; a < 3; ++a) {
    out.lo[a] -= by;
    out.hi[a] += by;
  }
  return out;
}

std::optional<Box> intersect(const Box& a, const Box& b) {
  Box out;
  for (int ax = 0; ax < 3; ++ax) {
    if (a.lo[ax] > b.lo[ax]) {
      out.lo[ax] = a.lo[ax];
      out.lo_open[ax] = a.lo_open[ax];
    } else if (b.lo[ax] > a.lo[ax]) {
      out.lo[ax] = b.lo[ax];
      out.lo_open[ax] = b.lo_open[ax];
    } else {
      out.lo[ax] = a.lo[ax];
      out.lo_open[ax] = a.lo_open[ax] || b.lo_open[ax];
    }
    if (a.hi[ax] < b.hi[ax]) {
      out.hi[ax] = a.hi[ax];
      out.hi_open[ax] = a.hi_open[ax];
    } else if (b.hi[ax] < a.hi[ax]) {
      out.hi[ax] = b.hi[ax];
      out.hi_open[ax] = b.hi_open[ax];
    } else {
      out.hi[ax] = a.hi[ax];
      out.hi_open[ax] = a.hi_open[ax] || b.hi_open[ax];
    }
  }
  if (out.empty()) return std::nullopt;
  return out;
}

std::vector<Box> subtract(const Box& a, const Box& b) {
  if (a.empty()) return {};
  const auto common = intersect(a, b);
  if (!common) return {a};

  std::vector<Box> out;
  Box rest = a;
  for (int ax = 0; ax < 3; ++ax) {
    // Slab of `rest` strictly below b on this axis.
    Box below = rest;
    below.hi[ax] = common->lo[ax];
    below.hi_open[ax] = !common->lo_open[ax];
    if (!below.empty()) out.push_back(below);

    Box above = rest;
    above.lo[ax] = common->hi[ax];
    above.lo_open[ax] = !common->hi_open[ax];
    if (!above.empty()) out.push_back(above);

    rest.lo[ax] = common->lo[ax];
    rest.lo_open[ax] = common->lo_open[ax];
    rest.hi[ax] = common->hi[ax];
    rest.hi_open[ax] = common->hi_open[ax];
  }
  return out;
}

Box hull(const Box& a, const Box& b) {
  Box out;
  for (int ax = 0; ax < 3; ++ax) {
    out.lo[ax] = std::min(a.lo[ax], b.lo[ax]);
    out.hi[ax] = std::max(a.hi[ax], b.hi[ax]);
  }
  return out;
}

BoxSet::BoxSet(std::initializer_list<Box> boxes) {
  for (const auto& b : boxes) add(b);
}

BoxSet::BoxSet(std::vector<Box> boxes) {
  boxes_.reserve(boxes.size());
  for (auto& b : boxes) add(b);
}

bool BoxSet::contains(const Vec3& p) const {
  return std::any_of(boxes_.begin(), boxes_.end(),
                     [&](const Box& b) { return b.contains(p); });
}

void BoxSet::add(const Box& b) {
  if (!b.empty()) boxes_.push_back(b);
}

BoxSet BoxSet::pruned() const {
  std::vector<Box> kept;
  kept.reserve(boxes_.size());
  for (std::size_t i = 0; i < boxes_.size(); ++i) {
    bool covered = false;
    for (std::size_t j = 0; j < boxes_.size() && !covered; ++j) {
      if (i == j) continue;
      if (!boxes_[j].contains(boxes_[i])) continue;
      // Identical boxes: keep the first occurrence only.
      covered = !(boxes_[i].contains(boxes_[j]) && j > i);
    }
    if (!covered) kept.push_back(boxes_[i]);
  }
  BoxSet out;
  out.boxes_ = std::move(kept);
  return out;
}

BoxSet set_union(const BoxSet& a, const BoxSet& b) {
  BoxSet out = a;
  for (const auto& box : b.boxes()) out.add(box);
  return out;
}

BoxSet set_intersection(const BoxSet& a, const BoxSet& b) {
  BoxSet out;
  for (const auto& x : a.boxes()) {
    for (const auto& y : b.boxes()) {
      if (auto c = intersect(x, y)) out.add(*c);
    }
  }
  return out;
}

BoxSet set_difference(const BoxSet& a, const BoxSet& b) {
  std::vector<Box> current = a.boxes();
  for (const auto& cut : b.boxes()) {
    std::vector<Box> next;
    next.reserve(current.size());
    for (const auto& piece : current) {
      auto frags = subtract(piece, cut);
      next.insert(next.end(), frags.begin(), frags.end());
    }
    current = std::move(next);
    if (current.empty()) break;
  }
  return BoxSet(std::move(current));
}

BoxSet boxset_op(const BoxSet& a, const BoxSet& b, SetOp op) {
  switch (op) {
    case SetOp::kIntersect:
      return set_intersection(a, b);
    case SetOp::kUnion:
      return set_union(a, b);
    case SetOp::kDifference:
      return set_difference(a, b);
  }
  throw std::invalid_argument("boxset_op: unknown op");
}

bool intersects(const BoxSet& a, const BoxSet& b) {
  for (const auto& x : a.boxes()) {
    for (const auto& y : b.boxes()) {
      if (intersect(x, y)) return true;
    }
  }
  return false;
}

}  // namespace utm
