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

#include <array>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace utm {

using Vec3 = std::array<double, 3>;

double distance(const Vec3& a, const Vec3& b);

/// Axis-aligned box, a product of three intervals.
///
/// Boxes built by users are closed. Faces become open only as a by-product
/// of set difference: `[0,2] \ [0,1]` is `(1,2]`, and keeping that face open
/// is what makes region membership agree exactly with the set-theoretic
/// result on shared boundaries.
struct Box {
  Vec3 lo{};
  Vec3 hi{};
  std::array<bool, 3> lo_open{};
  std::array<bool, 3> hi_open{};

  Box() = default;
  Box(const Vec3& lo_, const Vec3& hi_) : lo(lo_), hi(hi_) {}

  /// Closed cube of half-width `r` around `c`.
  static Box around(const Vec3& c, double r);
  /// Closed hull of a set of points, expanded by `bloat` on every face.
  static Box hull(std::span<const Vec3> pts, double bloat = 0.0);

  bool empty() const;
  bool closed() const;
  bool contains(const Vec3& p) const;
  /// Contains every point of `other` (both assumed nonempty).
  bool contains(const Box& other) const;
  double volume() const;
  Box expanded(double by) const;

  bool operator==(const Box&) const = default;
};

std::optional<Box> intersect(const Box& a, const Box& b);

/// `a \ b` as at most six pairwise-disjoint fragments. Peels the parts of `a`
/// below and above `b` one axis at a time.
std::vector<Box> subtract(const Box& a, const Box& b);

/// Smallest closed box containing both.
Box hull(const Box& a, const Box& b);

/// Finite union of boxes. Overlaps are allowed and there is no canonical form;
/// only point membership is meaningful.
class BoxSet {
 public:
  BoxSet() = default;
  BoxSet(std::initializer_list<Box> boxes);
  explicit BoxSet(std::vector<Box> boxes);

  const std::vector<Box>& boxes() const { return boxes_; }
  std::size_t size() const { return boxes_.size(); }
  bool empty() const { return boxes_.empty(); }
  bool contains(const Vec3& p) const;
  void add(const Box& b);

  /// Drops boxes covered by a single other member. Membership is unchanged.
  BoxSet pruned() const;

  bool operator==(const BoxSet&) const = default;

 private:
  std::vector<Box> boxes_;
};

enum class SetOp { kIntersect, kUnion, kDifference };

BoxSet boxset_op(const BoxSet& a, const BoxSet& b, SetOp op);
BoxSet set_union(const BoxSet& a, const BoxSet& b);
BoxSet set_intersection(const BoxSet& a, const BoxSet& b);
BoxSet set_difference(const BoxSet& a, const BoxSet& b);
bool intersects(const BoxSet& a, const BoxSet& b);

}  // namespace utm
