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
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "utm/geometry.hpp"

namespace utm {

/// Seconds on the global clock. Only the first time point of a volume may be
/// negative infinity.
using TimePoint = double;

inline constexpr TimePoint kNegInf = -std::numeric_limits<double>::infinity();

inline bool is_neg_inf(TimePoint t) { return t == kNegInf; }

struct SpaceTimePoint {
  Vec3 position{};
  double time = 0.0;
};

struct VolumePair {
  BoxSet region;
  TimePoint time = 0.0;

  bool operator==(const VolumePair&) const = default;
};

class InvalidVolume : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A reservation of space-time: `(R_1, T_1), ..., (R_k, T_k)`. The vehicle
/// occupies `R_i` during `[T_i, T_{i+1})` and `R_k` from `T_k` on, forever.
class OperationVolume {
 public:
  /// Throws InvalidVolume on an empty sequence, non-increasing times, NaN or
  /// +inf times, or -inf anywhere but the first pair.
  explicit OperationVolume(std::vector<VolumePair> pairs);
  OperationVolume(BoxSet region, TimePoint t);

  const std::vector<VolumePair>& pairs() const { return pairs_; }
  const VolumePair& operator[](std::size_t i) const { return pairs_[i]; }

  std::size_t len() const { return pairs_.size(); }
  TimePoint t_first() const { return pairs_.front().time; }
  TimePoint t_last() const { return pairs_.back().time; }
  const BoxSet& r_last() const { return pairs_.back().region; }
  BoxSet r_all() const;
  /// `T_k - T_1`; throws InvalidVolume when `T_1` is -inf.
  double dur() const;
  std::size_t rect_count() const;
  std::vector<TimePoint> times() const;

  /// Index of the pair active at `t`, or nothing when `t < T_1`.
  std::ptrdiff_t active_index(double t) const;

  /// Structural equality; semantic equality goes through `equivalent`.
  bool operator==(const OperationVolume&) const = default;

 private:
  std::vector<VolumePair> pairs_;
};

bool contains(const OperationVolume& c, const SpaceTimePoint& p);

/// Adds `t` as a time point without changing the represented set: prepends an
/// empty region, splits an interval, appends a copy of the last region, or
/// returns `c` when `t` is already present.
OperationVolume insert(const OperationVolume& c, TimePoint t);

/// Time-aligns two volumes on the sorted union of their time points.
std::pair<OperationVolume, OperationVolume> align(const OperationVolume& a,
                                                  const OperationVolume& b);

OperationVolume combine(const OperationVolume& a, const OperationVolume& b, SetOp op);

bool is_empty(const OperationVolume& c);
bool disjoint(const OperationVolume& a, const OperationVolume& b);
/// `a` uses no space-time outside `b`.
bool refines(const OperationVolume& a, const OperationVolume& b);
/// Same represented set.
bool equivalent(const OperationVolume& a, const OperationVolume& b);

/// Shifts every time point by `delta`. Throws InvalidVolume for a -inf start
/// and std::invalid_argument for a negative or non-finite `delta`.
OperationVolume reschedule(const OperationVolume& c, double delta);

/// Drops a leading -inf pair so the volume can be rescheduled. Volumes with a
/// single -inf pair are returned unchanged.
OperationVolume trim_neg_inf(const OperationVolume& c);

/// Structural clean-up that keeps the represented set: prunes covered boxes,
/// merges consecutive pairs with identical regions and drops leading empty
/// pairs.
OperationVolume simplify(const OperationVolume& c);

/// Single-pair volume holding `c`'s last region from its last time point.
OperationVolume tail(const OperationVolume& c);

}  // namespace utm
