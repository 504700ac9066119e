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

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "utm/geometry.hpp"
#include "utm/messages.hpp"
#include "utm/operation_volume.hpp"

namespace utm {

enum class AgentStatus { kIdle, kRequesting, kWaiting, kMoving, kReleasing };

std::string to_string(AgentStatus s);

/// Edges of the agent state diagram, self-loops included.
bool is_allowed_transition(AgentStatus from, AgentStatus to);

/// Exponential backoff on reschedule delays.
struct RetryPolicy {
  double initial_delta = 5.0;
  double max_delta = 320.0;
  int max_attempts = 400;
};

struct RetryState {
  int attempts = 0;
  double next_delta = 5.0;
};

struct AgentState {
  AgentId id = 0;
  AgentStatus status = AgentStatus::kIdle;
  OperationVolume curr_contr{BoxSet{}, kNegInf};
  OperationVolume plan_contr{BoxSet{}, kNegInf};
  OperationVolume free_contr{BoxSet{}, kNegInf};
  Vec3 pos{};
  double clk = 0.0;
  std::vector<Vec3> waypoints;
  bool violated = false;
  int warnings = 0;
  RetryState retry;
  bool gave_up = false;
};

AgentState make_agent(AgentId id, const OperationVolume& initial, const Vec3& pos,
                      const RetryPolicy& policy = {});

/// IDLE -> REQUESTING -> WAITING, emitting the request for `contr`.
std::pair<AgentState, Request> on_plan(AgentState a, const OperationVolume& contr);

/// WAITING -> MOVING when the reply covers the plan, else WAITING -> RELEASING
/// with the releasable part of the reply in `free_contr`. A reply that does
/// not cover `curr_contr` raises a warning but is otherwise processed.
AgentState on_reply(AgentState a, const OperationVolume& contr);

/// RELEASING -> IDLE after a rejected request. No message is emitted when
/// there is nothing to release.
std::pair<AgentState, std::optional<Release>> on_release(AgentState a);

bool next_region_enabled(const AgentState& a);
/// Drops the head pair of `plan_contr` once the clock has passed it; no-op
/// when not enabled.
AgentState on_next_region(AgentState a);

bool succeed_enabled(const AgentState& a);
/// Shrinks `curr_contr` to the final pair of the plan before the release
/// leaves, then returns to IDLE.
std::pair<AgentState, Release> on_succeed(AgentState a);

/// Flags a violation when `(pos, clk)` is outside `curr_contr`. The flag is
/// sticky and the message is emitted once.
std::pair<AgentState, std::optional<Violate>> check_violation(AgentState a);

/// Shifts `c` so that its first time point is `t0`. The shift may be negative.
OperationVolume reanchor(const OperationVolume& c, double t0);

/// Re-requests the last plan, re-anchored at the current clock and pushed
/// back by the pending delay. Returns no request and sets `gave_up` once the
/// attempt budget is spent.
std::pair<AgentState, std::optional<Request>> retry_reschedule(AgentState a,
                                                               const RetryPolicy& policy = {});

}  // namespace utm
