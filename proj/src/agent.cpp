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

#include "utm/agent.hpp"

#include <algorithm>

namespace utm {

namespace {

void require_status(const AgentState& a, AgentStatus want, const char* action) {
  if (a.status != want) {
    throw ProtocolError(std::string(action) + " for agent " + std::to_string(a.id) + " in " +
                        to_string(a.status) + ", expected " + to_string(want));
  }
}

}  // namespace

std::string to_string(AgentStatus s) {
  switch (s) {
    case AgentStatus::kIdle:
      return "IDLE";
    case AgentStatus::kRequesting:
      return "REQUESTING";
    case AgentStatus::kWaiting:
      return "WAITING";
    case AgentStatus::kMoving:
      return "MOVING";
    case AgentStatus::kReleasing:
      return "RELEASING";
  }
  return "?";
}

bool is_allowed_transition(AgentStatus from, AgentStatus to) {
  using S = AgentStatus;
  switch (from) {
    case S::kIdle:
      return to == S::kIdle || to == S::kRequesting;
    case S::kRequesting:
      return to == S::kWaiting;
    case S::kWaiting:
      return to == S::kMoving || to == S::kReleasing;
    case S::kMoving:
      return to == S::kMoving || to == S::kReleasing;
    case S::kReleasing:
      return to == S::kIdle;
  }
  return false;
}

AgentState make_agent(AgentId id, const OperationVolume& initial, const Vec3& pos,
                      const RetryPolicy& policy) {
  AgentState a;
  a.id = id;
  a.curr_contr = initial;
  a.pos = pos;
  a.retry.next_delta = policy.initial_delta;
  return a;
}

std::pair<AgentState, Request> on_plan(AgentState a, const OperationVolume& contr) {
  require_status(a, AgentStatus::kIdle, "plan");
  a.plan_contr = contr;
  a.status = AgentStatus::kRequesting;
  Request req{a.id, a.plan_contr};
  a.status = AgentStatus::kWaiting;
  return {std::move(a), std::move(req)};
}

AgentState on_reply(AgentState a, const OperationVolume& contr) {
  require_status(a, AgentStatus::kWaiting, "reply");
  if (!refines(a.curr_contr, contr)) ++a.warnings;
  if (refines(a.plan_contr, contr)) {
    a.curr_contr = contr;
    a.status = AgentStatus::kMoving;
  } else {
    a.free_contr = simplify(combine(contr, a.curr_contr, SetOp::kDifference));
    a.status = AgentStatus::kReleasing;
  }
  return a;
}

std::pair<AgentState, std::optional<Release>> on_release(AgentState a) {
  require_status(a, AgentStatus::kReleasing, "release");
  std::optional<Release> msg;
  if (!is_empty(a.free_contr)) msg = Release{a.id, a.free_contr};
  a.status = AgentStatus::kIdle;
  return {std::move(a), std::move(msg)};
}

bool next_region_enabled(const AgentState& a) {
  return a.status == AgentStatus::kMoving && a.plan_contr.len() >= 2 &&
         a.clk >= a.plan_contr[1].time;
}

AgentState on_next_region(AgentState a) {
  if (!next_region_enabled(a)) return a;
  std::vector<VolumePair> rest(a.plan_contr.pairs().begin() + 1, a.plan_contr.pairs().end());
  a.plan_contr = OperationVolume(std::move(rest));
  return a;
}

bool succeed_enabled(const AgentState& a) {
  return a.status == AgentStatus::kMoving && a.plan_contr.len() == 1 && !a.violated &&
         a.plan_contr.r_last().contains(a.pos);
}

std::pair<AgentState, Release> on_succeed(AgentState a) {
  if (!succeed_enabled(a)) {
    throw ProtocolError("succeed not enabled for agent " + std::to_string(a.id));
  }
  a.status = AgentStatus::kReleasing;
  a.free_contr = simplify(combine(a.curr_contr, tail(a.plan_contr), SetOp::kDifference));
  a.curr_contr = simplify(combine(a.curr_contr, a.free_contr, SetOp::kDifference));
  Release msg{a.id, a.free_contr};
  a.status = AgentStatus::kIdle;
  return {std::move(a), std::move(msg)};
}

std::pair<AgentState, std::optional<Violate>> check_violation(AgentState a) {
  if (a.status != AgentStatus::kMoving || a.violated) return {std::move(a), std::nullopt};
  if (contains(a.curr_contr, SpaceTimePoint{a.pos, a.clk})) return {std::move(a), std::nullopt};
  a.violated = true;
  Violate msg{a.id};
  return {std::move(a), msg};
}

OperationVolume reanchor(const OperationVolume& c, double t0) {
  if (is_neg_inf(c.t_first())) throw InvalidVolume("cannot re-anchor a volume starting at -inf");
  const double shift = t0 - c.t_first();
  auto pairs = c.pairs();
  for (auto& p : pairs) p.time += shift;
  return OperationVolume(std::move(pairs));
}

std::pair<AgentState, std::optional<Request>> retry_reschedule(AgentState a,
                                                               const RetryPolicy& policy) {
  require_status(a, AgentStatus::kIdle, "retry");
  if (a.retry.attempts >= policy.max_attempts) {
    a.gave_up = true;
    return {std::move(a), std::nullopt};
  }
  const double delta = a.retry.next_delta;
  auto plan = reschedule(reanchor(trim_neg_inf(a.plan_contr), a.clk), delta);
  ++a.retry.attempts;
  a.retry.next_delta = std::min(2.0 * a.retry.next_delta, policy.max_delta);
  auto [next, req] = on_plan(std::move(a), plan);
  return {std::move(next), std::move(req)};
}

}  // namespace utm
