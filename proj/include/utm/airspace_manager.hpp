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

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <utility>

#include "utm/messages.hpp"
#include "utm/operation_volume.hpp"

namespace utm {

struct ManagerStats {
  std::uint64_t emptiness_queries = 0;
  std::uint64_t rects_checked = 0;
  std::uint64_t violations_reported = 0;
};

/// Airspace manager automaton state. `reply_set` keeps arrival order so that
/// pending replies fire FIFO.
struct ManagerState {
  std::map<AgentId, OperationVolume> contr_arr;
  std::deque<AgentId> reply_set;
  ManagerStats stats;
};

/// What a single request did, for logging and metrics.
struct RequestOutcome {
  bool accepted = false;
  std::uint64_t queries = 0;
  std::uint64_t rects = 0;
  /// Latest `T_last` over the other agents' records (-inf if none).
  double max_other_t_last = kNegInf;
};

ManagerState make_manager(const std::map<AgentId, OperationVolume>& initial);

/// Records `contr` for agent `i` when it is disjoint from every other agent's
/// record, and queues a reply either way. Every other agent is checked, so
/// `emptiness_queries` grows by |ID|-1 and `rects_checked` by the boxes of
/// both operands of each check.
ManagerState on_request(ManagerState s, AgentId i, const OperationVolume& contr,
                        RequestOutcome* outcome = nullptr);

bool reply_enabled(const ManagerState& s, AgentId i);

/// Replies with the recorded contract, whether or not the request went in.
std::pair<ManagerState, Reply> make_reply(ManagerState s, AgentId i);

ManagerState on_release(ManagerState s, AgentId i, const OperationVolume& contr);

/// Counted only; the automaton has no contract action for violations.
ManagerState on_violate(ManagerState s, AgentId i);

bool check_manager_invariant(const ManagerState& s);

}  // namespace utm
