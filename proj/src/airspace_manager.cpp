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

#include "utm/airspace_manager.hpp"

#include <algorithm>
#include <string>

namespace utm {

namespace {

OperationVolume& record_of(ManagerState& s, AgentId i) {
  auto it = s.contr_arr.find(i);
  if (it == s.contr_arr.end()) {
    throw ProtocolError("airspace manager: unknown agent " + std::to_string(i));
  }
  return it->second;
}

}  // namespace

ManagerState make_manager(const std::map<AgentId, OperationVolume>& initial) {
  ManagerState s;
  s.contr_arr = initial;
  return s;
}

ManagerState on_request(ManagerState s, AgentId i, const OperationVolume& contr,
                        RequestOutcome* outcome) {
  OperationVolume& mine = record_of(s, i);
  if (std::find(s.reply_set.begin(), s.reply_set.end(), i) == s.reply_set.end()) {
    s.reply_set.push_back(i);
  }

  RequestOutcome out;
  bool ok = true;
  for (const auto& [j, theirs] : s.contr_arr) {
    if (j == i) continue;
    ++out.queries;
    out.rects += contr.rect_count() + theirs.rect_count();
    out.max_other_t_last = std::max(out.max_other_t_last, theirs.t_last());
    if (!disjoint(contr, theirs)) ok = false;
  }
  out.accepted = ok;
  if (ok) mine = simplify(combine(mine, contr, SetOp::kUnion));

  s.stats.emptiness_queries += out.queries;
  s.stats.rects_checked += out.rects;
  if (outcome) *outcome = out;
  return s;
}

bool reply_enabled(const ManagerState& s, AgentId i) {
  return std::find(s.reply_set.begin(), s.reply_set.end(), i) != s.reply_set.end();
}

std::pair<ManagerState, Reply> make_reply(ManagerState s, AgentId i) {
  auto it = std::find(s.reply_set.begin(), s.reply_set.end(), i);
  if (it == s.reply_set.end()) {
    throw ProtocolError("airspace manager: reply to " + std::to_string(i) + " not enabled");
  }
  s.reply_set.erase(it);
  Reply r{i, record_of(s, i)};
  return {std::move(s), std::move(r)};
}

ManagerState on_release(ManagerState s, AgentId i, const OperationVolume& contr) {
  OperationVolume& mine = record_of(s, i);
  mine = simplify(combine(mine, contr, SetOp::kDifference));
  return s;
}

ManagerState on_violate(ManagerState s, AgentId i) {
  record_of(s, i);
  ++s.stats.violations_reported;
  return s;
}

bool check_manager_invariant(const ManagerState& s) {
  for (auto a = s.contr_arr.begin(); a != s.contr_arr.end(); ++a) {
    for (auto b = std::next(a); b != s.contr_arr.end(); ++b) {
      if (!disjoint(a->second, b->second)) return false;
    }
  }
  return true;
}

}  // namespace utm
