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

#include <gtest/gtest.h>

#include <map>
#include <sstream>

#include "utm/simnet.hpp"

namespace utm {
namespace {

const OperationVolume kNone(BoxSet{}, kNegInf);

std::vector<std::uint64_t> drain(EventQueue& q, double t_end) {
  std::vector<std::uint64_t> order;
  run_until(q, t_end, [&](const SimEvent& e) { order.push_back(e.seq); }, 1000);
  return order;
}

TEST(EventQueue, OrdersByDueThenSeq) {
  EventQueue q;
  const auto a = q.push(2.0, Tick{0});
  const auto b = q.push(1.0, Tick{1});
  const auto c = q.push(1.0, Tick{2});
  EXPECT_EQ(drain(q, 10), (std::vector<std::uint64_t>{b, c, a}));
  EXPECT_DOUBLE_EQ(q.now(), 10);
}

TEST(EventQueue, RejectsPastEvents) {
  EventQueue q;
  q.advance_to(5);
  EXPECT_THROW(q.push(4.0, Tick{0}), std::invalid_argument);
  EXPECT_THROW(q.advance_to(1), std::invalid_argument);
}

TEST(EventQueue, EmptyQueueJumpsToEnd) {
  EventQueue q;
  EXPECT_TRUE(drain(q, 42).empty());
  EXPECT_DOUBLE_EQ(q.now(), 42);
  EXPECT_THROW(drain(q, 1), std::invalid_argument);
}

TEST(EventQueue, BacklogGuardAborts) {
  EventQueue q;
  q.push(0.0, Tick{0});
  auto breed = [&](const SimEvent&) {
    q.push(q.now(), Tick{0});
    q.push(q.now(), Tick{0});
  };
  EXPECT_THROW(run_until(q, 1.0, breed, 100), SimulationError);
}

TEST(Bus, SameSenderDeliveredInSendOrder) {
  EventQueue q;
  q.advance_to(1);
  Bus bus(DelayModel{0.5});
  const auto r = bus.send(q, Release{3, kNone});
  const auto s = bus.send(q, Request{3, kNone});
  std::vector<std::string> kinds;
  run_until(
      q, 10,
      [&](const SimEvent& e) { kinds.push_back(kind_name(std::get<Deliver>(e.payload).msg)); },
      100);
  EXPECT_EQ(kinds, (std::vector<std::string>{"release", "request"}));
  EXPECT_DOUBLE_EQ(r.due, 1.5);
  EXPECT_LT(r.msg_id, s.msg_id);
}

TEST(Bus, ZeroDelayRunsBeforeClockAdvances) {
  EventQueue q;
  Bus bus;
  q.push(1.0, Tick{0});
  std::vector<double> seen;
  run_until(
      q, 5,
      [&](const SimEvent& e) {
        seen.push_back(q.now());
        if (std::holds_alternative<Tick>(e.payload)) bus.send(q, Violate{0});
      },
      100);
  EXPECT_EQ(seen, (std::vector<double>{1.0, 1.0}));
}

TEST(Bus, MessageIdIsDeliverSeq) {
  EventQueue q;
  Bus bus;
  const auto m = bus.send(q, Violate{1});
  EXPECT_EQ(q.top().seq, m.msg_id);
  EXPECT_EQ(std::get<Deliver>(q.top().payload).msg_id, m.msg_id);
}

TEST(Bus, JitterKeepsPerSenderOrder) {
  EventQueue q;
  Bus bus(DelayModel{0.1, 2.0, 99});
  std::map<AgentId, std::vector<std::uint64_t>> sent, got;
  bool reordered_across = false;
  std::uint64_t last = 0;
  auto record = [&](const SimEvent& e) {
    if (auto* d = std::get_if<Deliver>(&e.payload)) {
      got[sender(d->msg).id].push_back(d->msg_id);
      reordered_across = reordered_across || d->msg_id < last;
      last = d->msg_id;
    }
  };
  for (int round = 0; round < 50; ++round) {
    run_until(q, q.now() + 0.05, record, 1000);
    for (AgentId a = 0; a < 4; ++a) sent[a].push_back(bus.send(q, Violate{a}).msg_id);
  }
  run_until(q, 1e6, record, 10000);
  EXPECT_EQ(got, sent);
  EXPECT_TRUE(reordered_across);  // jitter does shuffle distinct senders
}

TEST(Bus, SeededJitterIsReproducible) {
  auto dues = [] {
    EventQueue q;
    Bus bus(DelayModel{0.0, 1.0, 5});
    std::vector<double> out;
    for (AgentId a = 0; a < 20; ++a) out.push_back(bus.send(q, Violate{a}).due);
    return out;
  };
  EXPECT_EQ(dues(), dues());
}

TEST(EventLog, JsonlRoundTrip) {
  EventLog log;
  log.add({0.5, 3, "send", "1", "AM", "request", {{"msg_id", 3}}});
  log.add({1.0, 4, "deliver", "1", "AM", "request", nlohmann::json::object()});
  const auto text = log.to_jsonl();
  std::istringstream in(text);
  const auto back = EventLog::parse(in);
  EXPECT_EQ(back.records(), log.records());
  EXPECT_EQ(back.to_jsonl(), text);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
}

}  // namespace
}  // namespace utm
