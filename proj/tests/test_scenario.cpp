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

#include <sstream>

#include "utm/ov_json.hpp"
#include "utm/scenario.hpp"

namespace utm {
namespace {

using nlohmann::json;

const Box kAir({-60, -60, 0}, {60, 60, 20});

TEST(Map, RejectsNoAgents) {
  EXPECT_THROW(generate_map(MapKind::kCorridor, 0, kAir, 0), ConfigError);
  ScenarioConfig c;
  c.n_agents = 0;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Map, CorridorSplitsSides) {
  const auto m = generate_map(MapKind::kCorridor, 4, kAir, 0);
  int west = 0;
  for (const auto& a : m.agents) west += a.spawn[0] < 0 ? 1 : 0;
  EXPECT_EQ(west, 2);
}

TEST(Map, LandingBoxesAreDisjoint) {
  for (auto kind : {MapKind::kCorridor, MapKind::kLoop, MapKind::kRandomN}) {
    const auto m = generate_map(kind, 8, kAir, 3);
    for (std::size_t i = 0; i < m.agents.size(); ++i) {
      for (std::size_t j = i + 1; j < m.agents.size(); ++j) {
        const Box a = Box::around(m.agents[i].waypoints.back(), 1.0);
        const Box b = Box::around(m.agents[j].waypoints.back(), 1.0);
        const auto x = intersect(a, b);
        EXPECT_TRUE(!x || x->empty());
      }
    }
  }
}

TEST(Map, RandomIsSeeded) {
  const auto a = generate_map(MapKind::kRandomN, 3, kAir, 11);
  const auto b = generate_map(MapKind::kRandomN, 3, kAir, 11);
  const auto c = generate_map(MapKind::kRandomN, 3, kAir, 12);
  EXPECT_EQ(a.agents[0].waypoints, b.agents[0].waypoints);
  EXPECT_NE(a.agents[0].waypoints, c.agents[0].waypoints);
}

TEST(Map, TooManyAgentsForAirspace) {
  EXPECT_THROW(generate_map(MapKind::kCorridor, 40, kAir, 0), ConfigError);
}

TEST(Scenario, CorridorPairIsLiveAndSafe) {
  ScenarioConfig c;
  const auto res = run_scenario(c);
  EXPECT_TRUE(res.report.liveness);
  EXPECT_FALSE(res.report.partial);
  EXPECT_EQ(res.report.violation_rate, 0.0);
  EXPECT_EQ(res.report.warnings, 0u);
  EXPECT_EQ(res.report.monitor_breaches, 0u);
  EXPECT_TRUE(replay_log(res.log).ok());
}

TEST(Scenario, Deterministic) {
  ScenarioConfig c;
  c.n_agents = 4;
  c.strategy = Strategy::kAggressive;
  c.delay = 0.2;
  c.jitter = 0.1;
  c.seed = 5;
  const auto a = run_scenario(c);
  const auto b = run_scenario(c);
  EXPECT_EQ(a.log.to_jsonl(), b.log.to_jsonl());
  EXPECT_EQ(to_json(a.report).dump(), to_json(b.report).dump());
}

TEST(Scenario, ConfigJsonRoundTrip) {
  ScenarioConfig c;
  c.map = MapKind::kRandomN;
  c.random_n = 6;
  c.n_agents = 3;
  c.strategy = Strategy::kAggressive;
  c.delay = 0.25;
  c.seed = 77;
  const auto back = config_from_json(json::parse(to_json(c).dump()));
  EXPECT_EQ(to_json(back), to_json(c));
  EXPECT_THROW(config_from_json(json{{"map", "Spiral"}}), std::exception);
}

LogRecord rec(double t, std::string kind, std::string from, std::string to, std::string summary,
              json data) {
  return {t, 0, std::move(kind), std::move(from), std::move(to), std::move(summary),
          std::move(data)};
}

json agent_data(int id, std::string action, json extra = json::object()) {
  json d{{"clk", 0.0}, {"id", id}, {"action", action}, {"status", "IDLE"}, {"edges", json::array()}};
  d.update(extra);
  return d;
}

TEST(Metrics, HandBuiltLog) {
  ScenarioConfig c;
  c.n_agents = 1;
  EventLog log;
  log.add(rec(10, "send", "0", "AM", "request", {{"msg_id", 1}}));
  log.add(rec(10, "deliver", "0", "AM", "request", {{"msg_id", 1}}));
  log.add(rec(10, "am", "AM", "0", "request",
              {{"msg_id", 1}, {"accepted", true}, {"queries", 9}, {"rects", 30},
               {"max_other_t_last", "-inf"}}));
  log.add(rec(10, "agent", "0", "0", "reply",
              agent_data(0, "reply", {{"accepted", true}, {"plan_len", 3}})));
  log.add(rec(50, "agent", "0", "0", "succeed", agent_data(0, "succeed")));
  auto m = compute_metrics(log, c);
  EXPECT_TRUE(m.partial);
  ASSERT_TRUE(m.response_time[0].has_value());
  EXPECT_DOUBLE_EQ(*m.response_time[0], 40.0);
  EXPECT_EQ(m.emptiness_queries, 9u);
  EXPECT_DOUBLE_EQ(m.makespan, 50.0);
  EXPECT_DOUBLE_EQ(m.qe_per_s, 9.0 / 50.0);
  EXPECT_DOUBLE_EQ(m.rect_per_s, 30.0 / 50.0);
  EXPECT_TRUE(m.liveness);

  log.add(rec(60, "run", "sim", "sim", "end", {{"succeeded", 1}, {"agents", 1}}));
  EXPECT_FALSE(compute_metrics(log, c).partial);
  EXPECT_EQ(csv_row(m).find('\n'), std::string::npos);
}

TEST(Checkers, DetectCraftedFaults) {
  EventLog fifo;
  fifo.add(rec(0, "send", "1", "AM", "release", {{"msg_id", 1}}));
  fifo.add(rec(0, "send", "1", "AM", "request", {{"msg_id", 2}}));
  fifo.add(rec(1, "deliver", "1", "AM", "request", {{"msg_id", 2}}));
  fifo.add(rec(1, "send", "AM", "1", "reply", {{"msg_id", 3}}));
  fifo.add(rec(2, "deliver", "1", "AM", "release", {{"msg_id", 1}}));
  EXPECT_EQ(count_fifo_violations(fifo), 1u);
  EXPECT_EQ(count_release_overtakes(fifo), 1u);

  EventLog edges;
  edges.add(rec(0, "agent", "1", "1", "plan",
                agent_data(1, "plan", {{"edges", json::array({json::array({"IDLE", "MOVING"})})}})));
  EXPECT_EQ(count_bad_status_edges(edges), 1u);
}

TEST(Replay, AcceptsRealLogAndFlagsTampering) {
  ScenarioConfig c;
  c.n_agents = 3;
  c.delay = 0.2;
  const auto res = run_scenario(c);
  const auto ok = replay_log(res.log);
  EXPECT_TRUE(ok.ok()) << to_json(ok).dump();
  EXPECT_GT(ok.events, 0u);

  // Swap the contract in the first reply for an empty one.
  auto recs = res.log.records();
  bool tampered = false;
  for (auto& r : recs) {
    if (r.kind == "send" && r.summary == "reply" && r.data.contains("ov")) {
      r.data["ov"] = ov_to_json(OperationVolume(BoxSet{}, kNegInf));
      tampered = true;
      break;
    }
  }
  ASSERT_TRUE(tampered);
  EventLog bad;
  for (auto& r : recs) bad.add(r);
  EXPECT_FALSE(replay_log(bad).ok());

  std::istringstream in(res.log.to_jsonl());
  EXPECT_TRUE(replay_log(EventLog::parse(in)).ok());
}

}  // namespace
}  // namespace utm
