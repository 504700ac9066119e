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
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "utm/agent.hpp"
#include "utm/geometry.hpp"
#include "utm/simnet.hpp"
#include "utm/vehicle.hpp"

namespace utm {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class MapKind { kCorridor, kLoop, kRandomN };

std::string to_string(MapKind k);
MapKind map_kind_from_string(const std::string& s);

struct ScenarioConfig {
  MapKind map = MapKind::kCorridor;
  int random_n = 4;  // waypoints per agent on RandomN
  int n_agents = 2;
  Strategy strategy = Strategy::kConservative;
  double delay = 0.0;
  double jitter = 0.0;
  double dt = 0.1;
  std::uint64_t seed = 0;
  double max_time = 3000.0;
  Box airspace{{-60.0, -60.0, 0.0}, {60.0, 60.0, 20.0}};
  VehicleParams vehicle;
  PlanParams plan;
  // A small cap plus a steady retry cadence lets a waiting agent grab the
  // first free slot to within `retry_wait` instead of a power-of-two grid.
  RetryPolicy retry{5.0, 20.0, 5000};
  // Pause between a rejection and the next request.
  double retry_wait = 1.0;
  double plan_stagger = 0.01;
  std::size_t max_backlog = 1'000'000;

  void validate() const;
};

nlohmann::json to_json(const ScenarioConfig& c);
ScenarioConfig config_from_json(const nlohmann::json& j);

struct AgentRoute {
  Vec3 spawn{};
  std::vector<Vec3> waypoints;  // last one is the landing spot
};

struct ScenarioMap {
  std::vector<AgentRoute> agents;
};

/// Pads are laid out as a staircase so that every agent's spawn and landing
/// boxes stay clear of every other agent's flight hull.
ScenarioMap generate_map(MapKind kind, int n_agents, const Box& airspace, std::uint64_t seed,
                         int random_n = 4, double bloat = 1.0);
ScenarioMap generate_map(const ScenarioConfig& c);

/// Throws ConfigError unless spawn boxes are pairwise disjoint and each
/// landing box misses every other agent's spawn box and flight hull.
void check_map(const ScenarioMap& m, const Box& airspace, double bloat);

struct MetricsReport {
  std::string map;
  int n_agents = 0;
  std::string strategy;
  std::uint64_t seed = 0;
  double delay = 0.0;

  std::vector<std::optional<double>> response_time;
  double max_response_time = 0.0;
  double avg_response_time = 0.0;
  double makespan = 0.0;
  std::uint64_t requests = 0;
  std::uint64_t accepted = 0;
  std::uint64_t emptiness_queries = 0;
  std::uint64_t rects_checked = 0;
  double qe_per_s = 0.0;
  double rect_per_s = 0.0;
  std::uint64_t violations = 0;
  std::uint64_t violated_pairs = 0;
  std::uint64_t accepted_pairs = 0;
  double violation_rate = 0.0;
  std::uint64_t warnings = 0;
  std::uint64_t monitor_breaches = 0;
  std::uint64_t gave_up = 0;
  bool liveness = false;
  // Set when the log lacks a run-end record.
  bool partial = false;

  /// A monitor breach not explained by a reported violation.
  bool safety_failure() const { return monitor_breaches > 0 && violations == 0; }
  bool safety_breach() const { return monitor_breaches > 0; }
};

nlohmann::json to_json(const MetricsReport& r);
std::string csv_header();
std::string csv_row(const MetricsReport& r);

/// Metrics from a complete event log.
MetricsReport compute_metrics(const EventLog& log, const ScenarioConfig& config);

struct ScenarioResult {
  MetricsReport report;
  EventLog log;
};

ScenarioResult run_scenario(const ScenarioConfig& config);

/// Count of replies sent to an agent while one of its releases, sent before
/// its latest request, was still in flight.
std::size_t count_release_overtakes(const EventLog& log);

/// Deliveries that do not follow their sender's send order.
std::size_t count_fifo_violations(const EventLog& log);

/// Logged status edges that the agent automaton does not allow.
std::size_t count_bad_status_edges(const EventLog& log);

struct RescheduleEvidence {
  AgentId agent = 0;
  double clk = 0.0;
  double delta = 0.0;
  double delta0 = 0.0;
};

/// Accepted rescheduled requests preceded by a rejection whose delay is at
/// least `max_j T_last - clk` for the other agents' records.
std::vector<RescheduleEvidence> find_reschedule_evidence(const EventLog& log);

struct ReplayResult {
  std::size_t events = 0;
  std::size_t manager_breaches = 0;
  std::size_t refinement_breaches = 0;
  std::size_t disjointness_breaches = 0;
  // Replies whose logged contract differs from the replayed manager record.
  std::size_t reply_mismatches = 0;
  std::size_t release_overtakes = 0;
  std::size_t fifo_violations = 0;
  std::size_t bad_edges = 0;

  bool ok() const {
    return manager_breaches + refinement_breaches + disjointness_breaches + reply_mismatches +
               release_overtakes + fifo_violations + bad_edges ==
           0;
  }
};

/// Rebuilds manager and agent contracts from the messages in `log` and
/// re-checks the safety invariants after every delivery.
ReplayResult replay_log(const EventLog& log);

nlohmann::json to_json(const ReplayResult& r);

}  // namespace utm
