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

#include "utm/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "utm/airspace_manager.hpp"
#include "utm/ov_json.hpp"

namespace utm {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Configuration

std::string to_string(MapKind k) {
  switch (k) {
    case MapKind::kCorridor:
      return "corridor";
    case MapKind::kLoop:
      return "loop";
    case MapKind::kRandomN:
      return "random";
  }
  return "?";
}

MapKind map_kind_from_string(const std::string& s) {
  if (s == "corridor" || s == "Corridor") return MapKind::kCorridor;
  if (s == "loop" || s == "Loop") return MapKind::kLoop;
  if (s == "random" || s == "RandomN" || s == "randomn") return MapKind::kRandomN;
  throw ConfigError("unknown map: " + s);
}

void ScenarioConfig::validate() const {
  if (n_agents < 1) throw ConfigError("n_agents must be at least 1");
  if (!(max_time > 0.0)) throw ConfigError("max_time must be positive");
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(delay >= 0.0) || !(jitter >= 0.0)) throw ConfigError("delay and jitter must be >= 0");
  if (map == MapKind::kRandomN && random_n < 1) throw ConfigError("random_n must be >= 1");
  if (!(plan.bloat >= 0.0) || !(plan.slack >= 1.0)) {
    throw ConfigError("bloat must be >= 0 and slack >= 1");
  }
  if (!(retry.initial_delta > 0.0) || retry.max_delta < retry.initial_delta ||
      retry.max_attempts < 0) {
    throw ConfigError("invalid retry policy");
  }
  if (!(retry_wait > 0.0) || !(plan_stagger >= 0.0)) {
    throw ConfigError("retry_wait must be positive and plan_stagger nonnegative");
  }
  if (airspace.empty()) throw ConfigError("airspace is empty");
  try {
    vehicle.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

json to_json(const ScenarioConfig& c) {
  json a;
  to_json(a, c.airspace);
  return json{{"map", to_string(c.map)},
              {"random_n", c.random_n},
              {"n_agents", c.n_agents},
              {"strategy", to_string(c.strategy)},
              {"delay", c.delay},
              {"jitter", c.jitter},
              {"dt", c.dt},
              {"seed", c.seed},
              {"max_time", c.max_time},
              {"airspace", a},
              {"speed", c.vehicle.speed},
              {"waypoint_tol", c.vehicle.waypoint_tol},
              {"noise_sigma", c.vehicle.noise_sigma},
              {"vehicle_seed", c.vehicle.seed},
              {"bloat", c.plan.bloat},
              {"slack", c.plan.slack},
              {"retry_initial", c.retry.initial_delta},
              {"retry_max", c.retry.max_delta},
              {"retry_attempts", c.retry.max_attempts},
              {"retry_wait", c.retry_wait},
              {"plan_stagger", c.plan_stagger},
              {"max_backlog", c.max_backlog}};
}

ScenarioConfig config_from_json(const json& j) {
  ScenarioConfig c;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  if (j.contains("map")) c.map = map_kind_from_string(j.at("map").get<std::string>());
  if (j.contains("strategy")) {
    c.strategy = strategy_from_string(j.at("strategy").get<std::string>());
  }
  if (j.contains("airspace")) from_json(j.at("airspace"), c.airspace);
  get("random_n", c.random_n);
  get("n_agents", c.n_agents);
  get("delay", c.delay);
  get("jitter", c.jitter);
  get("dt", c.dt);
  get("seed", c.seed);
  get("max_time", c.max_time);
  get("speed", c.vehicle.speed);
  get("waypoint_tol", c.vehicle.waypoint_tol);
  get("noise_sigma", c.vehicle.noise_sigma);
  get("vehicle_seed", c.vehicle.seed);
  get("bloat", c.plan.bloat);
  get("slack", c.plan.slack);
  get("retry_initial", c.retry.initial_delta);
  get("retry_max", c.retry.max_delta);
  get("retry_attempts", c.retry.max_attempts);
  get("retry_wait", c.retry_wait);
  get("plan_stagger", c.plan_stagger);
  get("max_backlog", c.max_backlog);
  return c;
}

// ---------------------------------------------------------------------------
// Maps

namespace {

constexpr double kCruise = 5.0;
constexpr double kPadStep = 3.0;

Vec3 at(double x, double y) { return {x, y, kCruise}; }

Box flight_hull(const AgentRoute& r, double bloat) {
  std::vector<Vec3> pts{r.spawn};
  pts.insert(pts.end(), r.waypoints.begin(), r.waypoints.end());
  return Box::hull(pts, bloat);
}

}  // namespace

ScenarioMap generate_map(MapKind kind, int n_agents, const Box& airspace, std::uint64_t seed,
                         int random_n, double bloat) {
  if (n_agents < 1) throw ConfigError("n_agents must be at least 1");
  ScenarioMap m;
  const int n = n_agents;
  // Pad k sits at (+-X_k, +-Y_k) with X rising and Y falling in k. Agent k's
  // hull then spans |x| <= X_k and |y| <= Y_k, which excludes the pads of
  // every j > k by x and every j < k by y.
  auto pad_x = [&](double base, int k) { return base + kPadStep * k; };
  auto pad_y = [&](double base, int k) { return base + kPadStep * (n - 1 - k); };

  switch (kind) {
    case MapKind::kCorridor: {
      const double L = 8.0;
      for (int k = 0; k < n; ++k) {
        const double X = pad_x(L + 4.0, k);
        const double Y = pad_y(4.0, k);
        // The first half starts west of the corridor, the rest east.
        if (k < (n + 1) / 2) {
          m.agents.push_back({at(-X, -Y), {at(-L, 0), at(L, 0), at(X, Y)}});
        } else {
          m.agents.push_back({at(X, -Y), {at(L, 0), at(-L, 0), at(-X, Y)}});
        }
      }
      break;
    }
    case MapKind::kLoop: {
      const double S = 8.0;
      const std::vector<Vec3> ring{at(-S, -S), at(S, -S), at(S, S), at(-S, S), at(-S, -S)};
      for (int k = 0; k < n; ++k) {
        const double X = pad_x(S + 4.0, k);
        const double Y = pad_y(S + 4.0, k);
        AgentRoute r{at(-X, -Y), ring};
        r.waypoints.push_back(at(-X, Y));
        m.agents.push_back(std::move(r));
      }
      break;
    }
    case MapKind::kRandomN: {
      if (random_n < 1) throw ConfigError("random_n must be >= 1");
      std::seed_seq seq{seed, std::uint64_t{0x6d6170}};
      Rng rng(seq);
      std::uniform_real_distribution<double> u(-12.5, 12.5);
      for (int k = 0; k < n; ++k) {
        const double X = pad_x(16.0, k);
        const double Y = pad_y(16.0, k);
        AgentRoute r{at(-X, -Y), {}};
        for (int w = 0; w < random_n; ++w) {
          const double x = u(rng);
          const double y = u(rng);
          r.waypoints.push_back(at(x, y));
        }
        r.waypoints.push_back(at(-X, Y));
        m.agents.push_back(std::move(r));
      }
      break;
    }
  }
  check_map(m, airspace, bloat);
  return m;
}

ScenarioMap generate_map(const ScenarioConfig& c) {
  return generate_map(c.map, c.n_agents, c.airspace, c.seed, c.random_n, c.plan.bloat);
}

void check_map(const ScenarioMap& m, const Box& airspace, double bloat) {
  const std::size_t n = m.agents.size();
  std::vector<Box> spawn(n), landing(n), hull(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = m.agents[i];
    if (r.waypoints.empty()) throw ConfigError("agent without waypoints");
    spawn[i] = Box::around(r.spawn, bloat);
    landing[i] = Box::around(r.waypoints.back(), bloat);
    hull[i] = flight_hull(r, bloat);
    if (!airspace.contains(hull[i])) {
      throw ConfigError("agent " + std::to_string(i) + " does not fit in the airspace");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (intersect(spawn[i], spawn[j])) throw ConfigError("spawn boxes overlap");
      if (intersect(hull[i], spawn[j]) || intersect(hull[i], landing[j])) {
        throw ConfigError("pads of agent " + std::to_string(j) + " meet the flight hull of agent " +
                          std::to_string(i));
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Simulation

namespace {

using Edge = std::pair<AgentStatus, AgentStatus>;

struct Runtime {
  AgentState st;
  AgentRoute route;
  Rng rng;
  std::optional<FlightPlan> base;
  WaypointFollower follower;
  double last_step = 0.0;
  bool succeeded = false;
};

std::string agent_name(AgentId i) { return std::to_string(i); }

class World {
 public:
  explicit World(const ScenarioConfig& c) : cfg_(c), bus_(DelayModel{c.delay, c.jitter, c.seed}) {
    const auto map = generate_map(c);
    std::map<AgentId, OperationVolume> initial;
    json init = json::array();
    for (std::size_t k = 0; k < map.agents.size(); ++k) {
      const auto id = static_cast<AgentId>(k);
      const OperationVolume spawn(BoxSet{Box::around(map.agents[k].spawn, c.plan.bloat)}, kNegInf);
      initial.emplace(id, spawn);
      init.push_back(ov_to_json(spawn));
      std::seed_seq seq{c.seed, c.vehicle.seed, std::uint64_t{k}};
      Runtime r{make_agent(id, spawn, map.agents[k].spawn, c.retry), map.agents[k], Rng(seq),
                std::nullopt, {}, 0.0, false};
      agents_.push_back(std::move(r));
    }
    am_ = make_manager(initial);
    log_.add(LogRecord{0.0, 0, "run", "", "", "start", json{{"config", to_json(c)}, {"initial", init}}});
  }

  EventLog run() {
    for (std::size_t k = 0; k < agents_.size(); ++k) {
      q_.push(static_cast<double>(k) * cfg_.plan_stagger, PlanTrigger{static_cast<AgentId>(k)});
    }
    run_until(
        q_, cfg_.max_time, [this](const SimEvent& ev) { handle(ev); }, cfg_.max_backlog);
    std::size_t done = 0;
    for (const auto& r : agents_) done += r.succeeded ? 1 : 0;
    log_.add(LogRecord{q_.now(), q_.next_seq(), "run", "", "", "end",
                       json{{"succeeded", done}, {"agents", agents_.size()}}});
    return std::move(log_);
  }

 private:
  void handle(const SimEvent& ev) {
    seq_ = ev.seq;
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, Deliver>) {
            deliver(p);
          } else if constexpr (std::is_same_v<T, Tick>) {
            tick(p.agent);
          } else {
            plan(p.agent);
          }
        },
        ev.payload);
    if (dirty_) monitor();
  }

  void record(std::string kind, std::string from, std::string to, std::string summary,
              json data) {
    log_.add(LogRecord{q_.now(), seq_, std::move(kind), std::move(from), std::move(to),
                       std::move(summary), std::move(data)});
  }

  std::uint64_t send(Message m) {
    const auto from = sender(m).str();
    const auto to = receiver(m).str();
    const auto kind = kind_name(m);
    json data;
    std::visit(
        [&](const auto& msg) {
          if constexpr (requires { msg.ov; }) data["ov"] = ov_to_json(msg.ov);
        },
        m);
    const auto sent = bus_.send(q_, std::move(m));
    data["msg_id"] = sent.msg_id;
    data["deliver_at"] = sent.due;
    record("send", from, to, kind, std::move(data));
    return sent.msg_id;
  }

  void log_agent(const Runtime& r, const std::string& action, const std::vector<Edge>& edges,
                 json extra = json::object()) {
    json e = json::array();
    for (const auto& [a, b] : edges) e.push_back({to_string(a), to_string(b)});
    extra["clk"] = r.st.clk;
    extra["id"] = r.st.id;
    extra["action"] = action;
    extra["status"] = to_string(r.st.status);
    extra["edges"] = std::move(e);
    record("agent", agent_name(r.st.id), "", action, std::move(extra));
  }

  void request(Runtime& r, const OperationVolume& contr, const std::string& action,
               json extra) {
    auto [st, req] = on_plan(std::move(r.st), contr);
    r.st = std::move(st);
    extra["msg_id"] = send(std::move(req));
    extra["plan_len"] = r.st.plan_contr.len();
    log_agent(r, action,
              {{AgentStatus::kIdle, AgentStatus::kRequesting},
               {AgentStatus::kRequesting, AgentStatus::kWaiting}},
              std::move(extra));
  }

  void plan(AgentId i) {
    Runtime& r = agents_[i];
    r.st.clk = q_.now();
    if (r.st.status != AgentStatus::kIdle || r.succeeded || r.st.gave_up) return;
    if (!r.base) {
      r.base = make_flight_plan(cfg_.strategy, r.route.spawn, r.st.clk, r.route.waypoints,
                                cfg_.vehicle, cfg_.plan);
      request(r, r.base->ov, "plan", json::object());
      return;
    }
    const double delta = r.st.retry.next_delta;
    auto [st, req] = retry_reschedule(std::move(r.st), cfg_.retry);
    r.st = std::move(st);
    if (!req) {
      log_agent(r, "give_up", {}, json{{"attempts", r.st.retry.attempts}});
      return;
    }
    json extra{{"delta", delta}, {"attempt", r.st.retry.attempts}};
    extra["msg_id"] = send(std::move(*req));
    extra["plan_len"] = r.st.plan_contr.len();
    log_agent(r, "retry",
              {{AgentStatus::kIdle, AgentStatus::kRequesting},
               {AgentStatus::kRequesting, AgentStatus::kWaiting}},
              std::move(extra));
  }

  void deliver(const Deliver& d) {
    const auto from = sender(d.msg).str();
    const auto to = receiver(d.msg).str();
    record("deliver", from, to, kind_name(d.msg), json{{"msg_id", d.msg_id}});
    std::visit(
        [&](const auto& m) {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, Request>) {
            RequestOutcome out;
            am_ = on_request(std::move(am_), m.from, m.ov, &out);
            record("am", "AM", agent_name(m.from), "request",
                   json{{"msg_id", d.msg_id},
                        {"accepted", out.accepted},
                        {"queries", out.queries},
                        {"rects", out.rects},
                        {"max_other_t_last", time_to_json(out.max_other_t_last)}});
            dirty_ = true;
            drain_replies();
          } else if constexpr (std::is_same_v<T, Release>) {
            am_ = utm::on_release(std::move(am_), m.from, m.ov);
            record("am", "AM", agent_name(m.from), "release", json{{"msg_id", d.msg_id}});
            dirty_ = true;
            drain_replies();
          } else if constexpr (std::is_same_v<T, Violate>) {
            am_ = on_violate(std::move(am_), m.from);
            record("am", "AM", agent_name(m.from), "violate", json{{"msg_id", d.msg_id}});
          } else {
            reply(m);
          }
        },
        d.msg);
  }

  void drain_replies() {
    while (!am_.reply_set.empty()) {
      auto [s, msg] = make_reply(std::move(am_), am_.reply_set.front());
      am_ = std::move(s);
      send(std::move(msg));
    }
  }

  void reply(const Reply& m) {
    Runtime& r = agents_[m.to];
    r.st.clk = q_.now();
    const int warnings = r.st.warnings;
    r.st = on_reply(std::move(r.st), m.ov);
    const bool warned = r.st.warnings != warnings;
    dirty_ = true;
    if (r.st.status == AgentStatus::kMoving) {
      const double shift = r.st.plan_contr.t_first() - r.base->ov.t_first();
      std::vector<double> release = r.base->release;
      for (auto& t : release) t += shift;
      r.follower = WaypointFollower(r.route.spawn, r.route.waypoints, std::move(release));
      r.last_step = q_.now();
      log_agent(r, "reply", {{AgentStatus::kWaiting, AgentStatus::kMoving}},
                json{{"accepted", true}, {"warning", warned}, {"plan_len", r.st.plan_contr.len()}});
      schedule_tick(m.to);
      return;
    }
    log_agent(r, "reply", {{AgentStatus::kWaiting, AgentStatus::kReleasing}},
              json{{"accepted", false}, {"warning", warned}});
    auto [st, rel] = on_release(std::move(r.st));
    r.st = std::move(st);
    json extra{{"empty", !rel.has_value()}};
    if (rel) extra["msg_id"] = send(std::move(*rel));
    log_agent(r, "release", {{AgentStatus::kReleasing, AgentStatus::kIdle}}, std::move(extra));
    q_.push(q_.now() + cfg_.retry_wait, PlanTrigger{m.to});
  }

  void schedule_tick(AgentId i) {
    const double k = std::floor(q_.now() / cfg_.dt + 1e-9) + 1.0;
    q_.push(k * cfg_.dt, Tick{i});
  }

  void tick(AgentId i) {
    Runtime& r = agents_[i];
    const double now = q_.now();
    r.st.clk = now;
    if (r.st.status != AgentStatus::kMoving || r.st.violated) return;

    r.st.pos = r.follower.step(r.st.pos, r.last_step, now - r.last_step, cfg_.vehicle, r.rng);
    r.last_step = now;

    auto [st, v] = check_violation(std::move(r.st));
    r.st = std::move(st);
    if (v) {
      json extra{{"plan_len", r.st.plan_contr.len()},
                 {"pos", r.st.pos}};
      extra["msg_id"] = send(*v);
      log_agent(r, "violate", {{AgentStatus::kMoving, AgentStatus::kMoving}}, std::move(extra));
      dirty_ = true;
      return;  // halted for good
    }
    while (next_region_enabled(r.st)) {
      r.st = on_next_region(std::move(r.st));
      log_agent(r, "next_region", {{AgentStatus::kMoving, AgentStatus::kMoving}},
                json{{"plan_len", r.st.plan_contr.len()}});
    }
    if (succeed_enabled(r.st)) {
      auto [st2, rel] = on_succeed(std::move(r.st));
      r.st = std::move(st2);
      r.succeeded = true;
      dirty_ = true;
      json extra;
      extra["msg_id"] = send(std::move(rel));
      log_agent(r, "succeed",
                {{AgentStatus::kMoving, AgentStatus::kReleasing},
                 {AgentStatus::kReleasing, AgentStatus::kIdle}},
                std::move(extra));
      return;
    }
    schedule_tick(i);
  }

  void monitor() {
    dirty_ = false;
    if (!check_manager_invariant(am_)) {
      record("monitor", "", "", "manager_disjoint", json::object());
    }
    for (const auto& r : agents_) {
      if (!refines(r.st.curr_contr, am_.contr_arr.at(r.st.id))) {
        record("monitor", agent_name(r.st.id), "", "refinement", json::object());
      }
    }
    for (std::size_t a = 0; a < agents_.size(); ++a) {
      if (agents_[a].st.violated) continue;
      for (std::size_t b = a + 1; b < agents_.size(); ++b) {
        if (agents_[b].st.violated) continue;
        if (!disjoint(agents_[a].st.curr_contr, agents_[b].st.curr_contr)) {
          record("monitor", agent_name(agents_[a].st.id), agent_name(agents_[b].st.id),
                 "agent_disjoint", json::object());
        }
      }
    }
  }

  const ScenarioConfig& cfg_;
  EventQueue q_;
  Bus bus_;
  ManagerState am_;
  std::vector<Runtime> agents_;
  EventLog log_;
  std::uint64_t seq_ = 0;
  bool dirty_ = true;
};

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& config) {
  config.validate();
  World w(config);
  EventLog log = w.run();
  MetricsReport report = compute_metrics(log, config);
  return {std::move(report), std::move(log)};
}

// ---------------------------------------------------------------------------
// Metrics

MetricsReport compute_metrics(const EventLog& log, const ScenarioConfig& config) {
  MetricsReport m;
  m.map = to_string(config.map);
  if (config.map == MapKind::kRandomN) m.map += std::to_string(config.random_n);
  m.n_agents = config.n_agents;
  m.strategy = to_string(config.strategy);
  m.seed = config.seed;
  m.delay = config.delay;

  const auto n = static_cast<std::size_t>(std::max(config.n_agents, 0));
  std::vector<std::optional<double>> first(n), done(n);
  m.response_time.assign(n, std::nullopt);
  bool ended = false;
  double end_t = 0.0;

  for (const auto& r : log.records()) {
    if (r.kind == "send" && r.summary == "request") {
      const auto i = std::stoul(r.from);
      if (i < n && !first[i]) first[i] = r.due;
    } else if (r.kind == "am" && r.summary == "request") {
      ++m.requests;
      if (r.data.at("accepted").get<bool>()) ++m.accepted;
      m.emptiness_queries += r.data.at("queries").get<std::uint64_t>();
      m.rects_checked += r.data.at("rects").get<std::uint64_t>();
    } else if (r.kind == "agent") {
      const auto i = r.data.at("id").get<std::size_t>();
      if (r.summary == "succeed" && i < n) {
        done[i] = r.due;
      } else if (r.summary == "violate") {
        ++m.violations;
        m.violated_pairs += r.data.at("plan_len").get<std::uint64_t>();
      } else if (r.summary == "reply") {
        if (r.data.value("warning", false)) ++m.warnings;
        if (r.data.at("accepted").get<bool>()) {
          m.accepted_pairs += r.data.at("plan_len").get<std::uint64_t>();
        }
      } else if (r.summary == "give_up") {
        ++m.gave_up;
      }
    } else if (r.kind == "monitor") {
      ++m.monitor_breaches;
    } else if (r.kind == "run" && r.summary == "end") {
      ended = true;
      end_t = r.due;
    }
  }

  std::size_t succeeded = 0;
  double sum = 0.0;
  double last_done = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!done[i]) continue;
    ++succeeded;
    last_done = std::max(last_done, *done[i]);
    if (first[i]) {
      m.response_time[i] = *done[i] - *first[i];
      sum += *m.response_time[i];
      m.max_response_time = std::max(m.max_response_time, *m.response_time[i]);
    }
  }
  m.liveness = n > 0 && succeeded == n;
  m.partial = !ended;
  m.avg_response_time = succeeded > 0 ? sum / static_cast<double>(succeeded) : 0.0;
  m.makespan = m.liveness ? last_done : end_t;
  if (m.makespan > 0.0) {
    m.qe_per_s = static_cast<double>(m.emptiness_queries) / m.makespan;
    m.rect_per_s = static_cast<double>(m.rects_checked) / m.makespan;
  }
  if (m.accepted_pairs > 0) {
    m.violation_rate = std::min(
        1.0, static_cast<double>(m.violated_pairs) / static_cast<double>(m.accepted_pairs));
  }
  return m;
}

json to_json(const MetricsReport& r) {
  json rt = json::array();
  for (const auto& t : r.response_time) rt.push_back(t ? json(*t) : json(nullptr));
  return json{{"map", r.map},
              {"n_agents", r.n_agents},
              {"strategy", r.strategy},
              {"seed", r.seed},
              {"delay", r.delay},
              {"response_time", rt},
              {"max_response_time", r.max_response_time},
              {"avg_response_time", r.avg_response_time},
              {"makespan", r.makespan},
              {"requests", r.requests},
              {"accepted", r.accepted},
              {"emptiness_queries", r.emptiness_queries},
              {"rects_checked", r.rects_checked},
              {"qe_per_s", r.qe_per_s},
              {"rect_per_s", r.rect_per_s},
              {"violations", r.violations},
              {"violated_pairs", r.violated_pairs},
              {"accepted_pairs", r.accepted_pairs},
              {"violation_rate", r.violation_rate},
              {"warnings", r.warnings},
              {"monitor_breaches", r.monitor_breaches},
              {"gave_up", r.gave_up},
              {"liveness", r.liveness},
              {"partial", r.partial}};
}

std::string csv_header() {
  return "map,n_agents,strategy,seed,delay,liveness,makespan,max_response_time,"
         "avg_response_time,emptiness_queries,rects_checked,qe_per_s,rect_per_s,"
         "violation_rate,warnings,monitor_breaches";
}

std::string csv_row(const MetricsReport& r) {
  std::ostringstream os;
  os.precision(10);
  os << r.map << ',' << r.n_agents << ',' << r.strategy << ',' << r.seed << ',' << r.delay << ','
     << (r.liveness ? 1 : 0) << ',' << r.makespan << ',' << r.max_response_time << ','
     << r.avg_response_time << ',' << r.emptiness_queries << ',' << r.rects_checked << ','
     << r.qe_per_s << ',' << r.rect_per_s << ',' << r.violation_rate << ',' << r.warnings << ','
     << r.monitor_breaches;
  return os.str();
}

// ---------------------------------------------------------------------------
// Log checks

std::size_t count_release_overtakes(const EventLog& log) {
  struct Pending {
    std::map<std::uint64_t, std::size_t> releases;  // msg id -> send index
    std::optional<std::size_t> last_request;
  };
  std::map<std::string, Pending> per_agent;
  std::size_t hits = 0;
  const auto& recs = log.records();
  for (std::size_t k = 0; k < recs.size(); ++k) {
    const auto& r = recs[k];
    if (r.kind == "send") {
      const auto id = r.data.at("msg_id").get<std::uint64_t>();
      if (r.summary == "release") {
        per_agent[r.from].releases[id] = k;
      } else if (r.summary == "request") {
        per_agent[r.from].last_request = k;
      } else if (r.summary == "reply") {
        const auto& p = per_agent[r.to];
        for (const auto& [mid, idx] : p.releases) {
          if (p.last_request && idx < *p.last_request) {
            ++hits;
            break;
          }
        }
      }
    } else if (r.kind == "deliver" && r.summary == "release") {
      per_agent[r.from].releases.erase(r.data.at("msg_id").get<std::uint64_t>());
    }
  }
  return hits;
}

std::size_t count_fifo_violations(const EventLog& log) {
  std::map<std::string, std::deque<std::uint64_t>> outstanding;
  std::size_t bad = 0;
  for (const auto& r : log.records()) {
    if (r.kind == "send") {
      outstanding[r.from].push_back(r.data.at("msg_id").get<std::uint64_t>());
    } else if (r.kind == "deliver") {
      auto& q = outstanding[r.from];
      const auto id = r.data.at("msg_id").get<std::uint64_t>();
      if (!q.empty() && q.front() == id) {
        q.pop_front();
        continue;
      }
      ++bad;
      q.erase(std::remove(q.begin(), q.end(), id), q.end());
    }
  }
  return bad;
}

namespace {

AgentStatus status_from_string(const std::string& s) {
  for (auto st : {AgentStatus::kIdle, AgentStatus::kRequesting, AgentStatus::kWaiting,
                  AgentStatus::kMoving, AgentStatus::kReleasing}) {
    if (to_string(st) == s) return st;
  }
  throw std::invalid_argument("unknown status " + s);
}

}  // namespace

std::size_t count_bad_status_edges(const EventLog& log) {
  std::size_t bad = 0;
  std::map<std::string, AgentStatus> current;
  for (const auto& r : log.records()) {
    if (r.kind != "agent") continue;
    auto cur = current.try_emplace(r.from, AgentStatus::kIdle).first;
    for (const auto& e : r.data.at("edges")) {
      const auto a = status_from_string(e.at(0).get<std::string>());
      const auto b = status_from_string(e.at(1).get<std::string>());
      if (a != cur->second || !is_allowed_transition(a, b)) ++bad;
      cur->second = b;
    }
  }
  return bad;
}

std::vector<RescheduleEvidence> find_reschedule_evidence(const EventLog& log) {
  struct Retry {
    AgentId agent;
    double clk;
    double delta;
  };
  std::map<std::uint64_t, Retry> retries;
  std::vector<RescheduleEvidence> out;
  for (const auto& r : log.records()) {
    if (r.kind == "agent" && r.summary == "retry") {
      retries[r.data.at("msg_id").get<std::uint64_t>()] =
          Retry{r.data.at("id").get<AgentId>(), r.data.at("clk").get<double>(),
                r.data.at("delta").get<double>()};
    } else if (r.kind == "am" && r.summary == "request" && r.data.at("accepted").get<bool>()) {
      auto it = retries.find(r.data.at("msg_id").get<std::uint64_t>());
      if (it == retries.end()) continue;
      const double t_last = time_from_json(r.data.at("max_other_t_last"));
      const double delta0 = t_last - it->second.clk;
      if (it->second.delta >= delta0) {
        out.push_back({it->second.agent, it->second.clk, it->second.delta, delta0});
      }
    }
  }
  return out;
}

ReplayResult replay_log(const EventLog& log) {
  ReplayResult res;
  res.release_overtakes = count_release_overtakes(log);
  res.fifo_violations = count_fifo_violations(log);
  res.bad_edges = count_bad_status_edges(log);

  ManagerState am;
  std::vector<OperationVolume> curr;
  std::vector<OperationVolume> plan;
  std::vector<bool> violated;
  std::map<std::uint64_t, OperationVolume> payload;

  auto check = [&] {
    if (!check_manager_invariant(am)) ++res.manager_breaches;
    for (std::size_t i = 0; i < curr.size(); ++i) {
      if (!refines(curr[i], am.contr_arr.at(static_cast<AgentId>(i)))) ++res.refinement_breaches;
      if (violated[i]) continue;
      for (std::size_t j = i + 1; j < curr.size(); ++j) {
        if (!violated[j] && !disjoint(curr[i], curr[j])) ++res.disjointness_breaches;
      }
    }
  };

  for (const auto& r : log.records()) {
    ++res.events;
    if (r.kind == "run" && r.summary == "start") {
      std::map<AgentId, OperationVolume> init;
      for (const auto& j : r.data.at("initial")) {
        const auto id = static_cast<AgentId>(curr.size());
        curr.push_back(ov_from_json(j));
        plan.push_back(curr.back());
        violated.push_back(false);
        init.emplace(id, curr.back());
      }
      am = make_manager(init);
      check();
      continue;
    }
    if (r.kind == "send") {
      const auto id = r.data.at("msg_id").get<std::uint64_t>();
      if (!r.data.contains("ov")) continue;
      auto ov = ov_from_json(r.data.at("ov"));
      if (r.summary == "request") {
        plan.at(std::stoul(r.from)) = ov;
      } else if (r.summary == "release") {
        auto& c = curr.at(std::stoul(r.from));
        c = simplify(combine(c, ov, SetOp::kDifference));
        check();
      } else if (r.summary == "reply") {
        const auto to = static_cast<AgentId>(std::stoul(r.to));
        if (!(am.contr_arr.at(to) == ov)) ++res.reply_mismatches;
      }
      payload.insert_or_assign(id, std::move(ov));
    } else if (r.kind == "deliver") {
      const auto id = r.data.at("msg_id").get<std::uint64_t>();
      auto it = payload.find(id);
      if (r.summary == "request" && it != payload.end()) {
        am = on_request(std::move(am), static_cast<AgentId>(std::stoul(r.from)), it->second);
        am.reply_set.clear();
        check();
      } else if (r.summary == "release" && it != payload.end()) {
        am = on_release(std::move(am), static_cast<AgentId>(std::stoul(r.from)), it->second);
        check();
      } else if (r.summary == "reply" && it != payload.end()) {
        const auto i = std::stoul(r.to);
        if (refines(plan.at(i), it->second)) {
          curr.at(i) = it->second;
          check();
        }
      }
      if (it != payload.end()) payload.erase(it);
    } else if (r.kind == "agent" && r.summary == "violate") {
      violated.at(std::stoul(r.from)) = true;
    }
  }
  return res;
}

json to_json(const ReplayResult& r) {
  return json{{"events", r.events},
              {"manager_breaches", r.manager_breaches},
              {"refinement_breaches", r.refinement_breaches},
              {"disjointness_breaches", r.disjointness_breaches},
              {"reply_mismatches", r.reply_mismatches},
              {"release_overtakes", r.release_overtakes},
              {"fifo_violations", r.fifo_violations},
              {"bad_edges", r.bad_edges},
              {"ok", r.ok()}};
}

}  // namespace utm
