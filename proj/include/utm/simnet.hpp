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
#include <iosfwd>
#include <map>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "utm/messages.hpp"

namespace utm {

struct Deliver {
  std::uint64_t msg_id = 0;
  Message msg;
};

struct Tick {
  AgentId agent = 0;
};

struct PlanTrigger {
  AgentId agent = 0;
};

using EventPayload = std::variant<Deliver, Tick, PlanTrigger>;

struct SimEvent {
  double due = 0.0;
  std::uint64_t seq = 0;
  EventPayload payload;
};

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Min-queue on (due, seq). `seq` is global and strictly increasing, so
/// events scheduled for the same instant pop in scheduling order.
class EventQueue {
 public:
  std::uint64_t push(double due, EventPayload payload);
  SimEvent pop();
  const SimEvent& top() const { return heap_.top(); }
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  double now() const { return now_; }
  void advance_to(double t);
  std::uint64_t next_seq() const { return next_seq_; }

 private:
  struct Later {
    bool operator()(const SimEvent& a, const SimEvent& b) const {
      if (a.due != b.due) return a.due > b.due;
      return a.seq > b.seq;
    }
  };
  std::priority_queue<SimEvent, std::vector<SimEvent>, Later> heap_;
  std::uint64_t next_seq_ = 0;
  double now_ = 0.0;
};

/// Message latency. With `jitter` > 0 each message gets an extra seeded
/// uniform delay in [0, jitter), clamped so a sender's messages never
/// overtake each other.
struct DelayModel {
  double delay = 0.0;
  double jitter = 0.0;
  std::uint64_t seed = 0;
};

struct SentMessage {
  std::uint64_t msg_id = 0;
  double due = 0.0;
};

class Bus {
 public:
  explicit Bus(DelayModel model = {});

  /// Schedules delivery of `msg` at now + delay. The message id is the seq
  /// of its Deliver event.
  SentMessage send(EventQueue& q, Message msg);

  const DelayModel& model() const { return model_; }

 private:
  DelayModel model_;
  std::mt19937_64 rng_;
  std::map<Endpoint, double> last_due_;
};

/// Pops events in (due, seq) order until the queue is empty or the next
/// event is later than `t_end`, then moves the clock to `t_end`. Throws
/// SimulationError when the backlog exceeds `max_backlog`.
template <class Handler>
void run_until(EventQueue& q, double t_end, Handler&& handle, std::size_t max_backlog) {
  if (t_end < q.now()) throw std::invalid_argument("run_until: t_end is in the past");
  while (!q.empty() && q.top().due <= t_end) {
    if (q.size() > max_backlog) {
      throw SimulationError("event backlog of " + std::to_string(q.size()) +
                            " exceeds bound " + std::to_string(max_backlog));
    }
    handle(q.pop());
  }
  q.advance_to(t_end);
}

/// One line of the replayable event log.
struct LogRecord {
  double due = 0.0;
  std::uint64_t seq = 0;
  std::string kind;
  std::string from;
  std::string to;
  std::string summary;
  nlohmann::json data = nlohmann::json::object();

  bool operator==(const LogRecord&) const = default;
};

nlohmann::json to_json(const LogRecord& r);
LogRecord log_record_from_json(const nlohmann::json& j);

class EventLog {
 public:
  void add(LogRecord r) { records_.push_back(std::move(r)); }
  const std::vector<LogRecord>& records() const { return records_; }

  /// One JSON object per line.
  std::string to_jsonl() const;
  void write(std::ostream& os) const;
  static EventLog parse(std::istream& is);

 private:
  std::vector<LogRecord> records_;
};

}  // namespace utm
