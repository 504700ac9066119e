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

#include "utm/simnet.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace utm {

std::uint64_t EventQueue::push(double due, EventPayload payload) {
  if (due < now_) throw std::invalid_argument("EventQueue::push: event scheduled in the past");
  const auto seq = next_seq_++;
  heap_.push(SimEvent{due, seq, std::move(payload)});
  return seq;
}

SimEvent EventQueue::pop() {
  SimEvent ev = heap_.top();
  heap_.pop();
  now_ = ev.due;
  return ev;
}

void EventQueue::advance_to(double t) {
  if (t < now_) throw std::invalid_argument("EventQueue::advance_to: time goes backwards");
  if (!heap_.empty() && heap_.top().due < t) {
    throw std::invalid_argument("EventQueue::advance_to: pending events before target time");
  }
  now_ = t;
}

Bus::Bus(DelayModel model) : model_(model), rng_(model.seed) {}

SentMessage Bus::send(EventQueue& q, Message msg) {
  double due = q.now() + model_.delay;
  if (model_.jitter > 0.0) {
    std::uniform_real_distribution<double> extra(0.0, model_.jitter);
    due += extra(rng_);
  }
  const Endpoint from = sender(msg);
  auto it = last_due_.find(from);
  if (it != last_due_.end()) due = std::max(due, it->second);
  last_due_[from] = due;
  const auto id = q.push(due, Deliver{q.next_seq(), std::move(msg)});
  return {id, due};
}

nlohmann::json to_json(const LogRecord& r) {
  return nlohmann::json{{"due", r.due},   {"seq", r.seq},         {"kind", r.kind},
                        {"from", r.from}, {"to", r.to},           {"summary", r.summary},
                        {"data", r.data}};
}

LogRecord log_record_from_json(const nlohmann::json& j) {
  LogRecord r;
  r.due = j.at("due").get<double>();
  r.seq = j.at("seq").get<std::uint64_t>();
  r.kind = j.at("kind").get<std::string>();
  r.from = j.at("from").get<std::string>();
  r.to = j.at("to").get<std::string>();
  r.summary = j.at("summary").get<std::string>();
  if (j.contains("data")) r.data = j.at("data");
  return r;
}

std::string EventLog::to_jsonl() const {
  std::ostringstream os;
  write(os);
  return os.str();
}

void EventLog::write(std::ostream& os) const {
  for (const auto& r : records_) os << to_json(r).dump() << '\n';
}

EventLog EventLog::parse(std::istream& is) {
  EventLog log;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    log.add(log_record_from_json(nlohmann::json::parse(line)));
  }
  return log;
}

}  // namespace utm
