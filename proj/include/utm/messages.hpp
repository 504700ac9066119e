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
#include <stdexcept>
#include <string>
#include <variant>

#include "utm/operation_volume.hpp"

namespace utm {

using AgentId = std::uint32_t;

/// A transition was fired outside its precondition.
class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Either the airspace manager or one agent.
struct Endpoint {
  bool manager = true;
  AgentId id = 0;

  static Endpoint am() { return {}; }
  static Endpoint agent(AgentId i) { return {false, i}; }

  std::string str() const { return manager ? std::string("AM") : std::to_string(id); }
  bool operator==(const Endpoint&) const = default;
  auto operator<=>(const Endpoint&) const = default;
};

struct Request {
  AgentId from = 0;
  OperationVolume ov{BoxSet{}, kNegInf};
};

struct Reply {
  AgentId to = 0;
  OperationVolume ov{BoxSet{}, kNegInf};
};

struct Release {
  AgentId from = 0;
  OperationVolume ov{BoxSet{}, kNegInf};
};

struct Violate {
  AgentId from = 0;
};

using Message = std::variant<Request, Reply, Release, Violate>;

Endpoint sender(const Message& m);
Endpoint receiver(const Message& m);
std::string kind_name(const Message& m);

}  // namespace utm
