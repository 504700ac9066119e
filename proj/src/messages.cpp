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

#include "utm/messages.hpp"

namespace utm {

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
}  // namespace

Endpoint sender(const Message& m) {
  return std::visit(overloaded{[](const Reply&) { return Endpoint::am(); },
                               [](const auto& x) { return Endpoint::agent(x.from); }},
                    m);
}

Endpoint receiver(const Message& m) {
  return std::visit(overloaded{[](const Reply& r) { return Endpoint::agent(r.to); },
                               [](const auto&) { return Endpoint::am(); }},
                    m);
}

std::string kind_name(const Message& m) {
  return std::visit(overloaded{[](const Request&) { return std::string("request"); },
                               [](const Reply&) { return std::string("reply"); },
                               [](const Release&) { return std::string("release"); },
                               [](const Violate&) { return std::string("violate"); }},
                    m);
}

}  // namespace utm
