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

#include "utm/ov_json.hpp"

#include <string>

namespace utm {

void to_json(nlohmann::json& j, const Box& b) {
  j = nlohmann::json{{"lo", b.lo}, {"hi", b.hi}};
  if (!b.closed()) {
    j["lo_open"] = b.lo_open;
    j["hi_open"] = b.hi_open;
  }
}

void from_json(const nlohmann::json& j, Box& b) {
  b = Box(j.at("lo").get<Vec3>(), j.at("hi").get<Vec3>());
  if (j.contains("lo_open")) b.lo_open = j.at("lo_open").get<std::array<bool, 3>>();
  if (j.contains("hi_open")) b.hi_open = j.at("hi_open").get<std::array<bool, 3>>();
}

nlohmann::json time_to_json(TimePoint t) {
  if (is_neg_inf(t)) return "-inf";
  return t;
}

TimePoint time_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "-inf") return kNegInf;
    throw InvalidVolume("unrecognised time string: " + j.get<std::string>());
  }
  return j.get<double>();
}

nlohmann::json ov_to_json(const OperationVolume& c) {
  auto out = nlohmann::json::array();
  for (const auto& p : c.pairs()) {
    out.push_back({{"time", time_to_json(p.time)}, {"boxes", p.region.boxes()}});
  }
  return out;
}

OperationVolume ov_from_json(const nlohmann::json& j) {
  std::vector<VolumePair> pairs;
  for (const auto& item : j) {
    pairs.push_back(VolumePair{BoxSet(item.at("boxes").get<std::vector<Box>>()),
                               time_from_json(item.at("time"))});
  }
  return OperationVolume(std::move(pairs));
}

}  // namespace utm
