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

#include <json.hpp>

#include "utm/geometry.hpp"
#include "utm/operation_volume.hpp"

// Text form of an operation volume:
//
//   [{"time": "-inf", "boxes": [{"lo": [x, y, z], "hi": [x, y, z]}]},
//    {"time": 12.5,   "boxes": [...]}]
//
// Boxes carry "lo_open"/"hi_open" flag triples only when some face is open.

namespace utm {

void to_json(nlohmann::json& j, const Box& b);
void from_json(const nlohmann::json& j, Box& b);

nlohmann::json time_to_json(TimePoint t);
TimePoint time_from_json(const nlohmann::json& j);

nlohmann::json ov_to_json(const OperationVolume& c);
OperationVolume ov_from_json(const nlohmann::json& j);

}  // namespace utm
