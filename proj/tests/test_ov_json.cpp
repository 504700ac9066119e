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

#include "support/ov_oracle.hpp"
#include "utm/ov_json.hpp"

namespace utm {
namespace {

TEST(OvJson, TextFormat) {
  const OperationVolume c(
      std::vector<VolumePair>{{BoxSet{Box({0, 0, 0}, {1, 2, 3})}, kNegInf}, {BoxSet{}, 2.5}});
  const auto j = ov_to_json(c);
  EXPECT_EQ(j.dump(),
            R"([{"boxes":[{"hi":[1.0,2.0,3.0],"lo":[0.0,0.0,0.0]}],"time":"-inf"},)"
            R"({"boxes":[],"time":2.5}])");
  EXPECT_EQ(ov_from_json(j), c);
}

TEST(OvJson, OpenFacesRoundTrip) {
  const BoxSet r(subtract(Box({0, 0, 0}, {2, 2, 2}), Box({0, 0, 0}, {1, 1, 1})));
  const OperationVolume c(r, 0);
  const auto back = ov_from_json(nlohmann::json::parse(ov_to_json(c).dump()));
  EXPECT_EQ(back, c);
  EXPECT_FALSE(contains(back, {{1, 0.5, 0.5}, 0}));
}

TEST(OvJson, RandomRoundTrip) {
  oracle::Rng rng(9);
  for (int i = 0; i < 200; ++i) {
    const auto c = combine(oracle::random_ov(rng), oracle::random_ov(rng), SetOp::kDifference);
    ASSERT_EQ(ov_from_json(nlohmann::json::parse(ov_to_json(c).dump())), c);
  }
}

TEST(OvJson, RejectsUnknownTimeString) {
  EXPECT_THROW(time_from_json("+inf"), InvalidVolume);
  EXPECT_EQ(time_from_json("-inf"), kNegInf);
}

}  // namespace
}  // namespace utm
