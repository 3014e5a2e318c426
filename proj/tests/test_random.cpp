// Copyright 2026 The powmax Authors.
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

#include <cmath>
#include <cstdint>
#include <set>

#include "powmax/random.hpp"

namespace {

using powmax::random::Philox4x32;
using powmax::random::Stream;

// Published known-answer vectors of Philox4x32-10.
TEST(Philox, KnownAnswerZero) {
  const auto out = Philox4x32::block({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out, (Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
}

TEST(Philox, KnownAnswerAllOnes) {
  const auto out = Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                     {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(out, (Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
}

TEST(Philox, KnownAnswerPiDigits) {
  const auto out = Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                     {0xa4093822u, 0x299f31d0u});
  EXPECT_EQ(out, (Philox4x32::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(Stream, UniformsAreInOpenUnitInterval) {
  Stream s(42, 0);
  for (int i = 0; i < 100000; ++i) {
    const double u = s.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Stream, SameSeedAndIdReproduce) {
  Stream a(9, 3), b(9, 3);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(a.normal(), b.normal());
}

TEST(Stream, DistinctIdsGiveDistinctSequences) {
  std::set<double> firsts;
  for (std::uint64_t id = 0; id < 200; ++id) firsts.insert(Stream(1, id).uniform());
  EXPECT_EQ(firsts.size(), 200u);
}

TEST(Stream, NormalMomentsLookStandard) {
  Stream s(2024, 0);
  const int m = 200000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < m; ++i) {
    const double z = s.normal();
    sum += z;
    sq += z * z;
  }
  const double mean = sum / m;
  const double var = sq / m - mean * mean;
  EXPECT_NEAR(mean, 0.0, 4.0 / std::sqrt(m));
  EXPECT_NEAR(var, 1.0, 4.0 * std::sqrt(2.0 / m));
}

}  // namespace
