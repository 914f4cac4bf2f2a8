// Copyright 2026 The cuebar Authors
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
//
///////////////////////////////////////////////////////////////////////////////

#include "cuebar/lblock.hpp"

#include <gtest/gtest.h>

namespace cuebar {
namespace {

TEST(LBlock, IdentityCodebookExamples) {
  const auto id = LBlockCodebook::identity();
  EXPECT_EQ(encode_pair(0b00, 1, id).pattern(), 0b011);
  EXPECT_EQ(encode_pair(0b00, 0, id).pattern(), 0b000);
  EXPECT_EQ(decode_pair(LBlock::from_pattern(0b101), id), (DecodedPair{0b01, 1}));
  EXPECT_EQ(decode_pair(LBlock::from_pattern(0b100), id), (DecodedPair{0b11, 0}));
}

TEST(LBlock, PatternBitOrder) {
  LBlock b = LBlock::from_pattern(0b100);
  EXPECT_EQ(b.p1, 1);
  EXPECT_EQ(b.p2, 0);
  EXPECT_EQ(b.p3, 0);
  EXPECT_EQ(b.complemented().pattern(), 0b011);
}

TEST(LBlock, ExhaustiveRoundtripAndGroupPreservation) {
  int cases = 0;
  for (int idx = 0; idx < kCodebookCount; ++idx) {
    LBlockCodebook cb(idx);
    for (int pair = 0; pair < 4; ++pair)
      for (int v = 0; v < 2; ++v) {
        LBlock b = encode_pair(pair, v, cb);
        ASSERT_EQ(b.weight() >= 2, v == 1);
        ASSERT_EQ(decode_pair(b, cb), (DecodedPair{pair, v}));
        ++cases;
      }
  }
  EXPECT_EQ(cases, 4608);
}

TEST(LBlock, DecodeIsTotal) {
  for (int idx = 0; idx < kCodebookCount; idx += 37) {
    LBlockCodebook cb(idx);
    for (int p = 0; p < 8; ++p) {
      DecodedPair d = decode_pair(LBlock::from_pattern(static_cast<Pattern>(p)), cb);
      EXPECT_GE(d.pair, 0);
      EXPECT_LT(d.pair, 4);
      EXPECT_EQ(d.cue, std::popcount(static_cast<unsigned>(p)) >= 2);
    }
  }
}

// Independent count: for a fixed codebook, exactly one element of the other
// group carries the same pair, so each (codebook, pair, cue) contributes 1 of
// 4 equally likely choices.
TEST(Fragility, MissRateIsExactlyOneQuarter) {
  long hits = 0, total = 0;
  for (int idx = 0; idx < kCodebookCount; ++idx) {
    LBlockCodebook cb(idx);
    for (int pair = 0; pair < 4; ++pair)
      for (int v = 0; v < 2; ++v)
        for (int p = 0; p < 8; ++p) {
          if (is_white_pattern(static_cast<Pattern>(p)) == (v == 1)) continue;
          hits += cb.pair_of(static_cast<Pattern>(p)) == pair;
          ++total;
        }
  }
  EXPECT_EQ(total, 576L * 4 * 2 * 4);
  EXPECT_EQ(hits * 4, total);
  EXPECT_EQ(brightness_flip_miss_rate(FlipAttacker::kOppositeGroupBlind), 0.25);
}

TEST(Fragility, SameGroupReplacementAlsoQuarterAndKeepsCue) {
  EXPECT_EQ(brightness_flip_miss_rate(FlipAttacker::kSameGroupBlind), 0.25);
  const auto cb = LBlockCodebook(123);
  for (int pair = 0; pair < 4; ++pair)
    for (Pattern p : kGroupW)
      EXPECT_EQ(decode_pair(LBlock::from_pattern(p), cb).cue,
                decode_pair(encode_pair(pair, 1, cb), cb).cue);
}

TEST(Fragility, CodebookHolderForgesPerfectly) {
  EXPECT_EQ(brightness_flip_miss_rate(FlipAttacker::kKnowsCodebook), 1.0);
}

// Complementing an L-block always flips its cue bit; the carried pair
// changes in 0, 1 or 2 bits, and stays intact for exactly a quarter of
// codebooks.
TEST(Fragility, ComplementChangesAtMostTwoBits) {
  for (int pair = 0; pair < 4; ++pair)
    for (int v = 0; v < 2; ++v) {
      int unchanged = 0;
      for (int idx = 0; idx < kCodebookCount; ++idx) {
        LBlockCodebook cb(idx);
        DecodedPair d = decode_pair(encode_pair(pair, v, cb).complemented(), cb);
        EXPECT_EQ(d.cue, 1 - v);
        EXPECT_LE(std::popcount(static_cast<unsigned>(d.pair ^ pair)), 2);
        unchanged += d.pair == pair;
      }
      EXPECT_EQ(unchanged * 4, kCodebookCount);
    }
}

}  // namespace
}  // namespace cuebar
