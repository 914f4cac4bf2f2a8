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

// The L-block: three binary pixels carrying two payload bits and one cue
// bit. The cue bit is the block's apparent brightness (W group = weight >= 2,
// B group = weight <= 1); which of the four group members carries which bit
// pair is the secret codebook.

#ifndef CUEBAR_LBLOCK_HPP_
#define CUEBAR_LBLOCK_HPP_

#include <bit>
#include <cstdint>

#include "cuebar/keys.hpp"

namespace cuebar {

struct LBlock {
  std::uint8_t p1 = 0, p2 = 0, p3 = 0;  // 0 = black, 1 = white

  static LBlock from_pattern(Pattern p) {
    return {static_cast<std::uint8_t>((p >> 2) & 1), static_cast<std::uint8_t>((p >> 1) & 1),
            static_cast<std::uint8_t>(p & 1)};
  }
  Pattern pattern() const { return static_cast<Pattern>(p1 << 2 | p2 << 1 | p3); }
  int weight() const { return p1 + p2 + p3; }
  bool white() const { return weight() >= 2; }
  LBlock complemented() const {
    return {static_cast<std::uint8_t>(p1 ^ 1), static_cast<std::uint8_t>(p2 ^ 1),
            static_cast<std::uint8_t>(p3 ^ 1)};
  }

  friend bool operator==(const LBlock&, const LBlock&) = default;
};

inline bool is_white_pattern(Pattern p) { return std::popcount(static_cast<unsigned>(p & 7)) >= 2; }

// pair is b1b2 as an integer in [0, 4); cue is 1 for a bright block.
inline LBlock encode_pair(int pair, int cue, const LBlockCodebook& cb) {
  return LBlock::from_pattern(cue ? cb.white(pair & 3) : cb.black(pair & 3));
}

struct DecodedPair {
  int pair = 0;
  int cue = 0;
  friend bool operator==(const DecodedPair&, const DecodedPair&) = default;
};

// Total on all 8 patterns.
inline DecodedPair decode_pair(const LBlock& blk, const LBlockCodebook& cb) {
  return {cb.pair_of(blk.pattern()), blk.white() ? 1 : 0};
}

enum class FlipAttacker {
  kOppositeGroupBlind,  // replaces with a uniform block of the other group
  kSameGroupBlind,      // replaces with a uniform block of the same group
  kKnowsCodebook,       // forges the block that carries the same pair
};

// Exact probability, by enumeration over every codebook, bit pair, cue bit
// and attacker choice, that the tampered block still decodes to the
// original bit pair.
inline double brightness_flip_miss_rate(FlipAttacker attacker = FlipAttacker::kOppositeGroupBlind) {
  long long hits = 0, total = 0;
  for (int index = 0; index < kCodebookCount; ++index) {
    LBlockCodebook cb(index);
    for (int pair = 0; pair < 4; ++pair) {
      for (int cue = 0; cue < 2; ++cue) {
        if (attacker == FlipAttacker::kKnowsCodebook) {
          LBlock forged = encode_pair(pair, cue ^ 1, cb);
          hits += decode_pair(forged, cb).pair == pair;
          ++total;
          continue;
        }
        const int target_cue = attacker == FlipAttacker::kOppositeGroupBlind ? cue ^ 1 : cue;
        const auto& group = target_cue ? kGroupW : kGroupB;
        for (Pattern choice : group) {
          hits += decode_pair(LBlock::from_pattern(choice), cb).pair == pair;
          ++total;
        }
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace cuebar

#endif  // CUEBAR_LBLOCK_HPP_
