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

#include "cuebar/keys.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

namespace cuebar {
namespace {

TEST(Keygen, DeterministicPerSeed) {
  EXPECT_EQ(keygen(7), keygen(7));
}

TEST(Keygen, DistinctSeedsGiveDistinctKeys) {
  EXPECT_NE(keygen(7).mac_key(), keygen(8).mac_key());
  std::set<Block128> macs;
  for (std::uint64_t s = 0; s < 1000; ++s) macs.insert(keygen(s).mac_key());
  EXPECT_EQ(macs.size(), 1000u);
}

TEST(Keygen, SubKeysAreIndependent) {
  SessionKey k = keygen(0);
  EXPECT_EQ(k.mac_key().size(), 16u);
  EXPECT_NE(k.mac_key(), k.enc_key());
  EXPECT_NE(k.enc_key(), k.cue_key());
}

TEST(KeyFile, FormatIsThreeHexLines) {
  const std::string text = format_key_file(keygen(3));
  ASSERT_EQ(text.size(), 3u * 33u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
  EXPECT_TRUE(std::all_of(text.begin(), text.end(), [](char c) {
    return c == '\n' || (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
  }));
  EXPECT_EQ(parse_key_file(text), keygen(3));
}

TEST(KeyFile, RejectsShortLines) {
  EXPECT_THROW(parse_key_file("abcd\n"), FormatError);
  EXPECT_THROW(parse_key_file(std::string(32, 'g') + "\n"), FormatError);
}

TEST(Permutations, RankInvertsUnrank) {
  for (int n = 0; n < 24; ++n) EXPECT_EQ(permutation_rank(nth_permutation(n)), n);
  EXPECT_EQ(nth_permutation(0), (Perm4{0, 1, 2, 3}));
  EXPECT_EQ(nth_permutation(23), (Perm4{3, 2, 1, 0}));
}

TEST(Codebook, IdentityUsesSortedGroups) {
  LBlockCodebook id = LBlockCodebook::identity();
  EXPECT_EQ(id.white(0b00), 0b011);
  EXPECT_EQ(id.white(0b01), 0b101);
  EXPECT_EQ(id.white(0b10), 0b110);
  EXPECT_EQ(id.white(0b11), 0b111);
  EXPECT_EQ(id.black(0b00), 0b000);
  EXPECT_EQ(id.black(0b11), 0b100);
}

TEST(Codebook, IndexBijectionOverAll576) {
  std::set<std::pair<std::array<Pattern, 4>, std::array<Pattern, 4>>> seen;
  for (int idx = 0; idx < kCodebookCount; ++idx) {
    LBlockCodebook cb(idx);
    EXPECT_EQ(cb.recompute_index(), idx);
    std::array<Pattern, 4> w{}, b{};
    for (int p = 0; p < 4; ++p) {
      w[p] = cb.white(p);
      b[p] = cb.black(p);
    }
    seen.insert({w, b});
    // images are exactly W and B, disjoint
    auto ws = w, bs = b;
    std::sort(ws.begin(), ws.end());
    std::sort(bs.begin(), bs.end());
    EXPECT_EQ(ws, kGroupW);
    EXPECT_EQ(bs, kGroupB);
  }
  EXPECT_EQ(seen.size(), 576u);
}

TEST(Codebook, OutOfRangeIndexThrows) {
  EXPECT_THROW(LBlockCodebook(576), RangeError);
  EXPECT_THROW(LBlockCodebook(-1), RangeError);
}

TEST(Codebook, DerivationIsDeterministic) {
  const Block128 kv = keygen(11).cue_key();
  EXPECT_EQ(derive_codebook(kv), derive_codebook(kv));
}

// Searches for a k_V whose PRF output is 0 mod 576 and checks it yields the
// identity codebook.
TEST(Codebook, ZeroPrfResidueGivesIdentity) {
  for (std::uint64_t s = 0;; ++s) {
    Block128 kv = keygen(s).cue_key();
    auto mac = crypto::hmac_sha1(kv, to_bytes("codebook"));
    std::uint32_t w = (std::uint32_t{mac[0]} << 24) | (mac[1] << 16) | (mac[2] << 8) | mac[3];
    if (w % 576 == 0) {
      EXPECT_EQ(derive_codebook(kv), LBlockCodebook::identity());
      break;
    }
    ASSERT_LT(s, 100000u);
  }
}

std::vector<int> histogram(int samples, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<int> counts(kCodebookCount);
  for (int i = 0; i < samples; ++i) ++counts[codebook_index_for(random_block(rng))];
  return counts;
}

TEST(Codebook, AllIndicesReachedAndUniform) {
  auto counts = histogram(10000, 1);
  EXPECT_EQ(std::count(counts.begin(), counts.end(), 0), 0);
  // chi-square, 575 dof: mean 575, sd ~33.9; 5 sd bound
  const double expected = 10000.0 / 576;
  double chi2 = 0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_LT(chi2, 575 + 5 * 33.9);
  EXPECT_GT(chi2, 575 - 5 * 33.9);
}

// With 1736 expected hits per index the max/min spread stays well below 2.
// (At 10^4 samples the spread of a uniform source is ~5, so that scale
// cannot show a ratio below 2.)
TEST(Codebook, MaxMinRatioBelowTwoAtScale) {
  auto counts = histogram(1000000, 2);
  auto [mn, mx] = std::minmax_element(counts.begin(), counts.end());
  ASSERT_GT(*mn, 0);
  EXPECT_LT(static_cast<double>(*mx) / *mn, 2.0);
}

}  // namespace
}  // namespace cuebar
