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

#include "cuebar/barcode.hpp"

#include <gtest/gtest.h>

#include <set>

#include "cuebar/arrangement.hpp"

namespace cuebar {
namespace {

const SymbolSeq kTen = {Symbol::Digit(1), Symbol::Digit(0), Symbol::Rect()};

bool rejected(const std::function<void()>& f) {
  try {
    f();
  } catch (const RejectError&) {
    return true;
  } catch (const AuthError&) {
    return true;
  }
  return false;
}

TEST(Capacity, IdealizedFormula) {
  EXPECT_EQ(capacity(10000), 952);
  EXPECT_EQ(capacity(0), 0);
  EXPECT_EQ(capacity(2520), 240);
  EXPECT_THROW(capacity(-1), RangeError);
}

TEST(Spec, DefaultGeometry) {
  BarcodeSpec s;
  EXPECT_EQ(s.message_bits(), 2520);
  EXPECT_EQ(s.stream_bits(), 2520);
  EXPECT_EQ(s.interior_rows() * s.superpixel, 180);
  EXPECT_EQ(s.interior_cols() * s.superpixel, 84);
  // 40 codewords * 36 - 16 header = 1424 bits = 178 bytes, minus 36 overhead
  EXPECT_EQ(s.max_message_bytes(), 142);
  EXPECT_EQ(BarcodeSpec::parse("30x42").x, 30);
  EXPECT_THROW(BarcodeSpec::parse("30-42"), ConfigError);
}

TEST(Spec, OddColumnCountCannotBeTiled) {
  BarcodeSpec s{6, 21};
  EXPECT_THROW(s.validate(), FormatError);
  EXPECT_THROW((BarcodeSpec{5, 42}.validate()), FormatError);
}

// 6x21 holds 126 bits: less than the 288-bit nonce and tag alone.
TEST(Spec, SmallestMatrixHasNoRoomForThePayload) {
  EXPECT_LT(6 * 21, static_cast<int>(kPayloadOverhead * 8));
  BarcodeSpec s{6, 22};
  s.validate();
  EXPECT_EQ(s.max_message_bytes(), 0);
  EXPECT_THROW(encode_barcode(keygen(1), Bytes{}, {}, s, Block128{}), CapacityError);
}

TEST(Layout, TilingCoversInteriorExactlyOnce) {
  for (BarcodeSpec s : {BarcodeSpec{6, 22}, BarcodeSpec{30, 42}, BarcodeSpec{60, 42}}) {
    Grid<int> hits(s.interior_rows(), s.interior_cols());
    for (int i = 0; i < s.pairs(); ++i) {
      auto px = lblock_pixels(i, s);
      for (const auto& p : px) ++hits.at(p.row, p.col);
      // L shape: three cells inside a 2x2 window
      const int rmin = std::min({px[0].row, px[1].row, px[2].row});
      const int cmin = std::min({px[0].col, px[1].col, px[2].col});
      for (const auto& p : px) {
        EXPECT_LE(p.row - rmin, 1);
        EXPECT_LE(p.col - cmin, 1);
      }
    }
    for (int v : hits.data()) EXPECT_EQ(v, 1);
  }
}

TEST(Layout, ControlPointsOnBorderOnly) {
  for (BarcodeSpec s : {BarcodeSpec{6, 22}, BarcodeSpec{30, 42}, BarcodeSpec{60, 42}}) {
    auto cells = control_point_cells(s);
    std::set<std::pair<int, int>> unique;
    int top = 0, bottom = 0, left = 0, right = 0;
    for (const auto& p : cells) {
      unique.insert({p.row, p.col});
      const bool inside = p.row >= s.border && p.row < s.border + s.interior_rows() &&
                          p.col >= s.border && p.col < s.border + s.interior_cols();
      EXPECT_FALSE(inside);
      top += p.row == s.border / 2;
      bottom += p.row == s.grid_rows() - 1 - s.border / 2;
      left += p.col == s.border / 2;
      right += p.col == s.grid_cols() - 1 - s.border / 2;
    }
    EXPECT_EQ(unique.size(), cells.size());
    EXPECT_GE(std::min({top, bottom, left, right}), 4);
  }
  EXPECT_GE(control_point_cells(BarcodeSpec{}).size(), 20u);
}

class BarcodeTest : public ::testing::Test {
 protected:
  Rng rng_{2024};
};

TEST_F(BarcodeTest, RoundtripAcrossSpecs) {
  for (BarcodeSpec s : {BarcodeSpec{30, 42}, BarcodeSpec{60, 42}}) {
    std::uniform_int_distribution<int> len(0, s.max_message_bytes());
    for (int i = 0; i < 50; ++i) {
      SessionKey k = keygen(rng_());
      Bytes m = random_bytes(rng_, len(rng_));
      BarcodeImage img = encode_barcode(k, m, kTen, s, random_block(rng_));
      EXPECT_EQ(img.pixels.rows(), s.raster_rows());
      DecodedBarcode d = decode_barcode(img, k);
      EXPECT_EQ(d.message, m);
      EXPECT_EQ(d.cue, render_cue(kTen, s.cue_rows(), s.cue_cols()));
      EXPECT_EQ(d.corrected, 0);
    }
  }
}

TEST_F(BarcodeTest, OversizedMessageIsCapacityError) {
  BarcodeSpec s;
  EXPECT_THROW(encode_barcode(keygen(1), Bytes(s.max_message_bytes() + 1), kTen, s, Block128{}),
               CapacityError);
  EXPECT_NO_THROW(encode_barcode(keygen(1), Bytes(s.max_message_bytes()), kTen, s, Block128{}));
}

TEST_F(BarcodeTest, CueTooWideIsFitError) {
  SymbolSeq four(4, Symbol::Digit(8));
  EXPECT_THROW(encode_barcode(keygen(1), Bytes(4), four, BarcodeSpec{}, Block128{}), FitError);
}

TEST_F(BarcodeTest, BrightnessShowsTheCueWithoutKey) {
  BarcodeSpec s;
  BarcodeImage img = encode_barcode(keygen(5), to_bytes("hi"), kTen, s, random_block(rng_));
  const CueImage seen = observed_cue(barcode_grid(img), s);
  EXPECT_EQ(seen, render_cue(kTen, s.cue_rows(), s.cue_cols()));
  EXPECT_EQ(read_cue(seen), kTen);
}

TEST_F(BarcodeTest, RedOnlyAtControlPoints) {
  BarcodeSpec s;
  BarcodeImage img = encode_barcode(keygen(5), to_bytes("hi"), kTen, s, random_block(rng_));
  int red = 0;
  for (Color c : img.pixels.data()) red += c == Color::kRed;
  EXPECT_EQ(red, static_cast<int>(control_point_cells(s).size()) * s.superpixel * s.superpixel);
  EXPECT_EQ(img.control_points, reference_control_points(s));
}

TEST_F(BarcodeTest, WrongKeyNeverDecodes) {
  BarcodeSpec s{30, 42};
  int refused = 0;
  for (int i = 0; i < 100; ++i) {
    SessionKey a = keygen(rng_()), b = keygen(rng_());
    BarcodeImage img = encode_barcode(a, random_bytes(rng_, 40), kTen, s, random_block(rng_));
    refused += rejected([&] { decode_barcode(img, b); });
  }
  EXPECT_EQ(refused, 100);
}

// Same codebook, different MAC and encryption keys: the ECC layer is clean
// and only the tag check can notice.
TEST_F(BarcodeTest, SameCodebookWrongMacKeyIsAuthError) {
  SessionKey a = keygen(1);
  SessionKey b(keygen(2).mac_key(), a.enc_key(), a.cue_key());
  BarcodeImage img = encode_barcode(a, to_bytes("pay 10"), kTen, BarcodeSpec{}, Block128{});
  EXPECT_THROW(decode_barcode(img, b), AuthError);
}

TEST_F(BarcodeTest, ReadSuperpixelsMajorityAndTies) {
  BarcodeSpec s{6, 22};
  s.validate();
  Raster r(s.raster_rows(), s.raster_cols(), kRgbWhite);
  // cell (0,0): all white, (0,1): 2/2 tie, (0,2): 3 white 1 black
  r(0, 2) = kRgbBlack;
  r(1, 3) = kRgbBlack;
  r(0, 4) = kRgbBlack;
  // cell (0,3): one red, two white, one black -> white
  r(0, 6) = kRgbRed;
  r(1, 7) = kRgbBlack;
  Bitmap g = read_superpixels(r, s);
  EXPECT_EQ(g(0, 0), 1);
  EXPECT_EQ(g(0, 1), 0);
  EXPECT_EQ(g(0, 2), 1);
  EXPECT_EQ(g(0, 3), 1);
  EXPECT_THROW(read_superpixels(Raster(3, 3), s), FormatError);
}

TEST_F(BarcodeTest, CorrectsSparsePixelNoise) {
  BarcodeSpec s;
  SessionKey k = keygen(9);
  Bytes m = random_bytes(rng_, 100);
  Bitmap grid = barcode_grid(encode_barcode(k, m, kTen, s, random_block(rng_)));
  // one flipped pixel in every 40th L-block: at most one per codeword
  for (int i = 0; i < s.pairs(); i += 40) {
    auto p = lblock_pixels(i, s)[1];
    grid(s.border + p.row, s.border + p.col) ^= 1;
  }
  DecodedBarcode d = decode_grid(grid, k, {}, s);
  EXPECT_EQ(d.message, m);
  EXPECT_GT(d.corrected, 0);
}

TEST_F(BarcodeTest, TailBitsAreAuthenticated) {
  // 30x44 has 1320 bits: 20 codewords plus a 60-bit tail.
  BarcodeSpec s{30, 44};
  SessionKey k = keygen(3);
  const LBlockCodebook cb = derive_codebook(k.cue_key());
  Bitmap grid = barcode_grid(encode_barcode(k, to_bytes("x"), kTen, s, random_block(rng_)));
  const int last_pair = s.pairs() - 1;
  const auto px = lblock_pixels(last_pair, s);
  LBlock blk = read_lblock(grid, last_pair, s);
  // move to the other pattern of the same group carrying a different pair
  DecodedPair d = decode_pair(blk, cb);
  LBlock forged = encode_pair(d.pair ^ 1, d.cue, cb);
  grid(s.border + px[0].row, s.border + px[0].col) = forged.p1;
  grid(s.border + px[1].row, s.border + px[1].col) = forged.p2;
  grid(s.border + px[2].row, s.border + px[2].col) = forged.p3;
  EXPECT_THROW(decode_grid(grid, k, {}, s), RejectError);
}

// Replacing one L-block by a block of the other group flips its cue pixel
// and moves 0, 1 or 2 of its payload bits; 1 of the 4 replacements keeps
// the bits.
TEST_F(BarcodeTest, SingleBlockGroupChangeIsLocal) {
  BarcodeSpec s{6, 22};
  SessionKey k = keygen(4);
  const LBlockCodebook cb = derive_codebook(k.cue_key());
  BitVec m1(s.message_bits());
  for (auto& b : m1) b = rng_() & 1;
  CueImage cue(s.cue_rows(), s.cue_cols());
  for (auto& v : cue.data()) v = rng_() & 1;
  const Bitmap grid = embed(m1, cue, cb, s);
  const Extraction base = extract(grid, cb, s);
  ASSERT_EQ(base.bits, m1);
  for (int i = 0; i < s.pairs(); ++i) {
    const LBlock orig = read_lblock(grid, i, s);
    const auto& other = orig.white() ? kGroupB : kGroupW;
    int unchanged = 0;
    for (Pattern p : other) {
      Bitmap g = grid;
      LBlock rep = LBlock::from_pattern(p);
      auto px = lblock_pixels(i, s);
      g(s.border + px[0].row, s.border + px[0].col) = rep.p1;
      g(s.border + px[1].row, s.border + px[1].col) = rep.p2;
      g(s.border + px[2].row, s.border + px[2].col) = rep.p3;
      Extraction ex = extract(g, cb, s);
      int diff = 0;
      for (int b = 0; b < s.message_bits(); ++b) diff += ex.bits[b] != m1[b];
      EXPECT_LE(diff, 2);
      unchanged += diff == 0;
      auto [cr, cc] = cue_position(i, s);
      EXPECT_NE(ex.cue(cr, cc), cue(cr, cc));
    }
    EXPECT_EQ(unchanged, 1);
  }
}

// Turning "1" into "7" complements 14 dark blocks, 7 in each of the first
// two codewords. All of them pass through one permutation of bit pairs
// (dark pattern -> its complement -> pair under the bright map), uniform
// over the 24 permutations; the forgery survives when both codewords see at
// most 3 bit errors. Averaged over the permutations that is about 8.4%.
TEST_F(BarcodeTest, DigitSwapForgeryMatchesSharedCodebookModel) {
  BarcodeSpec s;
  const SymbolSeq one = {Symbol::Digit(1)}, seven = {Symbol::Digit(7)};
  const auto flips = cue_difference(one, seven, s);
  ASSERT_EQ(flips.size(), 14u);
  int survived = 0;
  const int trials = 600;
  for (int t = 0; t < trials; ++t) {
    SessionKey k = keygen(rng_());
    BarcodeImage img = encode_barcode(k, random_bytes(rng_, 60), one, s, random_block(rng_));
    BarcodeImage forged = cue_flip(img, flips);
    ASSERT_EQ(read_cue(observed_cue(barcode_grid(forged), s)), seven);
    survived += !rejected([&] { decode_barcode(forged, k); });
  }
  const double rate = static_cast<double>(survived) / trials;
  const double se = std::sqrt(0.0839 * (1 - 0.0839) / trials);
  EXPECT_NEAR(rate, 0.0839, 4 * se);
}

TEST(Ppm, RoundtripAndColors) {
  BarcodeImage img = encode_barcode(keygen(1), to_bytes("ppm"), kTen, BarcodeSpec{}, Block128{});
  const std::string bytes = encode_ppm(img.raster());
  EXPECT_EQ(bytes.rfind("P6\n", 0), 0u);
  EXPECT_EQ(decode_ppm(bytes), img.raster());
  EXPECT_THROW(decode_ppm("P3\n1 1\n255\n0 0 0"), FormatError);
  EXPECT_THROW(decode_ppm("P6\n2 2\n255\n\x01"), FormatError);
}

}  // namespace
}  // namespace cuebar
