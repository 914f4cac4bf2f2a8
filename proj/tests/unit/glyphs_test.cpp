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

#include "cuebar/glyphs.hpp"

#include <gtest/gtest.h>

#include "cuebar/arrangement.hpp"

namespace cuebar {
namespace {

// A 10x6 set with arbitrary contents, for the layout arithmetic.
GlyphSet small_set() {
  GlyphSet g(10, 6);
  for (int d = 0; d <= 9; ++d) {
    Bitmap b(10, 6);
    for (int r = 0; r < 10; ++r)
      for (int c = 0; c < 6; ++c) b(r, c) = ((r * 7 + c * 3 + d * 5) % 4) == 0;
    g.set(Symbol::Digit(d), b);
  }
  g.set(Symbol::Rect(), Bitmap(10, 6, 1));
  g.set(Symbol::Dot(), Bitmap(10, 6, 0));
  return g;
}

TEST(Glyphs, ShippedDigitsAreFarApart) {
  const auto report = min_pairwise_distance(default_glyphs());
  EXPECT_GE(report.distance, 14);
  const bool known_pair =
      (report.first == Symbol::Digit(0) && report.second == Symbol::Digit(8)) ||
      (report.first == Symbol::Digit(1) && report.second == Symbol::Digit(7));
  EXPECT_TRUE(known_pair) << report.first.name() << "/" << report.second.name();
  EXPECT_EQ(hamming(default_glyphs().get(Symbol::Digit(1)), default_glyphs().get(Symbol::Digit(7))),
            14);
}

TEST(Glyphs, MarksAreAlsoFarFromEverything) {
  EXPECT_GE(min_pairwise_distance(default_glyphs(), default_glyphs().symbols()).distance, 14);
  // ... and from an empty cell, so a dropped mark is visible.
  for (const Symbol& s : default_glyphs().symbols()) {
    const Bitmap& b = default_glyphs().get(s);
    EXPECT_GE(hamming(b, Bitmap(b.rows(), b.cols())), 4) << s.name();
  }
}

TEST(Glyphs, ShippedSetIsComplete) {
  const auto& g = default_glyphs();
  EXPECT_EQ(g.digits().size(), 10u);
  EXPECT_TRUE(g.has(Symbol::Dot()));
  EXPECT_TRUE(g.has(Symbol::Rect()));
  EXPECT_TRUE(g.has(Symbol::Single()));
}

TEST(Glyphs, DistanceOfDuplicatesAndComplements) {
  GlyphSet g(10, 6);
  Bitmap a(10, 6);
  a(3, 3) = 1;
  Bitmap comp(10, 6);
  for (std::size_t i = 0; i < a.data().size(); ++i) comp.data()[i] = 1 - a.data()[i];
  g.set(Symbol::Digit(1), a);
  g.set(Symbol::Digit(2), a);
  EXPECT_EQ(min_pairwise_distance(g).distance, 0);
  g.set(Symbol::Digit(2), comp);
  EXPECT_EQ(min_pairwise_distance(g).distance, 60);
}

TEST(RenderCue, EmptyIsDark) {
  EXPECT_EQ(render_cue({}, 30, 42), CueImage(30, 42));
}

TEST(RenderCue, SingleGlyphVerbatim) {
  const GlyphSet g = small_set();
  EXPECT_EQ(render_cue({Symbol::Digit(1)}, 10, 6, g), g.get(Symbol::Digit(1)));
}

TEST(RenderCue, CellsAtSevenColumnSpacing) {
  const GlyphSet g = small_set();
  const SymbolSeq seq = {Symbol::Digit(1), Symbol::Digit(0), Symbol::Rect()};
  CueImage cue = render_cue(seq, 10, 20, g);
  for (int k = 0; k < 3; ++k) {
    const int c0 = 7 * k;
    for (int r = 0; r < 10; ++r)
      for (int c = 0; c < 6; ++c) EXPECT_EQ(cue(r, c0 + c), g.get(seq[k])(r, c));
  }
  for (int r = 0; r < 10; ++r) {
    EXPECT_EQ(cue(r, 6), 0);
    EXPECT_EQ(cue(r, 13), 0);
  }
}

TEST(RenderCue, FitErrors) {
  const GlyphSet g = small_set();
  EXPECT_THROW(render_cue({Symbol::Digit(1), Symbol::Digit(2)}, 10, 12, g), FitError);
  EXPECT_NO_THROW(render_cue({Symbol::Digit(1), Symbol::Digit(2)}, 10, 13, g));
  EXPECT_THROW(render_cue({Symbol::Digit(1)}, 9, 6, g), FitError);
}

TEST(RenderCue, DimensionsAlwaysAsRequested) {
  for (int rows : {14, 15, 30})
    for (int cols : {11, 23, 42}) {
      const int n = fitting_symbols(default_glyphs(), cols);
      SymbolSeq seq(n, Symbol::Digit(8));
      CueImage cue = render_cue(seq, rows, cols);
      EXPECT_EQ(cue.rows(), rows);
      EXPECT_EQ(cue.cols(), cols);
    }
}

TEST(ReadCue, InvertsRender) {
  for (const auto& layout : {ArrangementLayout::Table(5, 2), ArrangementLayout::Linear(12),
                             ArrangementLayout::Single()})
    for (const SymbolSeq& seq : assign_cues(layout)) {
      auto back = read_cue(render_cue(seq, 30, 42));
      ASSERT_TRUE(back.has_value());
      EXPECT_EQ(*back, seq);
    }
  CueImage smudged = render_cue({Symbol::Digit(4)}, 30, 42);
  smudged(20, 30) = 1;
  EXPECT_FALSE(read_cue(smudged).has_value());
}

TEST(CueSymbols, PositionRules) {
  const auto table = ArrangementLayout::Table(5, 2);
  EXPECT_EQ(cue_symbols_for(2, table), (SymbolSeq{Symbol::Digit(2), Symbol::Dot()}));
  EXPECT_EQ(cue_symbols_for(10, table),
            (SymbolSeq{Symbol::Digit(1), Symbol::Digit(0), Symbol::Rect()}));
  EXPECT_EQ(cue_symbols_for(3, ArrangementLayout::Linear(5)), (SymbolSeq{Symbol::Digit(3)}));
  EXPECT_EQ(cue_symbols_for(1, ArrangementLayout::Single()), (SymbolSeq{Symbol::Single()}));
  EXPECT_THROW(cue_symbols_for(11, table), RangeError);
  EXPECT_THROW(cue_symbols_for(0, table), RangeError);
}

TEST(CueSymbols, InjectiveOverLayouts) {
  for (int rows = 1; rows <= 6; ++rows)
    for (int cols = 1; cols <= 6; ++cols) {
      auto cues = assign_cues(ArrangementLayout::Table(rows, cols));
      for (std::size_t i = 0; i < cues.size(); ++i)
        for (std::size_t j = i + 1; j < cues.size(); ++j) EXPECT_FALSE(cues[i] == cues[j]);
    }
}

TEST(GlyphFile, Roundtrip) {
  const std::string text = format_glyph_file(default_glyphs());
  GlyphSet back = parse_glyph_file(text);
  for (const Symbol& s : default_glyphs().symbols())
    EXPECT_EQ(back.get(s), default_glyphs().get(s)) << s.name();
  EXPECT_THROW(parse_glyph_file("1 2x2\n#.\n"), FormatError);
  EXPECT_THROW(parse_glyph_file("1 2x2\n#.\n#x\n"), FormatError);
}

}  // namespace
}  // namespace cuebar
