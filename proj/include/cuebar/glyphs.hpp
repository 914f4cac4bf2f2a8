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

// Visual-cue glyphs and the cue layer of a barcode.
//
// The shipped set is a calculator-style font: seven disjoint 2-pixel-thick
// segments of exactly 14 pixels each on a 14x11 cell, so digits that differ
// by a single segment (1/7, 0/8, ...) sit at the minimum distance of 14.
// Foreground pixels are 1 (bright), background 0.

#ifndef CUEBAR_GLYPHS_HPP_
#define CUEBAR_GLYPHS_HPP_

#include <array>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include "cuebar/image.hpp"
#include "cuebar/layout.hpp"

namespace cuebar {

using CueImage = Bitmap;

class GlyphSet {
 public:
  GlyphSet(int cell_rows, int cell_cols) : cell_rows_(cell_rows), cell_cols_(cell_cols) {
    if (cell_rows <= 0 || cell_cols <= 0) throw ConfigError("glyph cell must be non-empty");
  }

  int cell_rows() const { return cell_rows_; }
  int cell_cols() const { return cell_cols_; }

  void set(const Symbol& s, Bitmap bitmap) {
    if (bitmap.rows() != cell_rows_ || bitmap.cols() != cell_cols_)
      throw FormatError("glyph " + s.name() + " does not match the cell size");
    glyphs_[s.name()] = std::move(bitmap);
  }

  bool has(const Symbol& s) const { return glyphs_.count(s.name()) != 0; }

  const Bitmap& get(const Symbol& s) const {
    auto it = glyphs_.find(s.name());
    if (it == glyphs_.end()) throw FormatError("no glyph for symbol " + s.name());
    return it->second;
  }

  std::vector<Symbol> symbols() const {
    std::vector<Symbol> out;
    for (const auto& [name, bmp] : glyphs_) out.push_back(Symbol::parse(name));
    return out;
  }

  std::vector<Symbol> digits() const {
    std::vector<Symbol> out;
    for (int d = 0; d <= 9; ++d)
      if (has(Symbol::Digit(d))) out.push_back(Symbol::Digit(d));
    return out;
  }

 private:
  int cell_rows_;
  int cell_cols_;
  std::map<std::string, Bitmap> glyphs_;
};

namespace detail {

inline void fill_rect(Bitmap& b, int r0, int c0, int rows, int cols) {
  for (int r = r0; r < r0 + rows; ++r)
    for (int c = c0; c < c0 + cols; ++c) b.at(r, c) = 1;
}

}  // namespace detail

// Seven-segment digits on 14x11 plus the DOT (2x2), RECT (6x4) and SINGLE
// (4x4) marks.
inline GlyphSet calculator_glyphs() {
  constexpr int kRows = 14, kCols = 11;
  enum Seg { A, B, C, D, E, F, G };
  auto segment = [](Bitmap& b, Seg s) {
    switch (s) {
      case A: detail::fill_rect(b, 0, 2, 2, 7); break;
      case G: detail::fill_rect(b, 6, 2, 2, 7); break;
      case D: detail::fill_rect(b, 12, 2, 2, 7); break;
      case F: detail::fill_rect(b, 0, 0, 7, 2); break;
      case E: detail::fill_rect(b, 7, 0, 7, 2); break;
      case B: detail::fill_rect(b, 0, 9, 7, 2); break;
      case C: detail::fill_rect(b, 7, 9, 7, 2); break;
    }
  };
  static constexpr std::array<const char*, 10> kSegments = {
      "ABCDEF", "BC", "ABGED", "ABGCD", "FGBC", "AFGCD", "AFGEDC", "ABC", "ABCDEFG", "ABCDFG"};
  GlyphSet set(kRows, kCols);
  for (int d = 0; d <= 9; ++d) {
    Bitmap b(kRows, kCols);
    for (const char* p = kSegments[d]; *p; ++p) segment(b, static_cast<Seg>(*p - 'A'));
    set.set(Symbol::Digit(d), std::move(b));
  }
  Bitmap dot(kRows, kCols);
  detail::fill_rect(dot, 12, 0, 2, 2);
  set.set(Symbol::Dot(), std::move(dot));
  Bitmap rect(kRows, kCols);
  detail::fill_rect(rect, 8, 0, 6, 4);
  set.set(Symbol::Rect(), std::move(rect));
  Bitmap single(kRows, kCols);
  detail::fill_rect(single, 5, 3, 4, 4);
  set.set(Symbol::Single(), std::move(single));
  return set;
}

inline const GlyphSet& default_glyphs() {
  static const GlyphSet set = calculator_glyphs();
  return set;
}

inline int hamming(const Bitmap& a, const Bitmap& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw FormatError("hamming distance needs equal dimensions");
  int d = 0;
  for (std::size_t i = 0; i < a.data().size(); ++i) d += a.data()[i] != b.data()[i];
  return d;
}

struct DistanceReport {
  int distance = 0;
  Symbol first, second;
};

// Over unordered pairs of the given symbols; defaults to the digits.
inline DistanceReport min_pairwise_distance(const GlyphSet& g,
                                            std::optional<std::vector<Symbol>> among = {}) {
  std::vector<Symbol> syms = among ? *among : g.digits();
  if (syms.size() < 2) throw ConfigError("need at least two glyphs");
  DistanceReport best{std::numeric_limits<int>::max(), syms[0], syms[1]};
  for (std::size_t i = 0; i < syms.size(); ++i)
    for (std::size_t j = i + 1; j < syms.size(); ++j) {
      int d = hamming(g.get(syms[i]), g.get(syms[j]));
      if (d < best.distance) best = {d, syms[i], syms[j]};
    }
  return best;
}

inline int fitting_symbols(const GlyphSet& g, int cue_cols) {
  return (cue_cols + 1) / (g.cell_cols() + 1);
}

// Glyphs left to right with one column of spacing, anchored top-left on a
// dark background.
inline CueImage render_cue(const SymbolSeq& symbols, int cue_rows, int cue_cols,
                           const GlyphSet& g = default_glyphs()) {
  CueImage cue(cue_rows, cue_cols);
  if (symbols.empty()) return cue;
  const int width = static_cast<int>(symbols.size()) * (g.cell_cols() + 1) - 1;
  if (width > cue_cols || g.cell_rows() > cue_rows)
    throw FitError("cue symbols " + to_string(symbols) + " do not fit a " +
                   std::to_string(cue_rows) + "x" + std::to_string(cue_cols) + " cue");
  for (std::size_t k = 0; k < symbols.size(); ++k) {
    const Bitmap& glyph = g.get(symbols[k]);
    const int c0 = static_cast<int>(k) * (g.cell_cols() + 1);
    for (int r = 0; r < g.cell_rows(); ++r)
      for (int c = 0; c < g.cell_cols(); ++c) cue(r, c0 + c) = glyph(r, c);
  }
  return cue;
}

// What an attentive reader sees: the symbol sequence whose rendering equals
// the cue exactly, or nothing if the cue is not a clean rendering.
inline std::optional<SymbolSeq> read_cue(const CueImage& cue, const GlyphSet& g = default_glyphs()) {
  SymbolSeq out;
  const auto candidates = g.symbols();
  const int slots = fitting_symbols(g, cue.cols());
  if (g.cell_rows() <= cue.rows()) {
    for (int k = 0; k < slots; ++k) {
      const int c0 = k * (g.cell_cols() + 1);
      std::optional<Symbol> match;
      for (const Symbol& s : candidates) {
        const Bitmap& glyph = g.get(s);
        bool same = true;
        for (int r = 0; r < g.cell_rows() && same; ++r)
          for (int c = 0; c < g.cell_cols() && same; ++c) same = cue(r, c0 + c) == glyph(r, c);
        if (same) {
          match = s;
          break;
        }
      }
      if (!match) break;
      out.push_back(*match);
    }
  }
  if (render_cue(out, cue.rows(), cue.cols(), g) != cue) return std::nullopt;
  return out;
}

// Text grid: one block per symbol, "name ROWSxCOLS" header then one line per
// row using '#' for 1 and '.' for 0, blank line between blocks.
inline std::string format_glyph_file(const GlyphSet& g) {
  std::ostringstream out;
  for (const Symbol& s : g.symbols()) {
    const Bitmap& b = g.get(s);
    out << s.name() << ' ' << b.rows() << 'x' << b.cols() << '\n';
    for (int r = 0; r < b.rows(); ++r) {
      for (int c = 0; c < b.cols(); ++c) out << (b(r, c) ? '#' : '.');
      out << '\n';
    }
    out << '\n';
  }
  return out.str();
}

inline GlyphSet parse_glyph_file(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::optional<GlyphSet> set;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream header(line);
    std::string name, dims;
    header >> name >> dims;
    auto x = dims.find('x');
    if (name.empty() || x == std::string::npos) throw FormatError("glyph file: bad header '" + line + "'");
    const int rows = std::stoi(dims.substr(0, x)), cols = std::stoi(dims.substr(x + 1));
    if (!set) set.emplace(rows, cols);
    Bitmap b(rows, cols);
    for (int r = 0; r < rows; ++r) {
      if (!std::getline(in, line) || static_cast<int>(line.size()) != cols)
        throw FormatError("glyph file: bad row for " + name);
      for (int c = 0; c < cols; ++c) {
        if (line[c] != '#' && line[c] != '.') throw FormatError("glyph file: bad pixel");
        b(r, c) = line[c] == '#';
      }
    }
    set->set(Symbol::parse(name), std::move(b));
  }
  if (!set) throw FormatError("glyph file: no glyphs");
  return *set;
}

}  // namespace cuebar

#endif  // CUEBAR_GLYPHS_HPP_
