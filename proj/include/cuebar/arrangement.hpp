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

// Multi-barcode arrangements: cue assignment, the attentive user's check,
// and the structural attacks a dishonest terminal can mount.

#ifndef CUEBAR_ARRANGEMENT_HPP_
#define CUEBAR_ARRANGEMENT_HPP_

#include <algorithm>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cuebar/barcode.hpp"
#include "cuebar/layout.hpp"

namespace cuebar {

inline std::vector<SymbolSeq> assign_cues(const ArrangementLayout& layout) {
  std::vector<SymbolSeq> out;
  for (int i = 1; i <= layout.block_count(); ++i) out.push_back(cue_symbols_for(i, layout));
  return out;
}

enum class Rule { kR1Continuity, kR2RowEnd, kR3Terminator, kCount };

inline std::string rule_name(Rule r) {
  switch (r) {
    case Rule::kR1Continuity: return "R1";
    case Rule::kR2RowEnd: return "R2";
    case Rule::kR3Terminator: return "R3";
    case Rule::kCount: return "COUNT";
  }
  return "?";
}

struct Violation {
  int position = 0;  // 1-based
  Rule rule = Rule::kR1Continuity;
  friend bool operator==(const Violation&, const Violation&) = default;
};

// nullopt means the arrangement is exactly as assigned.
using ArrangementCheck = std::optional<Violation>;

namespace detail {

inline std::string counter_of(const SymbolSeq& s) {
  std::string digits;
  for (const Symbol& sym : s)
    if (sym.is_digit()) digits.push_back(static_cast<char>('0' + sym.digit));
  return digits;
}

inline bool has(const SymbolSeq& s, Symbol::Kind k) {
  return std::any_of(s.begin(), s.end(), [k](const Symbol& x) { return x.kind == k; });
}

inline Rule classify(const SymbolSeq& observed, const SymbolSeq& expected) {
  if (counter_of(observed) != counter_of(expected)) return Rule::kR1Continuity;
  if (has(observed, Symbol::Kind::kDot) != has(expected, Symbol::Kind::kDot)) return Rule::kR2RowEnd;
  if (has(observed, Symbol::Kind::kRect) != has(expected, Symbol::Kind::kRect))
    return Rule::kR3Terminator;
  return Rule::kR1Continuity;
}

}  // namespace detail

// Exact comparison against the assignment, reporting the first anomaly the
// way a reader scanning in order would meet it. A sequence that stops early
// fails R3 at its last block (no terminator); blocks past the terminator
// fail COUNT.
inline ArrangementCheck verify_arrangement(const std::vector<SymbolSeq>& observed,
                                           const ArrangementLayout& layout) {
  const auto expected = assign_cues(layout);
  const std::size_t common = std::min(observed.size(), expected.size());
  for (std::size_t i = 0; i < common; ++i)
    if (!(observed[i] == expected[i]))
      return Violation{static_cast<int>(i) + 1, detail::classify(observed[i], expected[i])};
  if (observed.size() == expected.size()) return std::nullopt;
  if (observed.empty()) return Violation{1, Rule::kCount};
  if (observed.size() < expected.size())
    return Violation{static_cast<int>(observed.size()), Rule::kR3Terminator};
  return Violation{static_cast<int>(expected.size()) + 1, Rule::kCount};
}

// --- structural mutations, generic over the block type -----------------------

template <typename T>
std::vector<T> rearrange(const std::vector<T>& blocks, const std::vector<int>& perm) {
  if (perm.size() != blocks.size()) throw BoundsError("permutation length mismatch");
  std::vector<bool> used(blocks.size());
  std::vector<T> out;
  out.reserve(blocks.size());
  for (int p : perm) {
    if (p < 0 || p >= static_cast<int>(blocks.size()) || used[p])
      throw BoundsError("not a permutation");
    used[p] = true;
    out.push_back(blocks[p]);
  }
  return out;
}

template <typename T>
std::vector<T> delete_row(const std::vector<T>& blocks, int cols, int row) {
  if (cols <= 0 || row < 0 || (row + 1) * cols > static_cast<int>(blocks.size()))
    throw BoundsError("row out of range");
  std::vector<T> out(blocks.begin(), blocks.begin() + row * cols);
  out.insert(out.end(), blocks.begin() + (row + 1) * cols, blocks.end());
  return out;
}

template <typename T>
std::vector<T> duplicate_row(const std::vector<T>& blocks, int cols, int row) {
  if (cols <= 0 || row < 0 || (row + 1) * cols > static_cast<int>(blocks.size()))
    throw BoundsError("row out of range");
  std::vector<T> out(blocks.begin(), blocks.begin() + (row + 1) * cols);
  out.insert(out.end(), blocks.begin() + row * cols, blocks.end());
  return out;
}

template <typename T>
std::vector<T> delete_block(std::vector<T> blocks, int index) {
  if (index < 0 || index >= static_cast<int>(blocks.size())) throw BoundsError("block out of range");
  blocks.erase(blocks.begin() + index);
  return blocks;
}

// Inserts item so that it ends up at position `at` (0..size).
template <typename T>
std::vector<T> insert_block(std::vector<T> blocks, int at, T item) {
  if (at < 0 || at > static_cast<int>(blocks.size())) throw BoundsError("insert position out of range");
  blocks.insert(blocks.begin() + at, std::move(item));
  return blocks;
}

template <typename T>
std::vector<T> duplicate_block(const std::vector<T>& blocks, int index, int at) {
  if (index < 0 || index >= static_cast<int>(blocks.size())) throw BoundsError("block out of range");
  return insert_block(blocks, at, blocks[index]);
}

// --- attacks on barcode images ----------------------------------------------

enum class AttackKind { kRearrange, kRowDelete, kRowDuplicate, kCueFlip, kSubstitute, kControlPointTamper };

inline std::string attack_name(AttackKind k) {
  switch (k) {
    case AttackKind::kRearrange: return "REARRANGE";
    case AttackKind::kRowDelete: return "ROW_DELETE";
    case AttackKind::kRowDuplicate: return "ROW_DUPLICATE";
    case AttackKind::kCueFlip: return "CUE_FLIP";
    case AttackKind::kSubstitute: return "SUBSTITUTE";
    case AttackKind::kControlPointTamper: return "CONTROL_POINT_TAMPER";
  }
  return "?";
}

inline AttackKind parse_attack_kind(std::string_view s) {
  for (auto k : {AttackKind::kRearrange, AttackKind::kRowDelete, AttackKind::kRowDuplicate,
                 AttackKind::kCueFlip, AttackKind::kSubstitute, AttackKind::kControlPointTamper})
    if (attack_name(k) == s) return k;
  throw ConfigError("unknown attack '" + std::string(s) + "'");
}

struct AttackSpec {
  AttackKind kind = AttackKind::kRearrange;
  std::vector<int> perm;           // REARRANGE
  int row = 0;                     // ROW_DELETE / ROW_DUPLICATE
  int cols = 1;                    // table width for row attacks
  int block = 0;                   // CUE_FLIP / SUBSTITUTE / CONTROL_POINT_TAMPER (0-based)
  std::vector<int> lblocks;        // CUE_FLIP: pair indices to complement
  std::optional<BarcodeImage> replacement;  // SUBSTITUTE
  int offset_row = 0, offset_col = 0;       // CONTROL_POINT_TAMPER, display pixels
};

// Complements every display pixel of the listed L-blocks.
inline BarcodeImage cue_flip(BarcodeImage img, const std::vector<int>& lblocks) {
  const BarcodeSpec& spec = img.spec;
  const int s = spec.superpixel;
  for (int i : lblocks) {
    if (i < 0 || i >= spec.pairs()) throw BoundsError("L-block index out of range");
    for (const auto& px : lblock_pixels(i, spec)) {
      const int r0 = (spec.border + px.row) * s, c0 = (spec.border + px.col) * s;
      for (int dr = 0; dr < s; ++dr)
        for (int dc = 0; dc < s; ++dc) {
          Color& c = img.pixels(r0 + dr, c0 + dc);
          c = c == Color::kWhite ? Color::kBlack : Color::kWhite;
        }
    }
  }
  return img;
}

// Moves every red dot by the offset; vacated pixels become white.
inline BarcodeImage tamper_control_points(BarcodeImage img, int dr, int dc) {
  std::vector<std::pair<int, int>> red;
  for (int r = 0; r < img.pixels.rows(); ++r)
    for (int c = 0; c < img.pixels.cols(); ++c)
      if (img.pixels(r, c) == Color::kRed) {
        red.push_back({r, c});
        img.pixels(r, c) = Color::kWhite;
      }
  for (auto [r, c] : red)
    if (img.pixels.contains(r + dr, c + dc)) img.pixels(r + dr, c + dc) = Color::kRed;
  return img;
}

// L-blocks whose cue pixel differs between two symbol sequences: the set an
// attacker must flip to turn one cue into the other.
inline std::vector<int> cue_difference(const SymbolSeq& from, const SymbolSeq& to,
                                       const BarcodeSpec& spec,
                                       const GlyphSet& glyphs = default_glyphs()) {
  const CueImage a = render_cue(from, spec.cue_rows(), spec.cue_cols(), glyphs);
  const CueImage b = render_cue(to, spec.cue_rows(), spec.cue_cols(), glyphs);
  std::vector<int> out;
  for (int i = 0; i < spec.pairs(); ++i) {
    const auto [r, c] = cue_position(i, spec);
    if (a(r, c) != b(r, c)) out.push_back(i);
  }
  return out;
}

inline std::vector<BarcodeImage> apply_attack(const std::vector<BarcodeImage>& blocks,
                                              const AttackSpec& attack) {
  auto check_block = [&] {
    if (attack.block < 0 || attack.block >= static_cast<int>(blocks.size()))
      throw BoundsError("attack block index out of range");
  };
  switch (attack.kind) {
    case AttackKind::kRearrange:
      return rearrange(blocks, attack.perm);
    case AttackKind::kRowDelete:
      return delete_row(blocks, attack.cols, attack.row);
    case AttackKind::kRowDuplicate:
      return duplicate_row(blocks, attack.cols, attack.row);
    case AttackKind::kCueFlip: {
      check_block();
      auto out = blocks;
      out[attack.block] = cue_flip(out[attack.block], attack.lblocks);
      return out;
    }
    case AttackKind::kSubstitute: {
      check_block();
      if (!attack.replacement) throw BoundsError("SUBSTITUTE needs a replacement image");
      auto out = blocks;
      out[attack.block] = *attack.replacement;
      return out;
    }
    case AttackKind::kControlPointTamper: {
      check_block();
      auto out = blocks;
      out[attack.block] =
          tamper_control_points(out[attack.block], attack.offset_row, attack.offset_col);
      return out;
    }
  }
  return blocks;
}

}  // namespace cuebar

#endif  // CUEBAR_ARRANGEMENT_HPP_
