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

// Cue symbols and the placement layouts that assign them.

#ifndef CUEBAR_LAYOUT_HPP_
#define CUEBAR_LAYOUT_HPP_

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "cuebar/common.hpp"

namespace cuebar {

struct Symbol {
  enum class Kind { kDigit, kDot, kRect, kSingle };

  Kind kind = Kind::kDigit;
  int digit = 0;  // meaningful for kDigit only

  static Symbol Digit(int d) { return {Kind::kDigit, d}; }
  static Symbol Dot() { return {Kind::kDot, 0}; }
  static Symbol Rect() { return {Kind::kRect, 0}; }
  static Symbol Single() { return {Kind::kSingle, 0}; }

  bool is_digit() const { return kind == Kind::kDigit; }

  std::string name() const {
    switch (kind) {
      case Kind::kDigit: return std::string(1, static_cast<char>('0' + digit));
      case Kind::kDot: return "DOT";
      case Kind::kRect: return "RECT";
      case Kind::kSingle: return "SINGLE";
    }
    return "?";
  }

  static Symbol parse(std::string_view s) {
    if (s.size() == 1 && s[0] >= '0' && s[0] <= '9') return Digit(s[0] - '0');
    if (s == "DOT") return Dot();
    if (s == "RECT") return Rect();
    if (s == "SINGLE") return Single();
    throw FormatError("unknown cue symbol '" + std::string(s) + "'");
  }

  friend bool operator==(const Symbol& a, const Symbol& b) {
    return a.kind == b.kind && (a.kind != Kind::kDigit || a.digit == b.digit);
  }
};

using SymbolSeq = std::vector<Symbol>;

inline std::string to_string(const SymbolSeq& seq) {
  std::string out = "[";
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) out += ",";
    out += seq[i].name();
  }
  return out + "]";
}

struct ArrangementLayout {
  enum class Kind { kTable, kLinear, kSingle };

  Kind kind = Kind::kSingle;
  int rows = 1;
  int cols = 1;
  int length = 1;

  static ArrangementLayout Table(int rows, int cols) {
    if (rows <= 0 || cols <= 0) throw ConfigError("table dimensions must be positive");
    return {Kind::kTable, rows, cols, rows * cols};
  }
  static ArrangementLayout Linear(int length) {
    if (length <= 0) throw ConfigError("linear length must be positive");
    return {Kind::kLinear, 1, length, length};
  }
  static ArrangementLayout Single() { return {Kind::kSingle, 1, 1, 1}; }

  int block_count() const {
    switch (kind) {
      case Kind::kTable: return rows * cols;
      case Kind::kLinear: return length;
      case Kind::kSingle: return 1;
    }
    return 0;
  }

  std::string kind_name() const {
    switch (kind) {
      case Kind::kTable: return "TABLE";
      case Kind::kLinear: return "LINEAR";
      case Kind::kSingle: return "SINGLE";
    }
    return "?";
  }

  // "table:5x2", "linear:3", "single"
  std::string spec_string() const {
    switch (kind) {
      case Kind::kTable: return "table:" + std::to_string(rows) + "x" + std::to_string(cols);
      case Kind::kLinear: return "linear:" + std::to_string(length);
      case Kind::kSingle: return "single";
    }
    return "?";
  }

  static ArrangementLayout parse(std::string_view s) {
    std::string lower(s);
    for (auto& ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    try {
      if (lower == "single") return Single();
      if (lower.rfind("linear:", 0) == 0) return Linear(std::stoi(lower.substr(7)));
      if (lower.rfind("table:", 0) == 0) {
        auto x = lower.find('x', 6);
        if (x == std::string::npos) throw ConfigError("table layout needs RxC");
        return Table(std::stoi(lower.substr(6, x - 6)), std::stoi(lower.substr(x + 1)));
      }
    } catch (const std::logic_error&) {
      throw ConfigError("malformed layout '" + std::string(s) + "'");
    }
    throw ConfigError("malformed layout '" + std::string(s) + "'");
  }

  friend bool operator==(const ArrangementLayout& a, const ArrangementLayout& b) {
    return a.kind == b.kind && a.block_count() == b.block_count() &&
           (a.kind != Kind::kTable || (a.rows == b.rows && a.cols == b.cols));
  }
};

// Cue for the 1-based block position under the counter / end-of-row /
// last-block rules. Linear layouts mark only the final block; a single
// block carries the lone SINGLE mark.
inline SymbolSeq cue_symbols_for(int index, const ArrangementLayout& layout) {
  const int count = layout.block_count();
  if (index < 1 || index > count) throw RangeError("block index outside layout");
  if (layout.kind == ArrangementLayout::Kind::kSingle) return {Symbol::Single()};
  SymbolSeq out;
  for (char ch : std::to_string(index)) out.push_back(Symbol::Digit(ch - '0'));
  if (index == count) {
    out.push_back(Symbol::Rect());
  } else if (layout.kind == ArrangementLayout::Kind::kTable && index % layout.cols == 0) {
    out.push_back(Symbol::Dot());
  }
  return out;
}

}  // namespace cuebar

#endif  // CUEBAR_LAYOUT_HPP_
