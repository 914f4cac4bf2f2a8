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

#ifndef CUEBAR_KEYS_HPP_
#define CUEBAR_KEYS_HPP_

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "cuebar/common.hpp"
#include "cuebar/crypto.hpp"

namespace cuebar {

// The session key k_s = (k_T, k_E, k_V): MAC key, encryption key and the
// key that selects the secret L-block codebook. Immutable once built.
class SessionKey {
 public:
  SessionKey(const Block128& mac, const Block128& enc, const Block128& cue)
      : mac_(mac), enc_(enc), cue_(cue) {}

  const Block128& mac_key() const { return mac_; }
  const Block128& enc_key() const { return enc_; }
  const Block128& cue_key() const { return cue_; }

  friend bool operator==(const SessionKey&, const SessionKey&) = default;

 private:
  Block128 mac_;
  Block128 enc_;
  Block128 cue_;
};

namespace detail {

inline Block128 labelled_key(std::uint64_t seed, std::string_view label) {
  Bytes input = to_bytes(label);
  for (int i = 7; i >= 0; --i)
    input.push_back(static_cast<std::uint8_t>(seed >> (8 * i)));
  auto digest = crypto::sha256(input);
  Block128 out{};
  std::copy_n(digest.begin(), out.size(), out.begin());
  return out;
}

}  // namespace detail

// Deterministic test-fixture key generation.
inline SessionKey keygen(std::uint64_t seed) {
  return SessionKey(detail::labelled_key(seed, "cuebar/k_T"),
                    detail::labelled_key(seed, "cuebar/k_E"),
                    detail::labelled_key(seed, "cuebar/k_V"));
}

// Key file: three lowercase hex lines k_T, k_E, k_V, newline-terminated.
inline std::string format_key_file(const SessionKey& key) {
  return to_hex(key.mac_key()) + "\n" + to_hex(key.enc_key()) + "\n" +
         to_hex(key.cue_key()) + "\n";
}

inline SessionKey parse_key_file(const std::string& text) {
  std::istringstream in(text);
  std::array<Block128, 3> parts{};
  for (auto& part : parts) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError("key file: expected 3 lines");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.size() != 32) throw FormatError("key file: each line must be 32 hex digits");
    Bytes raw = from_hex(line);
    std::copy(raw.begin(), raw.end(), part.begin());
  }
  return SessionKey(parts[0], parts[1], parts[2]);
}

inline SessionKey read_key_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open key file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_key_file(ss.str());
}

// --- L-block codebook -------------------------------------------------------

// An L-block pattern is the 3-bit number p1p2p3 (p1 most significant).
using Pattern = std::uint8_t;

// Groups in canonical ascending order. W holds the patterns of weight >= 2.
inline constexpr std::array<Pattern, 4> kGroupW = {0b011, 0b101, 0b110, 0b111};
inline constexpr std::array<Pattern, 4> kGroupB = {0b000, 0b001, 0b010, 0b100};
inline constexpr int kCodebookCount = 576;  // 4! * 4!

using Perm4 = std::array<std::uint8_t, 4>;

// n-th permutation of {0,1,2,3} in lexicographic order, n in [0, 24).
constexpr Perm4 nth_permutation(int n) {
  Perm4 pool = {0, 1, 2, 3};
  Perm4 out{};
  int remaining = 4;
  constexpr std::array<int, 4> kFact = {6, 2, 1, 1};
  for (int i = 0; i < 4; ++i) {
    int idx = n / kFact[i];
    n %= kFact[i];
    out[i] = pool[idx];
    for (int j = idx; j < remaining - 1; ++j) pool[j] = pool[j + 1];
    --remaining;
  }
  return out;
}

constexpr int permutation_rank(const Perm4& p) {
  constexpr std::array<int, 4> kFact = {6, 2, 1, 1};
  int rank = 0;
  for (int i = 0; i < 4; ++i) {
    int smaller = 0;
    for (int j = i + 1; j < 4; ++j)
      if (p[j] < p[i]) ++smaller;
    rank += smaller * kFact[i];
  }
  return rank;
}

// The secret pair of bijections from bit pairs {00,01,10,11} to the W and
// B groups. index = 24 * rank(pi_W) + rank(pi_B); index 0 maps every pair to
// the group elements in sorted order.
class LBlockCodebook {
 public:
  explicit LBlockCodebook(int index) : index_(index) {
    if (index < 0 || index >= kCodebookCount)
      throw RangeError("codebook index out of range");
    Perm4 w = nth_permutation(index / 24);
    Perm4 b = nth_permutation(index % 24);
    for (int pair = 0; pair < 4; ++pair) {
      white_[pair] = kGroupW[w[pair]];
      black_[pair] = kGroupB[b[pair]];
      inverse_[white_[pair]] = static_cast<std::uint8_t>(pair);
      inverse_[black_[pair]] = static_cast<std::uint8_t>(pair);
    }
  }

  static LBlockCodebook identity() { return LBlockCodebook(0); }

  int index() const { return index_; }
  Pattern white(int pair) const { return white_.at(pair); }
  Pattern black(int pair) const { return black_.at(pair); }
  // Bit pair carried by any of the 8 patterns, looked up in its own group.
  int pair_of(Pattern p) const { return inverse_.at(p & 7); }

  // Recovers the index from the mapping alone.
  int recompute_index() const {
    Perm4 w{}, b{};
    for (int pair = 0; pair < 4; ++pair) {
      w[pair] = static_cast<std::uint8_t>(
          std::find(kGroupW.begin(), kGroupW.end(), white_[pair]) - kGroupW.begin());
      b[pair] = static_cast<std::uint8_t>(
          std::find(kGroupB.begin(), kGroupB.end(), black_[pair]) - kGroupB.begin());
    }
    return 24 * permutation_rank(w) + permutation_rank(b);
  }

  friend bool operator==(const LBlockCodebook& a, const LBlockCodebook& b) {
    return a.index_ == b.index_;
  }

 private:
  int index_;
  std::array<Pattern, 4> white_{};
  std::array<Pattern, 4> black_{};
  std::array<std::uint8_t, 8> inverse_{};
};

// Codebook index = HMAC-SHA1(k_V, "codebook")[0..4) big-endian mod 576.
inline int codebook_index_for(const Block128& cue_key) {
  auto mac = crypto::hmac_sha1(cue_key, to_bytes("codebook"));
  std::uint32_t word = (std::uint32_t{mac[0]} << 24) | (std::uint32_t{mac[1]} << 16) |
                       (std::uint32_t{mac[2]} << 8) | std::uint32_t{mac[3]};
  return static_cast<int>(word % kCodebookCount);
}

inline LBlockCodebook derive_codebook(const Block128& cue_key) {
  return LBlockCodebook(codebook_index_for(cue_key));
}

}  // namespace cuebar

#endif  // CUEBAR_KEYS_HPP_
