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

#ifndef CUEBAR_COMMON_HPP_
#define CUEBAR_COMMON_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cuebar {

using Bytes = std::vector<std::uint8_t>;
// One element per bit, each 0 or 1.
using BitVec = std::vector<std::uint8_t>;
using Block128 = std::array<std::uint8_t, 16>;

// Error hierarchy. Every failure the library reports derives from Error so
// callers can catch broadly; the leaf types name the contract that broke.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define CUEBAR_DEFINE_ERROR(Name)            \
  class Name : public Error {                \
   public:                                   \
    using Error::Error;                      \
  }

CUEBAR_DEFINE_ERROR(AuthError);
CUEBAR_DEFINE_ERROR(DecodeError);
CUEBAR_DEFINE_ERROR(LengthError);
CUEBAR_DEFINE_ERROR(FormatError);
CUEBAR_DEFINE_ERROR(FitError);
CUEBAR_DEFINE_ERROR(RangeError);
CUEBAR_DEFINE_ERROR(CapacityError);
CUEBAR_DEFINE_ERROR(TooFewPointsError);
CUEBAR_DEFINE_ERROR(DegenerateError);
CUEBAR_DEFINE_ERROR(CardinalityError);
CUEBAR_DEFINE_ERROR(BoundsError);
CUEBAR_DEFINE_ERROR(ConfigError);
CUEBAR_DEFINE_ERROR(SimulationError);

#undef CUEBAR_DEFINE_ERROR

// Raised when the BCH decoder corrects more bits than the policy allows or
// cannot decode at all. block() is the index of the offending codeword
// within a stream, or -1 for a lone block.
class RejectError : public Error {
 public:
  RejectError(const std::string& what, int block = -1)
      : Error(what), block_(block) {}
  int block() const { return block_; }

 private:
  int block_;
};

// SplitMix64 step. Used to derive independent per-trial seeds from one
// master seed so results never depend on scheduling.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
}

using Rng = std::mt19937_64;

inline Bytes random_bytes(Rng& rng, std::size_t n) {
  Bytes out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng() & 0xFF);
  return out;
}

inline Block128 random_block(Rng& rng) {
  Block128 out{};
  for (auto& b : out) b = static_cast<std::uint8_t>(rng() & 0xFF);
  return out;
}

// MSB-first unpacking, matching the big-endian bit order of serialized
// payloads.
inline BitVec bytes_to_bits(std::span<const std::uint8_t> bytes) {
  BitVec bits;
  bits.reserve(bytes.size() * 8);
  for (std::uint8_t b : bytes)
    for (int i = 7; i >= 0; --i) bits.push_back((b >> i) & 1);
  return bits;
}

// Trailing bits that do not fill a byte are zero-padded on the right.
inline Bytes bits_to_bytes(std::span<const std::uint8_t> bits) {
  Bytes out((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80 >> (i % 8));
  return out;
}

inline std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  s.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    s.push_back(kDigits[b >> 4]);
    s.push_back(kDigits[b & 0xF]);
  }
  return s;
}

inline Bytes from_hex(std::string_view hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  if (hex.size() % 2 != 0) throw FormatError("odd-length hex string");
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = nibble(hex[2 * i]), lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw FormatError("invalid hex digit");
    out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return out;
}

inline Bytes to_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }
inline std::string to_string(std::span<const std::uint8_t> b) {
  return std::string(b.begin(), b.end());
}

}  // namespace cuebar

#endif  // CUEBAR_COMMON_HPP_
