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

// (63,36,11) binary BCH code over GF(2^6), primitive polynomial x^6 + x + 1.
//
// Bit order: codeword bit i is the coefficient of x^(62-i), so the 36 data
// bits come first (systematic, data-first) followed by 27 parity bits.
// Decoding is bounded-distance (Berlekamp-Massey + Chien search) and is
// further restricted by EccPolicy::t_reject: a block that needs more
// corrections than that is refused even when the code could fix it.

#ifndef CUEBAR_ECC_HPP_
#define CUEBAR_ECC_HPP_

#include <array>
#include <bit>
#include <cstdint>
#include <string>

#include "cuebar/common.hpp"

namespace cuebar::ecc {

inline constexpr int kN = 63;
inline constexpr int kK = 36;
inline constexpr int kParity = kN - kK;  // 27
inline constexpr int kT = 5;             // guaranteed correction radius
inline constexpr int kDesignedDistance = 11;
inline constexpr int kHeaderBits = 16;
inline constexpr std::uint32_t kPrimitivePoly = 0b1000011;  // x^6 + x + 1

struct EccPolicy {
  int t_reject = 3;

  void validate() const {
    if (t_reject < 0 || t_reject > kT)
      throw ConfigError("t_reject must lie in [0, 5]");
  }
};

// Log/antilog tables for GF(64). Built once, read-only afterwards.
class GaloisField64 {
 public:
  static const GaloisField64& instance() {
    static const GaloisField64 gf;
    return gf;
  }

  std::uint8_t exp(int i) const { return exp_[((i % 63) + 63) % 63]; }
  int log(std::uint8_t a) const { return log_[a]; }  // undefined for 0

  std::uint8_t mul(std::uint8_t a, std::uint8_t b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[(log_[a] + log_[b]) % 63];
  }
  std::uint8_t inv(std::uint8_t a) const { return exp_[(63 - log_[a]) % 63]; }

 private:
  GaloisField64() {
    std::uint32_t x = 1;
    for (int i = 0; i < 63; ++i) {
      exp_[i] = static_cast<std::uint8_t>(x);
      log_[x] = i;
      x <<= 1;
      if (x & 0x40) x ^= kPrimitivePoly;
    }
    log_[0] = -1;
  }

  std::array<std::uint8_t, 63> exp_{};
  std::array<int, 64> log_{};
};

// Binary polynomials packed as bit k = coefficient of x^k.
inline std::uint64_t poly_mul_gf2(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  for (int i = 0; i < 64 && (b >> i); ++i)
    if ((b >> i) & 1) r ^= a << i;
  return r;
}

inline int poly_degree(std::uint64_t p) { return p ? 63 - std::countl_zero(p) : -1; }

// Minimal polynomial of alpha^j over GF(2), from the product over its
// cyclotomic coset.
inline std::uint64_t minimal_polynomial(int j) {
  const auto& gf = GaloisField64::instance();
  std::array<std::uint8_t, 8> coeffs{};  // GF(64) coefficients, low first
  coeffs[0] = 1;
  int degree = 0;
  int e = j % 63;
  do {
    std::uint8_t root = gf.exp(e);
    // multiply by (x + root)
    for (int k = degree + 1; k >= 1; --k)
      coeffs[k] = static_cast<std::uint8_t>(coeffs[k - 1] ^ gf.mul(coeffs[k], root));
    coeffs[0] = gf.mul(coeffs[0], root);
    ++degree;
    e = (e * 2) % 63;
  } while (e != j % 63);
  std::uint64_t out = 0;
  for (int k = 0; k <= degree; ++k) {
    if (coeffs[k] > 1) throw Error("minimal polynomial not binary");
    if (coeffs[k]) out |= std::uint64_t{1} << k;
  }
  return out;
}

// g(x) = lcm of the minimal polynomials of alpha^1 .. alpha^10.
inline std::uint64_t generator_polynomial() {
  static const std::uint64_t g = [] {
    std::uint64_t acc = 1;
    std::array<bool, 63> seen{};
    for (int j = 1; j < kDesignedDistance; ++j) {
      if (seen[j]) continue;
      int e = j;
      do {
        seen[e] = true;
        e = (e * 2) % 63;
      } while (e != j);
      acc = poly_mul_gf2(acc, minimal_polynomial(j));
    }
    return acc;
  }();
  return g;
}

// Codewords are carried as 63-bit integers in polynomial form; these convert
// to and from the bit-vector (index 0 = x^62) layout.
inline std::uint64_t bits_to_poly(std::span<const std::uint8_t> bits) {
  std::uint64_t p = 0;
  const int n = static_cast<int>(bits.size());
  for (int i = 0; i < n; ++i)
    if (bits[i]) p |= std::uint64_t{1} << (n - 1 - i);
  return p;
}

inline BitVec poly_to_bits(std::uint64_t p, int n) {
  BitVec bits(n);
  for (int i = 0; i < n; ++i) bits[i] = (p >> (n - 1 - i)) & 1;
  return bits;
}

inline std::uint64_t encode_poly(std::uint64_t data) {
  const std::uint64_t g = generator_polynomial();
  std::uint64_t rem = data << kParity;
  for (int d = kN - 1; d >= kParity; --d)
    if ((rem >> d) & 1) rem ^= g << (d - kParity);
  return (data << kParity) | rem;
}

struct BlockDecode {
  std::uint64_t codeword = 0;  // corrected codeword polynomial
  int corrected = 0;
};

// Bounded-distance decode without the policy check. Returns corrected = -1
// when the received word is farther than t from every codeword (or the
// locator has no proper root set).
inline BlockDecode correct_poly(std::uint64_t received) {
  const auto& gf = GaloisField64::instance();
  constexpr int kSyn = 2 * kT;
  std::array<std::uint8_t, kSyn + 1> s{};
  bool all_zero = true;
  for (int j = 1; j <= kSyn; ++j) {
    std::uint8_t acc = 0;
    for (std::uint64_t r = received; r; r &= r - 1)
      acc ^= gf.exp(j * std::countr_zero(r));
    s[j] = acc;
    all_zero &= acc == 0;
  }
  if (all_zero) return {received, 0};

  // Berlekamp-Massey.
  std::array<std::uint8_t, kSyn + 2> lambda{}, prev{}, tmp{};
  lambda[0] = prev[0] = 1;
  int l = 0, m = 1;
  std::uint8_t b = 1;
  for (int n = 0; n < kSyn; ++n) {
    std::uint8_t d = s[n + 1];
    for (int i = 1; i <= l; ++i) d ^= gf.mul(lambda[i], s[n + 1 - i]);
    if (d == 0) {
      ++m;
      continue;
    }
    std::uint8_t coef = gf.mul(d, gf.inv(b));
    tmp = lambda;
    for (int i = 0; i + m < kSyn + 2; ++i) lambda[i + m] ^= gf.mul(coef, prev[i]);
    if (2 * l <= n) {
      l = n + 1 - l;
      prev = tmp;
      b = d;
      m = 1;
    } else {
      ++m;
    }
  }
  int degree = 0;
  for (int i = kSyn + 1; i > 0; --i)
    if (lambda[i]) {
      degree = i;
      break;
    }
  if (degree != l || l > kT) return {received, -1};

  // Chien search: position k is in error iff Lambda(alpha^-k) = 0.
  std::uint64_t fixed = received;
  int roots = 0;
  for (int k = 0; k < kN; ++k) {
    std::uint8_t acc = 0;
    for (int i = 0; i <= l; ++i) acc ^= gf.mul(lambda[i], gf.exp(-k * i));
    if (acc == 0) {
      fixed ^= std::uint64_t{1} << k;
      ++roots;
    }
  }
  if (roots != l) return {received, -1};
  return {fixed, l};
}

struct DecodedBlock {
  BitVec data;
  int corrected = 0;
};

inline BitVec encode_block(std::span<const std::uint8_t> data) {
  if (data.size() != static_cast<std::size_t>(kK))
    throw LengthError("BCH block needs exactly 36 data bits");
  return poly_to_bits(encode_poly(bits_to_poly(data)), kN);
}

inline DecodedBlock decode_block(std::span<const std::uint8_t> received,
                                 const EccPolicy& policy = {}) {
  policy.validate();
  if (received.size() != static_cast<std::size_t>(kN))
    throw LengthError("BCH block needs exactly 63 bits");
  BlockDecode r = correct_poly(bits_to_poly(received));
  if (r.corrected < 0) throw RejectError("uncorrectable BCH block");
  if (r.corrected > policy.t_reject)
    throw RejectError("BCH block needs " + std::to_string(r.corrected) +
                      " corrections, policy allows " + std::to_string(policy.t_reject));
  return {poly_to_bits(r.codeword >> kParity, kK), r.corrected};
}

inline std::size_t stream_blocks(std::size_t payload_bits) {
  return (kHeaderBits + payload_bits + kK - 1) / kK;
}

inline std::size_t encoded_stream_bits(std::size_t payload_bits) {
  return kN * stream_blocks(payload_bits);
}

// 16-bit big-endian length header, payload, zero fill to a multiple of 36,
// then one codeword per 36-bit block.
inline BitVec encode_stream(std::span<const std::uint8_t> bits) {
  if (bits.size() >= (std::size_t{1} << kHeaderBits))
    throw LengthError("stream payload must be shorter than 2^16 bits");
  BitVec framed;
  framed.reserve(stream_blocks(bits.size()) * kK);
  for (int i = kHeaderBits - 1; i >= 0; --i) framed.push_back((bits.size() >> i) & 1);
  framed.insert(framed.end(), bits.begin(), bits.end());
  framed.resize(stream_blocks(bits.size()) * kK, 0);

  BitVec out;
  out.reserve(framed.size() / kK * kN);
  for (std::size_t off = 0; off < framed.size(); off += kK) {
    std::uint64_t cw = encode_poly(
        bits_to_poly(std::span<const std::uint8_t>(framed).subspan(off, kK)));
    for (int i = kN - 1; i >= 0; --i) out.push_back((cw >> i) & 1);
  }
  return out;
}

struct StreamDecode {
  BitVec bits;
  int corrected = 0;  // total over all blocks
};

// Every block is decoded under the policy, including padding blocks, and the
// zero fill after the payload must really be zero. RejectError::block()
// names the first failing codeword.
inline StreamDecode decode_stream_detailed(std::span<const std::uint8_t> bits,
                                           const EccPolicy& policy = {}) {
  policy.validate();
  if (bits.size() % kN != 0)
    throw LengthError("stream length must be a multiple of 63");
  const std::size_t blocks = bits.size() / kN;
  if (blocks == 0) throw FormatError("empty stream");
  BitVec framed;
  framed.reserve(blocks * kK);
  int corrected = 0;
  for (std::size_t b = 0; b < blocks; ++b) {
    BlockDecode r = correct_poly(bits_to_poly(bits.subspan(b * kN, kN)));
    const int idx = static_cast<int>(b);
    if (r.corrected < 0)
      throw RejectError("uncorrectable BCH block " + std::to_string(b), idx);
    if (r.corrected > policy.t_reject)
      throw RejectError("BCH block " + std::to_string(b) + " needs " +
                            std::to_string(r.corrected) + " corrections",
                        idx);
    corrected += r.corrected;
    std::uint64_t data = r.codeword >> kParity;
    for (int i = kK - 1; i >= 0; --i) framed.push_back((data >> i) & 1);
  }
  std::size_t length = 0;
  for (int i = 0; i < kHeaderBits; ++i) length = (length << 1) | framed[i];
  if (kHeaderBits + length > framed.size())
    throw FormatError("length header exceeds available bits");
  for (std::size_t i = kHeaderBits + length; i < framed.size(); ++i)
    if (framed[i])
      throw RejectError("non-zero stream padding",
                        static_cast<int>(i / kK));
  StreamDecode out;
  out.bits.assign(framed.begin() + kHeaderBits, framed.begin() + kHeaderBits + length);
  out.corrected = corrected;
  return out;
}

inline BitVec decode_stream(std::span<const std::uint8_t> bits,
                            const EccPolicy& policy = {}) {
  return decode_stream_detailed(bits, policy).bits;
}

}  // namespace cuebar::ecc

#endif  // CUEBAR_ECC_HPP_
