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

#ifndef CUEBAR_PAYLOAD_HPP_
#define CUEBAR_PAYLOAD_HPP_

#include <algorithm>
#include <array>
#include <cctype>
#include <string>
#include <string_view>

#include "cuebar/common.hpp"
#include "cuebar/crypto.hpp"
#include "cuebar/keys.hpp"

namespace cuebar {

inline constexpr std::size_t kNonceBytes = 16;
inline constexpr std::size_t kTagBytes = 20;
inline constexpr std::size_t kPayloadOverhead = kNonceBytes + kTagBytes;

using Tag = std::array<std::uint8_t, kTagBytes>;

// Encrypt-then-MAC output: the counter-mode nonce, the ciphertext and an
// HMAC-SHA1 tag over nonce || ciphertext.
struct ProtectedPayload {
  Block128 nonce{};
  Bytes ciphertext;
  Tag tag{};

  friend bool operator==(const ProtectedPayload&, const ProtectedPayload&) = default;
};

// nonce || ciphertext || tag
inline Bytes serialize(const ProtectedPayload& p) {
  Bytes out;
  out.reserve(kPayloadOverhead + p.ciphertext.size());
  out.insert(out.end(), p.nonce.begin(), p.nonce.end());
  out.insert(out.end(), p.ciphertext.begin(), p.ciphertext.end());
  out.insert(out.end(), p.tag.begin(), p.tag.end());
  return out;
}

inline ProtectedPayload deserialize(std::span<const std::uint8_t> raw) {
  if (raw.size() < kPayloadOverhead)
    throw DecodeError("payload shorter than nonce and tag");
  ProtectedPayload p;
  std::copy_n(raw.begin(), kNonceBytes, p.nonce.begin());
  p.ciphertext.assign(raw.begin() + kNonceBytes, raw.end() - kTagBytes);
  std::copy(raw.end() - kTagBytes, raw.end(), p.tag.begin());
  return p;
}

namespace detail {

inline Tag compute_tag(const SessionKey& key, const Block128& nonce,
                       std::span<const std::uint8_t> ciphertext) {
  Bytes mac_input(nonce.begin(), nonce.end());
  mac_input.insert(mac_input.end(), ciphertext.begin(), ciphertext.end());
  return crypto::hmac_sha1(key.mac_key(), mac_input);
}

}  // namespace detail

// The caller must not reuse a nonce under the same key.
inline ProtectedPayload protect(std::span<const std::uint8_t> message,
                                const SessionKey& key, const Block128& nonce) {
  ProtectedPayload p;
  p.nonce = nonce;
  p.ciphertext = crypto::aes128_ctr(key.enc_key(), nonce, message);
  p.tag = detail::compute_tag(key, nonce, p.ciphertext);
  return p;
}

// Verifies the tag before decrypting anything. Throws AuthError on mismatch.
inline Bytes unprotect(const ProtectedPayload& p, const SessionKey& key) {
  Tag expected = detail::compute_tag(key, p.nonce, p.ciphertext);
  if (!crypto::equal_ct(expected, p.tag))
    throw AuthError("MAC verification failed");
  return crypto::aes128_ctr(key.enc_key(), p.nonce, p.ciphertext);
}

// --- Readable form (RFC 4648 Base32, unpadded) ------------------------------

inline constexpr std::string_view kBase32Alphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZ234567";

inline std::string base32_encode(std::span<const std::uint8_t> data) {
  std::string out;
  out.reserve((data.size() * 8 + 4) / 5);
  std::uint32_t buffer = 0;
  int bits = 0;
  for (std::uint8_t byte : data) {
    buffer = (buffer << 8) | byte;
    bits += 8;
    while (bits >= 5) {
      out.push_back(kBase32Alphabet[(buffer >> (bits - 5)) & 0x1F]);
      bits -= 5;
    }
  }
  if (bits > 0) out.push_back(kBase32Alphabet[(buffer << (5 - bits)) & 0x1F]);
  return out;
}

// Case-insensitive; whitespace is ignored. Rejects characters outside the
// alphabet, lengths no byte string can produce, and non-zero trailing bits.
inline Bytes base32_decode(std::string_view text) {
  Bytes out;
  std::uint32_t buffer = 0;
  int bits = 0;
  std::size_t symbols = 0;
  for (char raw : text) {
    if (std::isspace(static_cast<unsigned char>(raw))) continue;
    char c = static_cast<char>(std::toupper(static_cast<unsigned char>(raw)));
    auto pos = kBase32Alphabet.find(c);
    if (pos == std::string_view::npos)
      throw DecodeError(std::string("invalid Base32 character '") + raw + "'");
    buffer = (buffer << 5) | static_cast<std::uint32_t>(pos);
    bits += 5;
    ++symbols;
    if (bits >= 8) {
      out.push_back(static_cast<std::uint8_t>(buffer >> (bits - 8)));
      bits -= 8;
    }
    buffer &= (1u << bits) - 1;
  }
  switch (symbols % 8) {
    case 1: case 3: case 6:
      throw DecodeError("impossible Base32 length");
    default:
      break;
  }
  if (buffer != 0) throw DecodeError("non-zero Base32 trailing bits");
  return out;
}

inline std::string to_readable(const ProtectedPayload& p) {
  return base32_encode(serialize(p));
}

inline ProtectedPayload from_readable(std::string_view text) {
  return deserialize(base32_decode(text));
}

}  // namespace cuebar

#endif  // CUEBAR_PAYLOAD_HPP_
