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

// Thin RAII wrappers over libcrypto for the three primitives the codec
// needs. Nothing here composes them; see payload.hpp for that.

#ifndef CUEBAR_CRYPTO_HPP_
#define CUEBAR_CRYPTO_HPP_

#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/sha.h>

#include <array>
#include <cstdint>
#include <memory>
#include <span>

#include "cuebar/common.hpp"

namespace cuebar::crypto {

using Sha1Digest = std::array<std::uint8_t, 20>;
using Sha256Digest = std::array<std::uint8_t, 32>;

inline Sha1Digest hmac_sha1(std::span<const std::uint8_t> key,
                            std::span<const std::uint8_t> data) {
  Sha1Digest out{};
  unsigned int len = 0;
  if (HMAC(EVP_sha1(), key.data(), static_cast<int>(key.size()), data.data(),
           data.size(), out.data(), &len) == nullptr ||
      len != out.size())
    throw Error("HMAC-SHA1 failed");
  return out;
}

inline Sha256Digest sha256(std::span<const std::uint8_t> data) {
  Sha256Digest out{};
  SHA256(data.data(), data.size(), out.data());
  return out;
}

// AES-128 in counter mode; the 16-byte IV is the initial counter block.
// Encryption and decryption are the same operation.
inline Bytes aes128_ctr(std::span<const std::uint8_t, 16> key,
                        std::span<const std::uint8_t, 16> iv,
                        std::span<const std::uint8_t> in) {
  std::unique_ptr<EVP_CIPHER_CTX, decltype(&EVP_CIPHER_CTX_free)> ctx(
      EVP_CIPHER_CTX_new(), &EVP_CIPHER_CTX_free);
  if (!ctx) throw Error("EVP_CIPHER_CTX_new failed");
  if (EVP_EncryptInit_ex(ctx.get(), EVP_aes_128_ctr(), nullptr, key.data(),
                         iv.data()) != 1)
    throw Error("AES-128-CTR init failed");
  Bytes out(in.size());
  int len = 0;
  if (!in.empty() &&
      EVP_EncryptUpdate(ctx.get(), out.data(), &len, in.data(),
                        static_cast<int>(in.size())) != 1)
    throw Error("AES-128-CTR update failed");
  int tail = 0;
  if (EVP_EncryptFinal_ex(ctx.get(), out.data() + len, &tail) != 1)
    throw Error("AES-128-CTR final failed");
  return out;
}

// Constant-time comparison for MAC tags.
inline bool equal_ct(std::span<const std::uint8_t> a,
                     std::span<const std::uint8_t> b) {
  if (a.size() != b.size()) return false;
  std::uint8_t acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc |= a[i] ^ b[i];
  return acc == 0;
}

}  // namespace cuebar::crypto

#endif  // CUEBAR_CRYPTO_HPP_
