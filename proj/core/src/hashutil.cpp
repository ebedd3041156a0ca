// SPDX-License-Identifier: Apache-2.0
#include "posat/hashutil.hpp"

#include <openssl/evp.h>

#include <cstring>
#include <stdexcept>

namespace posat {

namespace {

Digest sha256_parts(std::span<const std::uint8_t> a,
                    std::span<const std::uint8_t> b) {
  Digest out{};
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr) throw std::runtime_error("EVP_MD_CTX_new failed");
  unsigned int len = 0;
  if (EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      (!a.empty() && EVP_DigestUpdate(ctx, a.data(), a.size()) != 1) ||
      (!b.empty() && EVP_DigestUpdate(ctx, b.data(), b.size()) != 1) ||
      EVP_DigestFinal_ex(ctx, out.data(), &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("sha256 failed");
  }
  EVP_MD_CTX_free(ctx);
  return out;
}

}  // namespace

Digest sha256(std::span<const std::uint8_t> data) {
  return sha256_parts(data, {});
}

Digest sha256_concat(std::span<const std::uint8_t> a,
                     std::span<const std::uint8_t> b) {
  return sha256_parts(a, b);
}

std::uint64_t digest_prefix_u64(const Digest& d) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | d[static_cast<std::size_t>(i)];
  return v;
}

std::uint64_t lottery_hash(const Digest& value, std::uint64_t slot) {
  std::array<std::uint8_t, 8> slot_bytes{};
  for (int i = 0; i < 8; ++i)
    slot_bytes[static_cast<std::size_t>(i)] =
        static_cast<std::uint8_t>(slot >> (8 * i));
  return digest_prefix_u64(sha256_concat(bytes_of(value), slot_bytes));
}

std::string hex(const Digest& d) {
  static const char* k = "0123456789abcdef";
  std::string s;
  s.reserve(64);
  for (auto b : d) {
    s.push_back(k[b >> 4]);
    s.push_back(k[b & 0xf]);
  }
  return s;
}

Digest digest_from_u64(std::uint64_t v) {
  std::array<std::uint8_t, 8> b{};
  for (int i = 0; i < 8; ++i)
    b[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v >> (8 * i));
  return sha256(b);
}

}  // namespace posat
