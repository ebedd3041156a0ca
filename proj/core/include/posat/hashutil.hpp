// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace posat {

using Digest = std::array<std::uint8_t, 32>;

Digest sha256(std::span<const std::uint8_t> data);
Digest sha256_concat(std::span<const std::uint8_t> a,
                     std::span<const std::uint8_t> b);

/// First eight bytes of a digest as a big-endian integer. Used for the
/// lottery comparison Hash(output, slot) < Threshold(s).
std::uint64_t digest_prefix_u64(const Digest& d);

/// Digest of (value, slot); the per-iteration lottery hash.
std::uint64_t lottery_hash(const Digest& value, std::uint64_t slot);

std::string hex(const Digest& d);

inline std::span<const std::uint8_t> bytes_of(const Digest& d) {
  return {d.data(), d.size()};
}

Digest digest_from_u64(std::uint64_t v);

}  // namespace posat
