// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace posat {

/// Deterministic seed mixing for independent substreams. Every random
/// decision in a run draws from a stream derived from (run seed, purpose tag,
/// index), so adding or removing one consumer never perturbs the others.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag,
                              std::uint64_t index = 0) {
  std::uint64_t z = seed ^ (tag * 0x9e3779b97f4a7c15ULL) ^
                    (index * 0xbf58476d1ce4e5b9ULL);
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Substream purpose tags.
namespace rng_tag {
constexpr std::uint64_t coin_wins = 1;
constexpr std::uint64_t adversary_tree = 2;
constexpr std::uint64_t tx_arrivals = 3;
constexpr std::uint64_t brw_trial = 4;
constexpr std::uint64_t race = 5;
constexpr std::uint64_t vdf_input = 6;
constexpr std::uint64_t rand_value = 7;
}  // namespace rng_tag

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed, std::uint64_t tag,
                    std::uint64_t index = 0) {
  return Rng(mix_seed(seed, tag, index));
}

inline double uniform01(Rng& rng) {
  // 53-bit mantissa, strictly inside (0,1) so log() is always finite.
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
}

inline double sample_exponential(Rng& rng, double rate) {
  return -std::log(uniform01(rng)) / rate;
}

/// Sum of `shape` i.i.d. exponentials. Shapes here are small (the epoch
/// length c), so direct summation beats a gamma sampler.
inline double sample_erlang(Rng& rng, int shape, double rate) {
  double acc = 0.0;
  for (int i = 0; i < shape; ++i) acc += sample_exponential(rng, rate);
  return acc;
}

inline std::uint64_t sample_poisson_count(Rng& rng, double mean) {
  std::poisson_distribution<std::uint64_t> dist(mean);
  return dist(rng);
}

}  // namespace posat
