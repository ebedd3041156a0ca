// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "posat/hashutil.hpp"
#include "posat/rng.hpp"

namespace posat::randvdf {

/// Per-iteration win probability of one stake unit. Scenario constant; the
/// protocol only fixes that the threshold is proportional to stake.
constexpr double kDefaultPUnit = 1.0 / 256.0;

struct StakeTooLarge : std::runtime_error {
  StakeTooLarge() : std::runtime_error("stake implies win probability > 1") {}
};

struct VdfKeys {
  Digest ek{};  // evaluation key, mixed into every iteration
  Digest vk{};  // verification key; recomputation realization uses vk == ek
};

VdfKeys keygen(std::uint64_t seed);

/// An in-flight evaluation that the caller can advance step by step. The
/// event-driven simulator never uses this directly; it exists so tests can
/// pause/continue and tamper mid-stream.
struct VdfProcess {
  Digest input{};
  Digest current_output{};
  std::uint64_t iterations_done = 0;
  std::uint64_t slot = 0;
  double stake_s = 1.0;
};

struct VdfResult {
  Digest input{};
  Digest output{};
  std::vector<std::uint8_t> proof;  // u64 rand_iter LE + checkpoint digests
  std::uint64_t rand_iter = 0;
  std::uint64_t slot_final = 0;
  double stake_s = 1.0;
};

/// Proof checkpoint spacing (digest snapshot every 2^10 iterations).
constexpr std::uint64_t kCheckpointInterval = 1024;

/// Threshold for the lottery comparison, as a 64-bit value compared against
/// the first 8 bytes of the iteration hash. Exactly linear in stake.
std::uint64_t threshold(double stake_s, double p_unit = kDefaultPUnit);

/// One application of the sequential function f(x) = Hash(ek || x).
Digest iterate(const Digest& ek, const Digest& x);

/// Runs the iteration until Hash(output, slot) < Threshold(stake_s).
/// Deterministic in (input, ek, slot); rand_iter is geometric with
/// per-step success probability stake_s * p_unit.
VdfResult eval(const Digest& input, const VdfKeys& keys, double stake_s,
               std::uint64_t slot, double p_unit = kDefaultPUnit,
               std::uint64_t max_iters = 0);

/// Recomputation verification: replays the chain, checks the threshold at
/// the reported final slot and the embedded checkpoints.
bool verify(const VdfKeys& keys, const VdfResult& result,
            double p_unit = kDefaultPUnit);

std::vector<std::uint8_t> encode_proof(std::uint64_t rand_iter,
                                       const std::vector<Digest>& checkpoints);
std::optional<std::uint64_t> proof_rand_iter(
    const std::vector<std::uint8_t>& proof);

/// Continuous-time limit used by the simulated-oracle realization: the win
/// delay of a coin with total election rate `stake_rate` (per second).
double sample_win_time(double stake_rate, Rng& rng);

/// Geometric iteration count with per-step success p (support {1, 2, ...}).
std::uint64_t sample_rand_iter(double p, Rng& rng);

}  // namespace posat::randvdf
