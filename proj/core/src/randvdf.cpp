// SPDX-License-Identifier: Apache-2.0
#include "posat/randvdf.hpp"

#include <cmath>
#include <cstring>

namespace posat::randvdf {

VdfKeys keygen(std::uint64_t seed) {
  VdfKeys k;
  k.ek = digest_from_u64(mix_seed(seed, 0x6b657967ULL));  // "keyg"
  k.vk = k.ek;  // recomputation realization: verifier replays with the same key
  return k;
}

std::uint64_t threshold(double stake_s, double p_unit) {
  if (stake_s <= 0.0) throw std::invalid_argument("stake must be positive");
  const double p = stake_s * p_unit;
  if (p > 1.0) throw StakeTooLarge();
  // Linear in stake by construction: round(p * 2^64), saturating at p == 1.
  const long double scaled = static_cast<long double>(p) * 18446744073709551616.0L;
  if (scaled >= 18446744073709551615.0L) return ~0ULL;
  return static_cast<std::uint64_t>(scaled + 0.5L);
}

Digest iterate(const Digest& ek, const Digest& x) {
  return sha256_concat(bytes_of(ek), bytes_of(x));
}

namespace {
// p == 1 saturates the threshold; every hash value must then win.
bool lottery_win(std::uint64_t h, std::uint64_t th) {
  return th == ~0ULL || h < th;
}
}  // namespace

std::vector<std::uint8_t> encode_proof(std::uint64_t rand_iter,
                                       const std::vector<Digest>& checkpoints) {
  std::vector<std::uint8_t> out(8);
  for (int i = 0; i < 8; ++i)
    out[static_cast<std::size_t>(i)] =
        static_cast<std::uint8_t>(rand_iter >> (8 * i));
  for (const auto& d : checkpoints) out.insert(out.end(), d.begin(), d.end());
  return out;
}

std::optional<std::uint64_t> proof_rand_iter(
    const std::vector<std::uint8_t>& proof) {
  if (proof.size() < 8) return std::nullopt;
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i)
    v = (v << 8) | proof[static_cast<std::size_t>(i)];
  return v;
}

VdfResult eval(const Digest& input, const VdfKeys& keys, double stake_s,
               std::uint64_t slot, double p_unit, std::uint64_t max_iters) {
  const std::uint64_t th = threshold(stake_s, p_unit);
  VdfResult r;
  r.input = input;
  r.stake_s = stake_s;
  Digest out = input;
  std::vector<Digest> checkpoints;
  std::uint64_t iters = 0;
  while (true) {
    out = iterate(keys.ek, out);
    ++iters;
    ++slot;
    if (iters % kCheckpointInterval == 0) checkpoints.push_back(out);
    if (lottery_win(lottery_hash(out, slot), th)) break;
    if (max_iters != 0 && iters >= max_iters)
      throw std::runtime_error("eval exceeded iteration cap");
  }
  r.output = out;
  r.rand_iter = iters;
  r.slot_final = slot;
  r.proof = encode_proof(iters, checkpoints);
  return r;
}

bool verify(const VdfKeys& keys, const VdfResult& result, double p_unit) {
  auto claimed = proof_rand_iter(result.proof);
  if (!claimed || *claimed != result.rand_iter || result.rand_iter == 0)
    return false;
  std::uint64_t th;
  try {
    th = threshold(result.stake_s, p_unit);
  } catch (const std::exception&) {
    return false;
  }

  const std::size_t n_checkpoints = (result.proof.size() - 8) / 32;
  if ((result.proof.size() - 8) % 32 != 0) return false;
  if (n_checkpoints != result.rand_iter / kCheckpointInterval) return false;

  Digest out = result.input;
  std::size_t next_cp = 0;
  for (std::uint64_t i = 1; i <= result.rand_iter; ++i) {
    out = iterate(keys.vk, out);
    if (i % kCheckpointInterval == 0) {
      Digest cp;
      std::memcpy(cp.data(), result.proof.data() + 8 + 32 * next_cp, 32);
      if (cp != out) return false;
      ++next_cp;
    }
    // Intermediate iterations must not already satisfy the threshold at
    // their slot; the reported rand_iter has to be the first success.
    const std::uint64_t slot_i = result.slot_final - result.rand_iter + i;
    const bool win = lottery_win(lottery_hash(out, slot_i), th);
    if (i < result.rand_iter && win) return false;
    if (i == result.rand_iter && !win) return false;
  }
  return out == result.output;
}

double sample_win_time(double stake_rate, Rng& rng) {
  if (stake_rate <= 0.0)
    throw std::invalid_argument("stake_rate must be positive");
  return sample_exponential(rng, stake_rate);
}

std::uint64_t sample_rand_iter(double p, Rng& rng) {
  if (p <= 0.0 || p > 1.0) throw std::invalid_argument("p out of range");
  if (p == 1.0) return 1;
  const double u = uniform01(rng);
  return 1 + static_cast<std::uint64_t>(std::log(u) / std::log1p(-p));
}

}  // namespace posat::randvdf
