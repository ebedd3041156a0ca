// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "posat/chain.hpp"
#include "posat/node.hpp"

namespace posat::simnet {

struct ConfigInvalid : std::runtime_error {
  explicit ConfigInvalid(const std::string& what) : std::runtime_error(what) {}
};
struct InvariantViolation : std::runtime_error {
  explicit InvariantViolation(const std::string& what)
      : std::runtime_error(what) {}
};
struct MalformedTrace : std::runtime_error {
  explicit MalformedTrace(const std::string& what)
      : std::runtime_error(what) {}
};

/// Piecewise-constant rate over time: steps[i] applies on
/// [steps[i].first, steps[i+1].first). Must start at t = 0.
struct RateSchedule {
  std::vector<std::pair<double, double>> steps = {{0.0, 1.0}};

  double at(double t) const;
  double max_rate() const;
  double min_rate() const;
  static RateSchedule constant(double rate) { return {{{0.0, rate}}}; }
};

enum class DelayPolicy { Zero, Max, Split };

const char* to_string(DelayPolicy p);
DelayPolicy delay_policy_from_string(const std::string& s);

struct SimConfig {
  int c = 1;
  double delta = 0.0;
  int k_confirm = 6;
  double duration = 100.0;
  std::uint64_t seed = 1;
  RateSchedule honest_schedule = RateSchedule::constant(1.0);
  RateSchedule adversary_schedule = RateSchedule::constant(0.0);
  double lambda_min = 0.0;  // 0 = derive from honest_schedule
  double lambda_max = 0.0;  // 0 = derive from honest_schedule
  double kappa = 9.0;
  std::string adversary_strategy = "none";  // none | private
  std::map<std::string, double> strategy_params;
  node::ResetPolicy reset_policy = node::ResetPolicy::Continue;
  DelayPolicy delay_policy = DelayPolicy::Max;
  double p_unit = 1.0 / 256.0;
  int num_nodes = 1;
  double tx_rate = 0.0;
  double snapshot_interval = 0.0;  // 0 = duration / 20
  double slots_per_sec = 100.0;
  /// Per-root beam width of the adversary's private front.
  int adversary_beam = 64;
  /// Test hook: corrupt one node's view mid-run (negative control).
  bool corrupt_view = false;

  void validate() const;  // throws ConfigInvalid
  std::string to_json() const;
  static SimConfig from_json(const std::string& text);
};

struct EventRecord {
  double time = 0.0;
  std::uint64_t seq = 0;
  std::string kind;
  std::uint64_t a = 0;  // kind-specific payload (block hash, node id, ...)
  std::uint64_t b = 0;
};

struct Snapshot {
  double time = 0.0;
  int node = 0;
  BlockHash tip = kGenesisHash;
  std::vector<BlockHash> confirmed;
};

struct AttackOutcome {
  std::string strategy = "none";
  bool success = false;
  int reorg_depth = 0;
  double time_of_success = -1.0;
};

struct Trace {
  SimConfig config;
  std::vector<Block> blocks;  // every block, including withheld ones
  std::vector<EventRecord> events;
  std::vector<Snapshot> snapshots;
  std::vector<std::vector<BlockHash>> final_tips;  // per node: longest chain
  AttackOutcome outcome;
  int max_fork_depth = 0;
  std::vector<std::string> violations;

  const Block& block(BlockHash h) const;
  BlockTree rebuild_tree() const;

  std::string to_jsonl() const;
  static Trace from_jsonl(const std::string& text);  // throws MalformedTrace
  std::string summary_csv_row() const;
  static std::string summary_csv_header();
};

/// Deterministic single-threaded event-loop run.
Trace run(const SimConfig& config);

/// Stake of honest coins online throughout [t - sigma(c), t].
double lambda_h_c(const SimConfig& config, const CoinTable& coins, double t);

/// Coins realizing a piecewise-constant honest schedule: one unit-rate coin
/// per rate increment, earliest joiners leaving first on decrements.
CoinTable synthesize_coins(const RateSchedule& schedule, double duration);

/// Delivery delay under the adversary's scheduling power (A2): always
/// within [0, delta]. Split sends to even node ids at delta/2.
double adversary_delay(DelayPolicy policy, double delta, int to_node);

}  // namespace posat::simnet
