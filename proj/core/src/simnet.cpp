// SPDX-License-Identifier: Apache-2.0
#include "posat/simnet.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <sstream>

#include "json.hpp"

#include "posat/brw.hpp"
#include "posat/growth.hpp"
#include "posat/rng.hpp"

namespace posat::simnet {

using ordered_json = nlohmann::ordered_json;

double RateSchedule::at(double t) const {
  double r = 0.0;
  for (const auto& [start, rate] : steps) {
    if (t < start) break;
    r = rate;
  }
  return r;
}

double RateSchedule::max_rate() const {
  double r = 0.0;
  for (const auto& [start, rate] : steps) r = std::max(r, rate);
  return r;
}

double RateSchedule::min_rate() const {
  double r = steps.empty() ? 0.0 : steps.front().second;
  for (const auto& [start, rate] : steps) r = std::min(r, rate);
  return r;
}

const char* to_string(DelayPolicy p) {
  switch (p) {
    case DelayPolicy::Zero: return "zero";
    case DelayPolicy::Max: return "max";
    case DelayPolicy::Split: return "split";
  }
  return "?";
}

DelayPolicy delay_policy_from_string(const std::string& s) {
  if (s == "zero") return DelayPolicy::Zero;
  if (s == "max") return DelayPolicy::Max;
  if (s == "split") return DelayPolicy::Split;
  throw ConfigInvalid("unknown delay policy: " + s);
}

void SimConfig::validate() const {
  if (c < 1) throw ConfigInvalid("c must be >= 1");
  if (delta < 0.0) throw ConfigInvalid("delta must be >= 0");
  if (k_confirm < 1) throw ConfigInvalid("k_confirm must be >= 1");
  if (duration <= 0.0) throw ConfigInvalid("duration must be > 0");
  if (num_nodes < 1) throw ConfigInvalid("num_nodes must be >= 1");
  if (honest_schedule.steps.empty() || honest_schedule.steps[0].first != 0.0)
    throw ConfigInvalid("honest_schedule must start at t=0");
  if (adversary_schedule.steps.empty() ||
      adversary_schedule.steps[0].first != 0.0)
    throw ConfigInvalid("adversary_schedule must start at t=0");
  if (honest_schedule.min_rate() <= 0.0)
    throw ConfigInvalid("honest rate must stay positive");
  const double lmin = lambda_min > 0.0 ? lambda_min : honest_schedule.min_rate();
  const double lmax = lambda_max > 0.0 ? lambda_max : honest_schedule.max_rate();
  for (const auto& [start, rate] : honest_schedule.steps)
    if (rate < lmin - 1e-12 || rate > lmax + 1e-12)
      throw ConfigInvalid("honest rate outside [lambda_min, lambda_max]");
  if (kappa <= 0.0) throw ConfigInvalid("kappa must be > 0");
  if (p_unit <= 0.0 || p_unit > 1.0) throw ConfigInvalid("p_unit in (0,1]");
  if (adversary_strategy != "none" && adversary_strategy != "private")
    throw ConfigInvalid("unknown adversary_strategy: " + adversary_strategy);
  if (adversary_beam < 1) throw ConfigInvalid("adversary_beam must be >= 1");
  if (slots_per_sec <= 0.0) throw ConfigInvalid("slots_per_sec must be > 0");
}

namespace {

ordered_json schedule_to_json(const RateSchedule& s) {
  ordered_json arr = ordered_json::array();
  for (const auto& [start, rate] : s.steps) arr.push_back({start, rate});
  return arr;
}

RateSchedule schedule_from_json(const ordered_json& j) {
  RateSchedule s;
  s.steps.clear();
  for (const auto& e : j)
    s.steps.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
  return s;
}

}  // namespace

std::string SimConfig::to_json() const {
  ordered_json j;
  j["c"] = c;
  j["delta"] = delta;
  j["k_confirm"] = k_confirm;
  j["duration"] = duration;
  j["seed"] = seed;
  j["honest_schedule"] = schedule_to_json(honest_schedule);
  j["adversary_schedule"] = schedule_to_json(adversary_schedule);
  j["lambda_min"] = lambda_min;
  j["lambda_max"] = lambda_max;
  j["kappa"] = kappa;
  j["adversary_strategy"] = adversary_strategy;
  j["strategy_params"] = strategy_params;
  j["reset_policy"] =
      reset_policy == node::ResetPolicy::Continue ? "continue" : "restart";
  j["delay_policy"] = to_string(delay_policy);
  j["p_unit"] = p_unit;
  j["num_nodes"] = num_nodes;
  j["tx_rate"] = tx_rate;
  j["snapshot_interval"] = snapshot_interval;
  j["slots_per_sec"] = slots_per_sec;
  j["adversary_beam"] = adversary_beam;
  j["corrupt_view"] = corrupt_view;
  return j.dump();
}

SimConfig SimConfig::from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigInvalid(std::string("config parse error: ") + e.what());
  }
  SimConfig c;
  try {
    if (j.contains("c")) c.c = j["c"].get<int>();
    if (j.contains("delta")) c.delta = j["delta"].get<double>();
    if (j.contains("k_confirm")) c.k_confirm = j["k_confirm"].get<int>();
    if (j.contains("duration")) c.duration = j["duration"].get<double>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("honest_schedule"))
      c.honest_schedule = schedule_from_json(j["honest_schedule"]);
    if (j.contains("adversary_schedule"))
      c.adversary_schedule = schedule_from_json(j["adversary_schedule"]);
    if (j.contains("lambda_min")) c.lambda_min = j["lambda_min"].get<double>();
    if (j.contains("lambda_max")) c.lambda_max = j["lambda_max"].get<double>();
    if (j.contains("kappa")) c.kappa = j["kappa"].get<double>();
    if (j.contains("adversary_strategy"))
      c.adversary_strategy = j["adversary_strategy"].get<std::string>();
    if (j.contains("strategy_params"))
      c.strategy_params =
          j["strategy_params"].get<std::map<std::string, double>>();
    if (j.contains("reset_policy"))
      c.reset_policy = j["reset_policy"].get<std::string>() == "restart"
                           ? node::ResetPolicy::Restart
                           : node::ResetPolicy::Continue;
    if (j.contains("delay_policy"))
      c.delay_policy =
          delay_policy_from_string(j["delay_policy"].get<std::string>());
    if (j.contains("p_unit")) c.p_unit = j["p_unit"].get<double>();
    if (j.contains("num_nodes")) c.num_nodes = j["num_nodes"].get<int>();
    if (j.contains("tx_rate")) c.tx_rate = j["tx_rate"].get<double>();
    if (j.contains("snapshot_interval"))
      c.snapshot_interval = j["snapshot_interval"].get<double>();
    if (j.contains("slots_per_sec"))
      c.slots_per_sec = j["slots_per_sec"].get<double>();
    if (j.contains("adversary_beam"))
      c.adversary_beam = j["adversary_beam"].get<int>();
    if (j.contains("corrupt_view"))
      c.corrupt_view = j["corrupt_view"].get<bool>();
  } catch (const ConfigInvalid&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigInvalid(std::string("config field error: ") + e.what());
  }
  c.validate();
  return c;
}

const Block& Trace::block(BlockHash h) const {
  for (const Block& b : blocks)
    if (b.hash == h) return b;
  throw MalformedTrace("block not in trace: " + std::to_string(h));
}

BlockTree Trace::rebuild_tree() const {
  BlockTree tree;
  // Blocks are recorded in creation order, so parents precede children.
  for (const Block& b : blocks)
    if (b.hash != kGenesisHash) tree.insert(b);
  return tree;
}

namespace {

ordered_json block_to_json(const Block& b) {
  ordered_json j;
  j["type"] = "block";
  j["hash"] = b.hash;
  if (b.parent)
    j["parent"] = *b.parent;
  else
    j["parent"] = nullptr;
  j["level"] = b.level;
  j["slot"] = b.slot;
  j["rand_source"] = b.rand_source;
  j["rand_iter"] = b.rand_iter;
  j["coin"] = b.coin;
  j["honest"] = b.honest;
  j["proposal_time"] = b.proposal_time;
  j["reveal_time"] = b.reveal_time;
  j["txs"] = b.txs;
  return j;
}

Block block_from_json(const ordered_json& j) {
  Block b;
  b.hash = j.at("hash").get<BlockHash>();
  if (!j.at("parent").is_null()) b.parent = j.at("parent").get<BlockHash>();
  b.level = j.at("level").get<std::uint32_t>();
  b.slot = j.at("slot").get<std::uint64_t>();
  b.rand_source = j.at("rand_source").get<std::uint64_t>();
  b.rand_iter = j.at("rand_iter").get<std::uint64_t>();
  b.coin = j.at("coin").get<CoinId>();
  b.honest = j.at("honest").get<bool>();
  b.proposal_time = j.at("proposal_time").get<double>();
  b.reveal_time = j.at("reveal_time").get<double>();
  b.txs = j.at("txs").get<std::vector<TxId>>();
  return b;
}

}  // namespace

std::string Trace::to_jsonl() const {
  std::ostringstream out;
  {
    ordered_json j = ordered_json::parse(config.to_json());
    ordered_json line;
    line["type"] = "config";
    line["config"] = j;
    out << line.dump() << '\n';
  }
  for (const Block& b : blocks) out << block_to_json(b).dump() << '\n';
  for (const EventRecord& e : events) {
    ordered_json j;
    j["type"] = "event";
    j["time"] = e.time;
    j["seq"] = e.seq;
    j["kind"] = e.kind;
    j["a"] = e.a;
    j["b"] = e.b;
    out << j.dump() << '\n';
  }
  for (const Snapshot& s : snapshots) {
    ordered_json j;
    j["type"] = "snapshot";
    j["time"] = s.time;
    j["node"] = s.node;
    j["tip"] = s.tip;
    j["confirmed"] = s.confirmed;
    out << j.dump() << '\n';
  }
  {
    ordered_json j;
    j["type"] = "outcome";
    j["strategy"] = outcome.strategy;
    j["success"] = outcome.success;
    j["reorg_depth"] = outcome.reorg_depth;
    j["time_of_success"] = outcome.time_of_success;
    j["max_fork_depth"] = max_fork_depth;
    j["violations"] = violations;
    j["final_tips"] = final_tips;
    out << j.dump() << '\n';
  }
  return out.str();
}

Trace Trace::from_jsonl(const std::string& text) {
  Trace t;
  std::istringstream in(text);
  std::string line;
  bool have_config = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ordered_json j;
    try {
      j = ordered_json::parse(line);
    } catch (const std::exception& e) {
      throw MalformedTrace(std::string("bad trace line: ") + e.what());
    }
    const std::string type = j.value("type", "");
    if (type == "config") {
      t.config = SimConfig::from_json(j.at("config").dump());
      have_config = true;
    } else if (type == "block") {
      t.blocks.push_back(block_from_json(j));
    } else if (type == "event") {
      EventRecord e;
      e.time = j.at("time").get<double>();
      e.seq = j.at("seq").get<std::uint64_t>();
      e.kind = j.at("kind").get<std::string>();
      e.a = j.at("a").get<std::uint64_t>();
      e.b = j.at("b").get<std::uint64_t>();
      t.events.push_back(e);
    } else if (type == "snapshot") {
      Snapshot s;
      s.time = j.at("time").get<double>();
      s.node = j.at("node").get<int>();
      s.tip = j.at("tip").get<BlockHash>();
      s.confirmed = j.at("confirmed").get<std::vector<BlockHash>>();
      t.snapshots.push_back(s);
    } else if (type == "outcome") {
      t.outcome.strategy = j.at("strategy").get<std::string>();
      t.outcome.success = j.at("success").get<bool>();
      t.outcome.reorg_depth = j.at("reorg_depth").get<int>();
      t.outcome.time_of_success = j.at("time_of_success").get<double>();
      t.max_fork_depth = j.at("max_fork_depth").get<int>();
      t.violations = j.at("violations").get<std::vector<std::string>>();
      t.final_tips =
          j.at("final_tips").get<std::vector<std::vector<BlockHash>>>();
    } else {
      throw MalformedTrace("unknown trace line type: " + type);
    }
  }
  if (!have_config) throw MalformedTrace("trace has no config line");
  return t;
}

std::string Trace::summary_csv_header() {
  return "seed,chain_length,max_fork_depth,violations,strategy,success,"
         "reorg_depth,time_of_success";
}

std::string Trace::summary_csv_row() const {
  std::ostringstream out;
  std::size_t chain_length = final_tips.empty() ? 0 : final_tips[0].size() - 1;
  out << config.seed << ',' << chain_length << ',' << max_fork_depth << ','
      << violations.size() << ',' << outcome.strategy << ','
      << (outcome.success ? 1 : 0) << ',' << outcome.reorg_depth << ','
      << outcome.time_of_success;
  return out.str();
}

CoinTable synthesize_coins(const RateSchedule& schedule, double duration) {
  CoinTable coins;
  CoinId next_id = 0;
  // Stack of currently-online coins; decrements retire the newest first so
  // the longest-online coins persist (they carry lambda_h_c).
  std::vector<CoinId> online;
  double current = 0.0;
  for (const auto& [start, rate] : schedule.steps) {
    while (rate > current + 1e-12) {
      Coin c;
      c.id = next_id++;
      c.stake = 1.0;
      c.honest = true;
      c.online_intervals = {{start, duration}};
      // Fractional remainder becomes one smaller coin.
      if (rate - current < 1.0) c.stake = rate - current;
      current += c.stake;
      online.push_back(c.id);
      coins[c.id] = c;
    }
    while (current > rate + 1e-12 && !online.empty()) {
      Coin& c = coins[online.back()];
      const double excess = current - rate;
      if (c.stake <= excess + 1e-12) {
        c.online_intervals.back().second = start;
        current -= c.stake;
        online.pop_back();
      } else {
        // Split the coin: the leaving share becomes its own coin.
        Coin leaver;
        leaver.id = next_id++;
        leaver.stake = excess;
        leaver.honest = true;
        leaver.online_intervals = {{c.online_intervals.back().first, start}};
        coins[leaver.id] = leaver;
        c.stake -= excess;
        current = rate;
      }
    }
  }
  return coins;
}

double lambda_h_c(const SimConfig& config, const CoinTable& coins, double t) {
  const double sigma = growth::sigma_c(
      config.c, config.delta, config.kappa,
      config.lambda_min > 0.0 ? config.lambda_min
                              : config.honest_schedule.min_rate());
  const double t0 = std::max(0.0, t - sigma);
  double sum = 0.0;
  for (const auto& [id, coin] : coins)
    if (coin.honest && coin.online_over(t0, t)) sum += coin.stake;
  return sum;
}

double adversary_delay(DelayPolicy policy, double delta, int to_node) {
  switch (policy) {
    case DelayPolicy::Zero: return 0.0;
    case DelayPolicy::Max: return delta;
    case DelayPolicy::Split: return to_node % 2 == 0 ? delta / 2.0 : delta;
  }
  return delta;
}

namespace {

enum class EvKind { HonestWin, Deliver, Snapshot, AdversaryCheck, TxArrival,
                    CorruptView, End };

struct QueuedEvent {
  double time = 0.0;
  std::uint64_t seq = 0;
  EvKind kind = EvKind::End;
  BlockHash block = 0;
  int node = -1;
};

struct LaterEvent {
  bool operator()(const QueuedEvent& a, const QueuedEvent& b) const {
    if (a.time != b.time) return a.time > b.time;
    return a.seq > b.seq;
  }
};

const char* kind_name(EvKind k) {
  switch (k) {
    case EvKind::HonestWin: return "honest_win";
    case EvKind::Deliver: return "deliver";
    case EvKind::Snapshot: return "snapshot";
    case EvKind::AdversaryCheck: return "adversary_check";
    case EvKind::TxArrival: return "tx_arrival";
    case EvKind::CorruptView: return "corrupt_view";
    case EvKind::End: return "end";
  }
  return "?";
}

struct PrivateRoot {
  BlockHash root = kGenesisHash;
  std::uint32_t root_level = 0;
  double root_time = 0.0;
  double tree_start = 0.0;  // >= root_time if the adversary rate starts later
  brw::FrontTree front;
  bool revealed = false;
  bool dead = false;
};

struct Sim {
  const SimConfig& cfg;
  Rng win_rng;
  Rng pick_rng;
  Rng val_rng;
  Rng tx_rng;

  BlockTree ground;  // every block ever created, withheld included
  std::vector<node::NodeState> nodes;
  node::Params params;
  CoinTable coins;
  Trace trace;

  std::priority_queue<QueuedEvent, std::vector<QueuedEvent>, LaterEvent> queue;
  std::uint64_t next_seq = 0;
  BlockHash next_hash = 1;
  TxId next_tx = 1;

  std::vector<PrivateRoot> roots;
  std::map<std::uint32_t, BlockHash> confirmed_at_level;  // persistence monitor
  std::map<TxId, double> tx_arrival_time;
  bool stop_attack = false;

  explicit Sim(const SimConfig& config)
      : cfg(config),
        win_rng(make_rng(config.seed, rng_tag::coin_wins)),
        pick_rng(make_rng(config.seed, rng_tag::coin_wins, 1)),
        val_rng(make_rng(config.seed, rng_tag::rand_value)),
        tx_rng(make_rng(config.seed, rng_tag::tx_arrivals)) {}

  void push(double time, EvKind kind, BlockHash block = 0, int node = -1) {
    queue.push({time, next_seq++, kind, block, node});
  }

  void record_event(const QueuedEvent& e) {
    trace.events.push_back({e.time, e.seq, kind_name(e.kind), e.block,
                            static_cast<std::uint64_t>(e.node + 1)});
  }

  std::uint64_t fresh_value() { return val_rng(); }

  std::uint64_t slot_for(double t, std::uint64_t parent_slot) const {
    const std::uint64_t by_time =
        static_cast<std::uint64_t>(std::floor(t * cfg.slots_per_sec));
    return std::max(parent_slot + 1, by_time);
  }

  void schedule_honest_wins() {
    // Thinning against the schedule's max rate keeps one candidate stream.
    const double env = cfg.honest_schedule.max_rate();
    double t = 0.0;
    while (true) {
      t += sample_exponential(win_rng, env);
      if (t > cfg.duration) break;
      if (uniform01(win_rng) * env <= cfg.honest_schedule.at(t))
        push(t, EvKind::HonestWin);
    }
  }

  void schedule_txs() {
    if (cfg.tx_rate <= 0.0) return;
    double t = 0.0;
    while (true) {
      t += sample_exponential(tx_rng, cfg.tx_rate);
      if (t > cfg.duration) break;
      push(t, EvKind::TxArrival);
    }
  }

  void schedule_snapshots() {
    const double step = cfg.snapshot_interval > 0.0 ? cfg.snapshot_interval
                                                    : cfg.duration / 20.0;
    for (double t = step; t < cfg.duration; t += step)
      push(t, EvKind::Snapshot);
    push(cfg.duration, EvKind::Snapshot);
  }

  double adversary_rate() const { return cfg.adversary_schedule.max_rate(); }

  double adversary_start() const {
    for (const auto& [start, rate] : cfg.adversary_schedule.steps)
      if (rate > 0.0) return start;
    return cfg.duration;
  }

  void add_private_root(const Block& b) {
    constexpr std::size_t kMaxLiveRoots = 8;
    std::size_t live = 0;
    for (const PrivateRoot& r : roots)
      if (!r.dead && !r.revealed) ++live;
    if (live >= kMaxLiveRoots) return;

    PrivateRoot r;
    r.root = b.hash;
    r.root_level = b.level;
    r.root_time = b.proposal_time;
    r.tree_start = std::max(b.proposal_time, adversary_start());
    const double horizon = cfg.duration - r.tree_start;
    if (horizon <= 0.0) return;
    r.front = brw::grow_front_tree(
        cfg.c, adversary_rate(), horizon,
        mix_seed(cfg.seed, rng_tag::adversary_tree, b.hash),
        cfg.adversary_beam);
    for (const auto& lvl : r.front.levels)
      push(r.tree_start + lvl.front().time, EvKind::AdversaryCheck, b.hash);
    roots.push_back(std::move(r));
  }

  std::uint32_t best_honest_level() const {
    std::uint32_t best = 0;
    for (const auto& st : nodes)
      best = std::max(best, ground.at(st.parent_blk).level);
    return best;
  }

  void check_reveals(double t) {
    if (stop_attack) return;
    const std::uint32_t chain_level = best_honest_level();
    for (PrivateRoot& r : roots) {
      if (r.dead || r.revealed) continue;
      const int gain = static_cast<int>(chain_level) -
                       static_cast<int>(r.root_level);
      const int depth = r.front.depth_at(t - r.tree_start);
      // Hopeless roots stop consuming checks.
      if (gain - depth > 2 * cfg.k_confirm + 16) {
        r.dead = true;
        continue;
      }
      if (depth > gain && gain > cfg.k_confirm) reveal(r, t);
    }
  }

  void reveal(PrivateRoot& r, double t) {
    r.revealed = true;
    stop_attack = true;  // one decisive reveal per run
    const auto path = r.front.best_path(t - r.tree_start);
    BlockHash parent = r.root;
    std::uint32_t level = r.root_level;
    std::uint64_t parent_slot = ground.at(r.root).slot;
    std::vector<BlockHash> revealed;
    for (double rel : path) {
      const double when = r.tree_start + rel;
      // One superblock win carries the epoch: all c levels at the win time.
      for (int i = 0; i < cfg.c; ++i) {
        Block b;
        b.hash = next_hash++;
        b.parent = parent;
        b.level = ++level;
        b.slot = slot_for(when, parent_slot);
        b.rand_source = fresh_value();
        b.rand_iter = 1;
        b.coin = 0;  // adversary coin id convention
        b.honest = false;
        b.proposal_time = when;
        b.reveal_time = t;
        ground.insert(b);
        trace.blocks.push_back(b);
        parent = b.hash;
        parent_slot = b.slot;
        revealed.push_back(b.hash);
      }
    }
    trace.events.push_back(
        {t, next_seq++, "adversary_reveal", r.root, revealed.size()});
    for (int n = 0; n < cfg.num_nodes; ++n) {
      const double d = adversary_delay(cfg.delay_policy, cfg.delta, n);
      for (BlockHash h : revealed) push(t + d, EvKind::Deliver, h, n);
    }
  }

  void deliver(const QueuedEvent& e) {
    const Block& b = ground.at(e.block);
    auto res = node::on_receive_block(nodes[static_cast<std::size_t>(e.node)],
                                      b, e.time, params);
    (void)res;
  }

  void honest_win(const QueuedEvent& e) {
    // M2: the total honest rate is realized as one process; each win lands
    // on a uniformly chosen node and extends that node's own tip.
    const int n = static_cast<int>(pick_rng() %
                                   static_cast<std::uint64_t>(cfg.num_nodes));
    node::NodeState& st = nodes[static_cast<std::size_t>(n)];
    if (!st.participate) return;
    node::WinResult w;
    w.output = fresh_value();
    w.parent_at_start = st.parent_blk;
    w.slot_final = slot_for(e.time, ground.at(st.parent_blk).slot);
    w.rand_iter = 1;
    Coin coin;
    coin.id = static_cast<CoinId>(n + 1);
    const BlockHash h = next_hash++;
    Block b = node::pos_leader_election_win(st, coin, w, e.time, h, params);
    ground.insert(b);
    trace.blocks.push_back(b);
    record_event({e.time, e.seq, EvKind::HonestWin, h, n});
    for (int other = 0; other < cfg.num_nodes; ++other) {
      if (other == n) continue;
      push(e.time + adversary_delay(cfg.delay_policy, cfg.delta, other),
           EvKind::Deliver, h, other);
    }
    if (cfg.adversary_strategy == "private" && !stop_attack)
      add_private_root(b);
    monitor_node(n, e.time);
    check_reveals(e.time);
  }

  void snapshot(double t) {
    for (int n = 0; n < cfg.num_nodes; ++n) {
      node::NodeState& st = nodes[static_cast<std::size_t>(n)];
      Snapshot s;
      s.time = t;
      s.node = n;
      s.tip = longest_chain_tip(st.view, st.parent_blk);
      s.confirmed = node::confirm_ledger(st.view, s.tip, cfg.k_confirm);
      check_persistence(s.confirmed, t);
      trace.snapshots.push_back(std::move(s));
    }
  }

  // Event-driven persistence monitor: recompute the node's confirmed prefix
  // whenever its view changes, so reorgs between snapshots are not missed.
  void monitor_node(int n, double t) {
    node::NodeState& st = nodes[static_cast<std::size_t>(n)];
    const BlockHash tip = longest_chain_tip(st.view, st.parent_blk);
    check_persistence(node::confirm_ledger(st.view, tip, cfg.k_confirm), t);
  }

  void check_persistence(const std::vector<BlockHash>& confirmed, double t) {
    for (std::size_t i = 0; i < confirmed.size(); ++i) {
      const std::uint32_t level = static_cast<std::uint32_t>(i);
      auto it = confirmed_at_level.find(level);
      if (it == confirmed_at_level.end()) {
        confirmed_at_level[level] = confirmed[i];
      } else if (it->second != confirmed[i]) {
        if (!trace.outcome.success) {
          trace.outcome.success = true;
          trace.outcome.time_of_success = t;
          trace.outcome.reorg_depth =
              static_cast<int>(confirmed_at_level.size() - i);
        }
        trace.violations.push_back(
            "persistence: level " + std::to_string(level) +
            " confirmed block changed at t=" + std::to_string(t));
        confirmed_at_level[level] = confirmed[i];
      }
    }
  }

  void check_delta_synchrony() {
    for (const Block& b : trace.blocks) {
      if (b.reveal_time + cfg.delta > cfg.duration) continue;
      for (const auto& st : nodes)
        if (!st.view.contains(b.hash)) {
          trace.violations.push_back("delta-synchrony: block " +
                                     std::to_string(b.hash) +
                                     " missing from a view");
          return;
        }
    }
  }

  void compute_fork_depth() {
    std::set<BlockHash> main(trace.final_tips[0].begin(),
                             trace.final_tips[0].end());
    int worst = 0;
    for (const Block& b : trace.blocks) {
      if (main.count(b.hash)) continue;
      BlockHash cur = b.hash;
      while (!main.count(cur)) cur = *ground.at(cur).parent;
      worst = std::max(worst, static_cast<int>(b.level - ground.at(cur).level));
    }
    trace.max_fork_depth = worst;
  }

  Trace run() {
    cfg.validate();
    trace.config = cfg;
    trace.outcome.strategy = cfg.adversary_strategy;
    coins = synthesize_coins(cfg.honest_schedule, cfg.duration);
    params.c = cfg.c;
    params.k_confirm = cfg.k_confirm;
    params.coins = nullptr;  // coin table checked at the simnet layer
    params.reset_policy = cfg.reset_policy;

    BlockTree genesis_view;
    trace.blocks.push_back(genesis_view.at(kGenesisHash));
    for (int n = 0; n < cfg.num_nodes; ++n)
      nodes.push_back(node::initialize(n, genesis_view, 0.0, params));

    if (cfg.adversary_strategy == "private")
      add_private_root(ground.at(kGenesisHash));

    schedule_honest_wins();
    schedule_txs();
    schedule_snapshots();
    if (cfg.corrupt_view) push(cfg.duration / 2.0, EvKind::CorruptView);

    while (!queue.empty()) {
      QueuedEvent e = queue.top();
      queue.pop();
      if (e.time > cfg.duration + 1e-12) break;
      switch (e.kind) {
        case EvKind::HonestWin:
          honest_win(e);
          break;
        case EvKind::Deliver:
          deliver(e);
          record_event(e);
          monitor_node(e.node, e.time);
          check_reveals(e.time);
          break;
        case EvKind::Snapshot:
          snapshot(e.time);
          break;
        case EvKind::AdversaryCheck:
          check_reveals(e.time);
          break;
        case EvKind::TxArrival: {
          const TxId tx = next_tx++;
          tx_arrival_time[tx] = e.time;
          for (auto& st : nodes) st.uncnf_tx.insert(tx);
          record_event({e.time, e.seq, EvKind::TxArrival, tx, -1});
          break;
        }
        case EvKind::CorruptView:
          // Negative-control hook: roll node 0 back to genesis so the
          // analyzer's hard assertions must trip.
          nodes[0].parent_blk = kGenesisHash;
          trace.violations.push_back("corrupt_view injected");
          record_event(e);
          break;
        case EvKind::End:
          break;
      }
    }

    for (auto& st : nodes) {
      const BlockHash tip = longest_chain_tip(st.view, st.parent_blk);
      trace.final_tips.push_back(longest_chain(st.view, tip));
    }
    check_delta_synchrony();
    compute_fork_depth();
    return std::move(trace);
  }
};

}  // namespace

Trace run(const SimConfig& config) {
  Sim sim(config);
  return sim.run();
}

}  // namespace posat::simnet
