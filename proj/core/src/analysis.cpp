// SPDX-License-Identifier: Apache-2.0
#include "posat/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace posat::analysis {

void StepFunction::add_jump(double time, double value) {
  if (!times_.empty() && time < times_.back())
    throw std::invalid_argument("StepFunction jumps must be time-ordered");
  if (!times_.empty() && time == times_.back()) {
    values_.back() = value;  // same instant: last write wins (right limit)
    return;
  }
  times_.push_back(time);
  values_.push_back(value);
}

double StepFunction::at(double t) const {
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  if (it == times_.begin()) return initial_;
  return values_[static_cast<std::size_t>(it - times_.begin()) - 1];
}

StepFunction fictitious_depth(const std::vector<double>& honest_times,
                              double delta) {
  StepFunction f(0.0);
  double level = 0.0;
  std::size_t i = 0;
  while (i < honest_times.size()) {
    const double start = honest_times[i];
    level += 1.0;
    f.add_jump(start, level);
    // Every block within delta of the level opener joins the same level.
    while (i < honest_times.size() && honest_times[i] <= start + delta) ++i;
  }
  return f;
}

bool is_loner(std::size_t j, const std::vector<double>& honest_times,
              double delta) {
  const double t = honest_times.at(j);
  for (std::size_t i = 0; i < honest_times.size(); ++i) {
    if (i == j) continue;
    if (honest_times[i] >= t - delta && honest_times[i] <= t + delta)
      return false;
  }
  return true;
}

namespace {

PartitionView build_partition(const BlockTree& tree, double delta,
                              double horizon) {
  PartitionView view;
  view.delta = delta;
  view.horizon = horizon;

  // Honest blocks (genesis included) ordered by proposal time; ties broken
  // by hash for determinism.
  std::vector<std::pair<double, BlockHash>> honest;
  for (const auto& [h, b] : tree.blocks())
    if (b.honest) honest.emplace_back(b.proposal_time, h);
  std::sort(honest.begin(), honest.end());
  std::map<BlockHash, std::size_t> honest_index;
  for (const auto& [t, h] : honest) {
    honest_index[h] = view.honest_blocks.size();
    view.honest_blocks.push_back(h);
    view.honest_times.push_back(t);
  }

  // Assign each adversary block to the nearest honest ancestor: the walk up
  // never crosses an honest block before reaching it, which is exactly the
  // partition rule.
  std::map<std::size_t, std::vector<std::pair<double, int>>> depths;
  for (const auto& [h, b] : tree.blocks()) {
    if (b.honest) continue;
    BlockHash cur = *b.parent;
    while (!tree.at(cur).honest) cur = *tree.at(cur).parent;
    const std::size_t root = honest_index.at(cur);
    view.tree_of[h] = root;
    depths[root].emplace_back(
        b.proposal_time,
        static_cast<int>(b.level) - static_cast<int>(tree.at(cur).level));
  }

  view.adversary_depth.assign(view.honest_blocks.size(), StepFunction(0.0));
  for (auto& [root, pts] : depths) {
    std::sort(pts.begin(), pts.end());
    int running = 0;
    for (const auto& [t, d] : pts) {
      if (d > running) {
        running = d;
        view.adversary_depth[root].add_jump(t, running);
      }
    }
  }

  view.fictitious = fictitious_depth(view.honest_times, delta);
  view.loner.resize(view.honest_blocks.size());
  for (std::size_t j = 0; j < view.honest_blocks.size(); ++j)
    view.loner[j] = is_loner(j, view.honest_times, delta);
  return view;
}

// E_ij evaluated at one instant (right-continuous values).
bool race_holds(const PartitionView& v, std::size_t i, double t) {
  const double rhs = v.fictitious.at(t - v.delta) -
                     v.fictitious.at(v.honest_times[i] + v.delta);
  return v.adversary_depth[i].at(t) < rhs;
}

}  // namespace

PartitionView partition_tree(const BlockTree& tree, double delta,
                             double horizon) {
  PartitionView v = build_partition(tree, delta, horizon);
  const auto naka = nakamoto_blocks(v);
  v.nakamoto.assign(v.honest_blocks.size(), false);
  for (std::size_t j : naka) v.nakamoto[j] = true;
  return v;
}

PartitionView partition(const simnet::Trace& trace) {
  return partition_tree(trace.rebuild_tree(), trace.config.delta,
                        trace.config.duration);
}

std::set<std::size_t> nakamoto_blocks(const PartitionView& view) {
  std::set<std::size_t> out;
  const std::size_t n = view.honest_blocks.size();
  for (std::size_t j = 1; j < n; ++j) {
    if (!view.loner[j]) continue;
    const double t0 = view.honest_times[j] + view.delta;
    if (t0 > view.horizon) continue;  // window empty: censored, not Nakamoto
    bool ok = true;
    for (std::size_t i = 0; i < j && ok; ++i) {
      // The right side only grows between its jumps and the left side only
      // grows at D_i jumps, so failures can only begin at the window
      // boundary or at a D_i jump.
      if (!race_holds(view, i, t0)) ok = false;
      for (double t : view.adversary_depth[i].jump_times()) {
        if (t <= t0 || t > view.horizon) continue;
        if (!race_holds(view, i, t)) {
          ok = false;
          break;
        }
      }
    }
    if (ok) out.insert(j);
  }
  return out;
}

std::set<std::size_t> nakamoto_blocks_bruteforce(const PartitionView& view) {
  // Dense evaluation: all jump times of every step function involved, their
  // delta-shifts, and interval midpoints.
  std::vector<double> grid;
  for (const auto& d : view.adversary_depth)
    for (double t : d.jump_times()) grid.push_back(t);
  for (double t : view.fictitious.jump_times()) {
    grid.push_back(t);
    grid.push_back(t + view.delta);
  }
  for (double t : view.honest_times) grid.push_back(t + view.delta);
  grid.push_back(view.horizon);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  std::vector<double> dense = grid;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    dense.push_back(0.5 * (grid[i] + grid[i + 1]));
  std::sort(dense.begin(), dense.end());

  std::set<std::size_t> out;
  const std::size_t n = view.honest_blocks.size();
  for (std::size_t j = 1; j < n; ++j) {
    if (!view.loner[j]) continue;
    const double t0 = view.honest_times[j] + view.delta;
    if (t0 > view.horizon) continue;
    bool ok = true;
    for (std::size_t i = 0; i < j && ok; ++i)
      for (double t : dense) {
        if (t < t0 || t > view.horizon) continue;
        if (!race_holds(view, i, t)) {
          ok = false;
          break;
        }
      }
    if (ok) out.insert(j);
  }
  return out;
}

LedgerVerdict check_ledger(const simnet::Trace& trace, double tau, double u,
                           int k) {
  LedgerVerdict v;
  v.tau = tau;
  v.u = u;

  // Persistence: per-node confirmed prefixes never roll back, and any two
  // nodes agree on confirmed positions once tau has elapsed.
  std::map<int, std::vector<BlockHash>> last_confirmed;
  std::vector<const simnet::Snapshot*> ordered;
  for (const auto& s : trace.snapshots) ordered.push_back(&s);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const simnet::Snapshot* a, const simnet::Snapshot* b) {
                     return a->time < b->time;
                   });
  for (const auto* s : ordered) {
    auto& prev = last_confirmed[s->node];
    if (prev.size() > s->confirmed.size() ||
        !std::equal(prev.begin(), prev.end(), s->confirmed.begin())) {
      v.persistence_ok = false;
      if (v.first_violation.empty())
        v.first_violation = "node " + std::to_string(s->node) +
                            " confirmed prefix changed at t=" +
                            std::to_string(s->time);
    }
    prev = s->confirmed;
  }
  for (std::size_t a = 0; a < ordered.size(); ++a)
    for (std::size_t b = a + 1; b < ordered.size(); ++b) {
      if (ordered[b]->time < ordered[a]->time + tau) continue;
      const auto& ca = ordered[a]->confirmed;
      const auto& cb = ordered[b]->confirmed;
      const std::size_t common = std::min(ca.size(), cb.size());
      if (!std::equal(ca.begin(), ca.begin() + common, cb.begin())) {
        v.persistence_ok = false;
        if (v.first_violation.empty())
          v.first_violation = "cross-node confirmed disagreement between t=" +
                              std::to_string(ordered[a]->time) + " and t=" +
                              std::to_string(ordered[b]->time);
      }
    }

  // Liveness: every tx seen by all honest nodes is confirmed everywhere
  // within u (only judged where the horizon allows).
  std::map<TxId, double> tx_time;
  for (const auto& e : trace.events)
    if (e.kind == "tx_arrival") tx_time[e.a] = e.time;
  std::map<BlockHash, const Block*> by_hash;
  for (const auto& b : trace.blocks) by_hash[b.hash] = &b;

  for (const auto& [tx, at] : tx_time) {
    const double deadline = at + u;
    if (deadline > trace.config.duration) continue;
    double confirmed_at = -1.0;
    for (const auto* s : ordered) {
      bool found = false;
      for (BlockHash h : s->confirmed)
        for (TxId btx : by_hash.at(h)->txs)
          if (btx == tx) found = true;
      if (found) {
        // Confirmed everywhere means: in every node's ledger at this time.
        bool everywhere = true;
        for (const auto* s2 : ordered) {
          if (s2->time != s->time) continue;
          bool f2 = false;
          for (BlockHash h : s2->confirmed)
            for (TxId btx : by_hash.at(h)->txs)
              if (btx == tx) f2 = true;
          everywhere = everywhere && f2;
        }
        if (everywhere) {
          confirmed_at = s->time;
          break;
        }
      }
    }
    if (confirmed_at < 0.0 || confirmed_at > deadline) {
      v.liveness_ok = false;
      v.worst_inclusion_delay = std::max(
          v.worst_inclusion_delay,
          (confirmed_at < 0.0 ? trace.config.duration : confirmed_at) - at);
    } else {
      v.worst_inclusion_delay =
          std::max(v.worst_inclusion_delay, confirmed_at - at);
    }
  }
  return v;
}

bool nakamoto_stability_check(const PartitionView& view,
                              const simnet::Trace& trace) {
  BlockTree tree = trace.rebuild_tree();
  auto on_chain = [&](BlockHash needle, BlockHash tip) {
    BlockHash cur = tip;
    while (true) {
      if (cur == needle) return true;
      const Block& b = tree.at(cur);
      if (!b.parent) return false;
      cur = *b.parent;
    }
  };
  for (std::size_t j = 0; j < view.nakamoto.size(); ++j) {
    if (!view.nakamoto[j]) continue;
    const BlockHash h = view.honest_blocks[j];
    const double window = view.honest_times[j] + view.delta;
    for (const auto& s : trace.snapshots) {
      if (s.time <= window) continue;
      if (!on_chain(h, s.tip)) return false;
    }
    for (const auto& chain : trace.final_tips)
      if (std::find(chain.begin(), chain.end(), h) == chain.end())
        return false;
  }
  return true;
}

std::string analysis_json(const PartitionView& view,
                          const LedgerVerdict& verdict, bool stability) {
  nlohmann::ordered_json j;
  std::vector<std::size_t> naka;
  for (std::size_t i = 0; i < view.nakamoto.size(); ++i)
    if (view.nakamoto[i]) naka.push_back(i);
  j["nakamoto_indices"] = naka;
  int loners = 0;
  for (bool b : view.loner) loners += b ? 1 : 0;
  j["loner_count"] = loners;
  std::vector<double> max_depth;
  for (const auto& d : view.adversary_depth)
    max_depth.push_back(d.jump_values().empty() ? 0.0
                                                : d.jump_values().back());
  j["per_root_max_depth"] = max_depth;
  j["horizon"] = view.horizon;
  j["persistence_ok"] = verdict.persistence_ok;
  j["first_violation"] = verdict.first_violation;
  j["liveness_ok"] = verdict.liveness_ok;
  j["worst_inclusion_delay"] = verdict.worst_inclusion_delay;
  j["tau"] = verdict.tau;
  j["u"] = verdict.u;
  j["nakamoto_stability"] = stability;
  return j.dump(2);
}

}  // namespace posat::analysis
