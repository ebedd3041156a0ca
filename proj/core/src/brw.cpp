// SPDX-License-Identifier: Apache-2.0
#include "posat/brw.hpp"

#include <algorithm>
#include <queue>

#include "posat/rng.hpp"

namespace posat::brw {

std::vector<double> FrontTree::front_times() const {
  std::vector<double> q;
  q.reserve(levels.size());
  for (const auto& lvl : levels) q.push_back(lvl.front().time);
  return q;
}

int FrontTree::depth_at(double t) const {
  int k = 0;
  for (const auto& lvl : levels) {
    if (lvl.front().time > t) break;
    ++k;
  }
  return c * k;
}

std::vector<double> FrontTree::best_path(double t) const {
  int deepest = -1;
  for (int k = 0; k < static_cast<int>(levels.size()); ++k) {
    if (levels[static_cast<std::size_t>(k)].front().time <= t) deepest = k;
  }
  std::vector<double> path;
  if (deepest < 0) return path;
  // Nodes are stored in time order, so index 0 is the earliest at a level.
  int idx = 0;
  for (int k = deepest; k >= 0; --k) {
    const PathNode& n = levels[static_cast<std::size_t>(k)][static_cast<std::size_t>(idx)];
    path.push_back(n.time);
    idx = n.parent;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

FrontTree grow_front_tree(int c, double lambda_a, double horizon,
                          std::uint64_t seed, int beam_width,
                          int streams_per_parent) {
  Rng rng(seed);
  FrontTree tree;
  tree.c = c;

  struct Stream {
    double next = 0.0;
    int parent = -1;
  };
  struct Later {
    bool operator()(const Stream& a, const Stream& b) const {
      return a.next > b.next;
    }
  };

  // Generation 1: the root's stream starts at its first win (the epoch
  // gift covers the remaining c-1 levels). Deeper generations need c wins.
  int wins_to_first_child = 1;
  std::vector<PathNode> level = {{0.0, -1}};
  bool root_level = true;

  while (true) {
    std::priority_queue<Stream, std::vector<Stream>, Later> heap;
    const auto& parents = root_level ? level : tree.levels.back();
    for (int p = 0; p < static_cast<int>(parents.size()); ++p) {
      const double q = parents[static_cast<std::size_t>(p)].time;
      for (int s = 0; s < streams_per_parent; ++s) {
        const double first = q + sample_erlang(rng, wins_to_first_child, lambda_a);
        if (first <= horizon) heap.push({first, p});
      }
    }
    std::vector<PathNode> next;
    next.reserve(static_cast<std::size_t>(beam_width));
    while (!heap.empty() && static_cast<int>(next.size()) < beam_width) {
      Stream s = heap.top();
      heap.pop();
      next.push_back({s.next, s.parent});
      const double succ = s.next + sample_exponential(rng, lambda_a);
      if (succ <= horizon) heap.push({succ, s.parent});
    }
    if (next.empty()) break;
    tree.levels.push_back(std::move(next));
    wins_to_first_child = c;
    root_level = false;
  }
  return tree;
}

}  // namespace posat::brw
