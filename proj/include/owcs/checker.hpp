#pragma once

#include <numeric>
#include <optional>
#include <vector>

#include "owcs/design.hpp"
#include "owcs/geometry.hpp"
#include "owcs/model.hpp"

namespace owcs {

namespace check_detail {

class DisjointSet {
 public:
  explicit DisjointSet(int n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int x) {
    while (parent_[static_cast<std::size_t>(x)] != x) {
      parent_[static_cast<std::size_t>(x)] =
          parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(x)])];
      x = parent_[static_cast<std::size_t>(x)];
    }
    return x;
  }
  // false if already joined (cycle)
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[static_cast<std::size_t>(a)] = b;
    return true;
  }

 private:
  std::vector<int> parent_;
};

// Tree-topology check: edges form a forest covering every turbine, with exactly one
// substation per component touched by an edge.
inline bool forest_ok(const EdgeMatrix& tree, const Instance& inst) {
  const int n = inst.n_nodes();
  DisjointSet ds(n + 1);
  std::vector<char> incident(static_cast<std::size_t>(n + 1), 0);
  for (const EdgeRow& r : tree) {
    if (r.a < 1 || r.a > n || r.b < 1 || r.b > n || r.a == r.b) return false;
    if (inst.is_substation(r.a) && inst.is_substation(r.b)) return false;
    if (!ds.unite(r.a, r.b)) return false;
    incident[static_cast<std::size_t>(r.a)] = 1;
    incident[static_cast<std::size_t>(r.b)] = 1;
  }
  for (NodeId t = inst.n_s() + 1; t <= n; ++t) {
    if (!incident[static_cast<std::size_t>(t)]) return false;
  }
  std::vector<int> subs_in_root(static_cast<std::size_t>(n + 1), 0);
  for (NodeId s = 1; s <= inst.n_s(); ++s) {
    subs_in_root[static_cast<std::size_t>(ds.find(s))]++;
  }
  for (NodeId t = inst.n_s() + 1; t <= n; ++t) {
    if (subs_in_root[static_cast<std::size_t>(ds.find(t))] != 1) return false;
  }
  return true;
}

// Downstream turbine counts oriented away from the substations; nullopt if
// the edge set is not a substation-rooted forest.
inline std::optional<std::vector<int>> downstream_counts(const EdgeMatrix& tree,
                                                         const Instance& inst) {
  if (!forest_ok(tree, inst)) return std::nullopt;
  const int n = inst.n_nodes();
  std::vector<std::vector<std::pair<NodeId, int>>> adj(static_cast<std::size_t>(n + 1));
  for (int i = 0; i < static_cast<int>(tree.size()); ++i) {
    const EdgeRow& r = tree[static_cast<std::size_t>(i)];
    adj[static_cast<std::size_t>(r.a)].emplace_back(r.b, i);
    adj[static_cast<std::size_t>(r.b)].emplace_back(r.a, i);
  }
  for (auto& lst : adj) std::sort(lst.begin(), lst.end());

  std::vector<int> counts(tree.size(), 0);
  std::vector<int> subtree(static_cast<std::size_t>(n + 1), 0);
  std::vector<char> visited(static_cast<std::size_t>(n + 1), 0);
  for (NodeId s = 1; s <= inst.n_s(); ++s) {
    // iterative post-order from each substation, children by ascending id
    std::vector<std::pair<NodeId, std::size_t>> stack{{s, 0}};
    std::vector<NodeId> parent(static_cast<std::size_t>(n + 1), 0);
    visited[static_cast<std::size_t>(s)] = 1;
    std::vector<NodeId> order;
    while (!stack.empty()) {
      auto& [node, it] = stack.back();
      if (it == 0) order.push_back(node);
      if (it < adj[static_cast<std::size_t>(node)].size()) {
        NodeId next = adj[static_cast<std::size_t>(node)][it].first;
        ++it;
        if (next == parent[static_cast<std::size_t>(node)]) continue;
        if (visited[static_cast<std::size_t>(next)]) return std::nullopt;
        visited[static_cast<std::size_t>(next)] = 1;
        parent[static_cast<std::size_t>(next)] = node;
        stack.emplace_back(next, 0);
      } else {
        stack.pop_back();
      }
    }
    for (auto rit = order.rbegin(); rit != order.rend(); ++rit) {
      NodeId node = *rit;
      if (inst.is_turbine(node)) subtree[static_cast<std::size_t>(node)] += 1;
      NodeId p = parent[static_cast<std::size_t>(node)];
      if (p != 0) subtree[static_cast<std::size_t>(p)] += subtree[static_cast<std::size_t>(node)];
    }
    for (int i = 0; i < static_cast<int>(tree.size()); ++i) {
      const EdgeRow& r = tree[static_cast<std::size_t>(i)];
      if (parent[static_cast<std::size_t>(r.b)] == r.a && visited[static_cast<std::size_t>(r.b)])
        counts[static_cast<std::size_t>(i)] = subtree[static_cast<std::size_t>(r.b)];
      else if (parent[static_cast<std::size_t>(r.a)] == r.b &&
               visited[static_cast<std::size_t>(r.a)])
        counts[static_cast<std::size_t>(i)] = subtree[static_cast<std::size_t>(r.a)];
    }
  }
  return counts;
}

// Topology and capacity together, without needing pre-assigned cables.
inline bool capacitated_forest_ok(const EdgeMatrix& tree, const Instance& inst) {
  auto counts = downstream_counts(tree, inst);
  if (!counts) return false;
  const int q = inst.catalog.max_capacity();
  for (int c : *counts) {
    if (c > q) return false;
  }
  return true;
}

}  // namespace check_detail

struct DesignReport {
  bool c1 = false;
  bool c2 = false;
  bool c3 = false;
  double total_cost = 0.0;
  int crossing_count = 0;
  std::vector<int> feeder_counts;  // per substation, informational
  std::optional<bool> feeder_limit_ok;

  bool feasible() const { return c1 && c2 && c3; }
};

// Recomputes everything from scratch: forest property, capacity and cable
// choices, crossings, total cost and per-substation feeder counts.
inline DesignReport check_design(const EdgeMatrix& tree, const Instance& inst,
                                 std::optional<int> max_feeders = std::nullopt) {
  DesignReport rep;
  rep.c1 = check_detail::forest_ok(tree, inst);
  rep.feeder_counts.assign(static_cast<std::size_t>(inst.n_s()), 0);
  for (const EdgeRow& r : tree) {
    if (inst.is_substation(r.a)) rep.feeder_counts[static_cast<std::size_t>(r.a - 1)]++;
    if (inst.is_substation(r.b)) rep.feeder_counts[static_cast<std::size_t>(r.b - 1)]++;
  }

  rep.c2 = false;
  if (rep.c1) {
    auto counts = check_detail::downstream_counts(tree, inst);
    if (counts) {
      rep.c2 = true;
      const int q = inst.catalog.max_capacity();
      for (int i = 0; i < static_cast<int>(tree.size()); ++i) {
        const int k = (*counts)[static_cast<std::size_t>(i)];
        const EdgeRow& r = tree[static_cast<std::size_t>(i)];
        auto cheapest = inst.catalog.cheapest_cable_for(k);
        if (k > q || !cheapest || r.cable != *cheapest || r.downstream_count != k) rep.c2 = false;
        rep.total_cost += inst.catalog.step_cost(r.length_km, k);
      }
    }
  } else {
    for (const EdgeRow& r : tree) {
      rep.total_cost += inst.catalog.step_cost(r.length_km, std::max(r.downstream_count, 0));
    }
  }

  auto crossings = all_crossings(segments_of(tree, inst));
  rep.crossing_count = static_cast<int>(crossings.size());
  rep.c3 = crossings.empty();

  if (max_feeders) {
    bool ok = true;
    for (int f : rep.feeder_counts) ok = ok && f <= *max_feeders;
    rep.feeder_limit_ok = ok;
  }
  return rep;
}

}  // namespace owcs
