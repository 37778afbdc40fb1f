#pragma once

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "owcs/geometry.hpp"
#include "owcs/model.hpp"

namespace owcs {

struct ArcMissing : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Arc {
  NodeId tail = 0;
  NodeId head = 0;
  double length_km = 0.0;
};

struct UndirectedEdge {
  NodeId u = 0;  // u < v
  NodeId v = 0;
  double length_km = 0.0;
};

// Truncated directed candidate graph: each turbine points at its
// `neighbor_truncation` nearest turbines plus every substation. No arcs leave
// substations and none run between them.
struct CandidateGraph {
  int n_s = 0;
  int n_t = 0;
  std::vector<Arc> arcs;
  std::vector<std::vector<int>> out_arcs;  // by node id, size n_nodes + 1
  std::vector<std::vector<int>> in_arcs;
  // Undirected view (union-symmetrized turbine pairs + turbine-substation
  // pairs), sorted lexicographically by (u, v).
  std::vector<UndirectedEdge> edges;
  std::vector<std::vector<int>> undirected_adj;  // by node id -> edge indices
  bool truncation_clamped = false;

  int n_nodes() const { return n_s + n_t; }

  bool has_pair(NodeId a, NodeId b) const {
    if (a > b) std::swap(a, b);
    return pair_index_.count(key(a, b)) != 0;
  }

  int edge_index(NodeId a, NodeId b) const {
    if (a > b) std::swap(a, b);
    auto it = pair_index_.find(key(a, b));
    return it == pair_index_.end() ? -1 : it->second;
  }

  static std::int64_t key(NodeId a, NodeId b) {
    return static_cast<std::int64_t>(a) * 1000000 + b;
  }

  std::unordered_map<std::int64_t, int> pair_index_;  // (min,max) -> edge index
};

inline CandidateGraph build_candidate_graph(const Instance& inst) {
  inst.validate();
  CandidateGraph g;
  g.n_s = inst.n_s();
  g.n_t = inst.n_t();
  int trunc = inst.neighbor_truncation;
  if (trunc > g.n_t - 1) {
    trunc = std::max(0, g.n_t - 1);
    g.truncation_clamped = true;
  }

  const int n = g.n_nodes();
  g.out_arcs.assign(static_cast<std::size_t>(n + 1), {});
  g.in_arcs.assign(static_cast<std::size_t>(n + 1), {});

  for (NodeId t = g.n_s + 1; t <= n; ++t) {
    // nearest turbines, ties by lower id
    std::vector<std::pair<double, NodeId>> cand;
    for (NodeId u = g.n_s + 1; u <= n; ++u) {
      if (u == t) continue;
      cand.emplace_back(distance(inst.point_of(t), inst.point_of(u)), u);
    }
    std::sort(cand.begin(), cand.end());
    for (int i = 0; i < trunc && i < static_cast<int>(cand.size()); ++i) {
      const auto& [d, u] = cand[static_cast<std::size_t>(i)];
      int idx = static_cast<int>(g.arcs.size());
      g.arcs.push_back({t, u, d / 1000.0});
      g.out_arcs[static_cast<std::size_t>(t)].push_back(idx);
      g.in_arcs[static_cast<std::size_t>(u)].push_back(idx);
    }
    for (NodeId s = 1; s <= g.n_s; ++s) {
      int idx = static_cast<int>(g.arcs.size());
      g.arcs.push_back({t, s, distance(inst.point_of(t), inst.point_of(s)) / 1000.0});
      g.out_arcs[static_cast<std::size_t>(t)].push_back(idx);
      g.in_arcs[static_cast<std::size_t>(s)].push_back(idx);
    }
  }

  // Undirected view: a pair exists if either direction does.
  std::vector<UndirectedEdge> edges;
  std::unordered_map<std::int64_t, bool> seen;
  for (const Arc& a : g.arcs) {
    NodeId u = std::min(a.tail, a.head), v = std::max(a.tail, a.head);
    auto k = CandidateGraph::key(u, v);
    if (!seen.emplace(k, true).second) continue;
    edges.push_back({u, v, a.length_km});
  }
  std::sort(edges.begin(), edges.end(), [](const UndirectedEdge& a, const UndirectedEdge& b) {
    if (a.u != b.u) return a.u < b.u;
    return a.v < b.v;
  });
  g.edges = std::move(edges);
  g.undirected_adj.assign(static_cast<std::size_t>(n + 1), {});
  for (int i = 0; i < static_cast<int>(g.edges.size()); ++i) {
    const UndirectedEdge& e = g.edges[static_cast<std::size_t>(i)];
    g.pair_index_.emplace(CandidateGraph::key(e.u, e.v), i);
    g.undirected_adj[static_cast<std::size_t>(e.u)].push_back(i);
    g.undirected_adj[static_cast<std::size_t>(e.v)].push_back(i);
  }
  return g;
}

// One arc per undirected adjacency: lower id -> higher id between turbines,
// turbine -> substation for mixed pairs. Signed flows live on these arcs; the
// inverse set is implied.
struct ForwardArc {
  NodeId tail = 0;
  NodeId head = 0;
  double length_km = 0.0;
};

struct ForwardArcSet {
  std::vector<ForwardArc> arcs;
  std::unordered_map<std::int64_t, int> index_;  // (min,max) -> arc index

  int size() const { return static_cast<int>(arcs.size()); }

  // Index of the forward arc covering pair {a, b}, or -1.
  int index_of(NodeId a, NodeId b) const {
    if (a > b) std::swap(a, b);
    auto it = index_.find(CandidateGraph::key(a, b));
    return it == index_.end() ? -1 : it->second;
  }

  // +1 if (a, b) is the canonical direction, -1 if it is the inverse.
  int direction(int arc_index, NodeId a, NodeId b) const {
    const ForwardArc& fa = arcs[static_cast<std::size_t>(arc_index)];
    if (fa.tail == a && fa.head == b) return 1;
    if (fa.tail == b && fa.head == a) return -1;
    throw std::invalid_argument("arc does not match node pair");
  }
};

inline ForwardArcSet forward_arcs(const CandidateGraph& g) {
  ForwardArcSet fas;
  for (const UndirectedEdge& e : g.edges) {
    NodeId tail = e.u, head = e.v;
    if (tail <= g.n_s) std::swap(tail, head);  // turbine -> substation
    int idx = static_cast<int>(fas.arcs.size());
    fas.arcs.push_back({tail, head, e.length_km});
    fas.index_.emplace(CandidateGraph::key(std::min(tail, head), std::max(tail, head)), idx);
  }
  return fas;
}

}  // namespace owcs
