#pragma once

#include <algorithm>
#include <vector>

#include "owcs/candidate_graph.hpp"
#include "owcs/checker.hpp"
#include "owcs/construct.hpp"
#include "owcs/design.hpp"

namespace owcs {

// Row of the crossing table: an edge index plus every edge crossing it.
struct CrossingRow {
  int edge = -1;
  std::vector<int> crossers;
};

inline std::vector<CrossingRow> crossing_table(const EdgeMatrix& tree, const Instance& inst) {
  auto pairs = all_crossings(segments_of(tree, inst));
  std::vector<std::vector<int>> per_edge(tree.size());
  for (auto [i, j] : pairs) {
    per_edge[static_cast<std::size_t>(i)].push_back(j);
    per_edge[static_cast<std::size_t>(j)].push_back(i);
  }
  std::vector<CrossingRow> rows;
  for (int e = 0; e < static_cast<int>(tree.size()); ++e) {
    if (!per_edge[static_cast<std::size_t>(e)].empty()) {
      rows.push_back({e, per_edge[static_cast<std::size_t>(e)]});
    }
  }
  // most crossings first; ties by edge index for determinism
  std::stable_sort(rows.begin(), rows.end(), [](const CrossingRow& a, const CrossingRow& b) {
    return a.crossers.size() > b.crossers.size();
  });
  return rows;
}

// Candidate replacement edges for a detached subtree: candidate-graph edges
// with exactly one endpoint among the orphans that cross nothing in the
// pruned tree, shortest first.
inline std::vector<UndirectedEdge> candidate_edges_for(const std::vector<char>& orphan,
                                                       const EdgeMatrix& pruned,
                                                       const CandidateGraph& g,
                                                       const Instance& inst) {
  auto pruned_segs = segments_of(pruned, inst);
  std::vector<UndirectedEdge> cands;
  for (const UndirectedEdge& e : g.edges) {
    const bool ou = orphan[static_cast<std::size_t>(e.u)];
    const bool ov = orphan[static_cast<std::size_t>(e.v)];
    if (ou == ov) continue;
    Segment seg{inst.point_of(e.u), inst.point_of(e.v), e.u, e.v};
    bool crosses = false;
    for (const Segment& ps : pruned_segs) {
      if (segments_cross(seg, ps)) {
        crosses = true;
        break;
      }
    }
    if (!crosses) cands.push_back(e);
  }
  std::sort(cands.begin(), cands.end(), [](const UndirectedEdge& a, const UndirectedEdge& b) {
    if (a.length_km != b.length_km) return a.length_km < b.length_km;
    if (a.u != b.u) return a.u < b.u;
    return a.v < b.v;
  });
  return cands;
}

struct RepairOutcome {
  EdgeMatrix tree;
  bool infeasible = false;
  std::vector<std::pair<EdgeRow, EdgeRow>> swaps;  // (removed, added)
};

namespace repair_detail {

// Turbines cut off from every substation once an edge is removed.
inline std::vector<char> orphan_nodes(const EdgeMatrix& pruned, const Instance& inst) {
  const int n = inst.n_nodes();
  check_detail::DisjointSet ds(n + 1);
  for (const EdgeRow& r : pruned) ds.unite(r.a, r.b);
  std::vector<char> reach(static_cast<std::size_t>(n + 1), 0);
  for (NodeId s = 1; s <= inst.n_s(); ++s) reach[static_cast<std::size_t>(ds.find(s))] = 1;
  std::vector<char> orphan(static_cast<std::size_t>(n + 1), 0);
  for (NodeId t = inst.n_s() + 1; t <= n; ++t) {
    orphan[static_cast<std::size_t>(t)] = !reach[static_cast<std::size_t>(ds.find(t))];
  }
  return orphan;
}

}  // namespace repair_detail

// Sequential edge-swap repair: pick a crossing edge, prune it, and try the
// non-crossing candidates that reconnect the detached nodes until one keeps
// topology and capacity. Counters exhaust the crossing table before giving up, so
// termination is guaranteed; infeasibility is a flag, not an error.
inline RepairOutcome repair_crossings(const EdgeMatrix& input, const Instance& inst,
                                      const CandidateGraph& g) {
  RepairOutcome out;
  EdgeMatrix tree = input;

  int counter1 = 0;
  int counter2 = 0;
  std::vector<CrossingRow> crossings;
  bool infeasible = false;

  while (true) {
    if (counter1 == 0 && counter2 == 0) {
      crossings = crossing_table(tree, inst);
      if (crossings.empty()) {
        infeasible = false;
        break;
      }
    }
    if (counter2 == static_cast<int>(crossings.size())) {
      infeasible = true;
      break;
    }

    const CrossingRow& row = crossings[static_cast<std::size_t>(counter2)];
    // elimination order within a row: the row's own edge first, then its
    // crossers by descending crossing multiplicity
    std::vector<int> edges_order{row.edge};
    {
      std::vector<int> crossers = row.crossers;
      std::vector<int> multiplicity(tree.size(), 0);
      for (const CrossingRow& r : crossings) {
        multiplicity[static_cast<std::size_t>(r.edge)] = static_cast<int>(r.crossers.size());
      }
      std::stable_sort(crossers.begin(), crossers.end(), [&](int a, int b) {
        return multiplicity[static_cast<std::size_t>(a)] > multiplicity[static_cast<std::size_t>(b)];
      });
      edges_order.insert(edges_order.end(), crossers.begin(), crossers.end());
    }

    const int eliminate = edges_order[static_cast<std::size_t>(counter1)];
    EdgeMatrix pruned;
    pruned.reserve(tree.size() - 1);
    for (int i = 0; i < static_cast<int>(tree.size()); ++i) {
      if (i != eliminate) pruned.push_back(tree[static_cast<std::size_t>(i)]);
    }
    auto orphan = repair_detail::orphan_nodes(pruned, inst);
    auto candidates = candidate_edges_for(orphan, pruned, g, inst);

    bool committed = false;
    for (const UndirectedEdge& cand : candidates) {
      EdgeMatrix trial = pruned;
      trial.push_back({cand.u, cand.v, cand.length_km, -1, -1});
      if (check_detail::capacitated_forest_ok(trial, inst)) {
        out.swaps.emplace_back(tree[static_cast<std::size_t>(eliminate)],
                               trial.back());
        tree = std::move(trial);
        counter1 = 0;
        counter2 = 0;
        committed = true;
        break;
      }
    }
    if (!committed) {
      ++counter1;
      if (counter1 == static_cast<int>(edges_order.size())) {
        ++counter2;
        counter1 = 0;
      }
    }
  }

  out.infeasible = infeasible;
  out.tree = infeasible ? tree : assign_cables(tree, inst);
  return out;
}

}  // namespace owcs
