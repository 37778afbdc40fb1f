#pragma once

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

#include "owcs/candidate_graph.hpp"
#include "owcs/checker.hpp"
#include "owcs/design.hpp"
#include "owcs/model.hpp"

namespace owcs {

struct CapacityInfeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CapacityExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Esau-Williams capacitated spanning forest over the undirected candidate
// view. Every turbine starts wired to its cheapest substation; merges with
// the most negative tradeoff (lateral length minus the gate it replaces) are
// applied while the merged component stays within the largest cable capacity.
inline EdgeMatrix esau_williams(const CandidateGraph& g, const Instance& inst) {
  const int q = inst.catalog.max_capacity();
  if (inst.n_t() > 0 && q < 1)
    throw CapacityInfeasible("largest cable cannot host a single turbine");

  const int n = g.n_nodes();

  struct Gate {
    NodeId turbine = 0;
    NodeId substation = 0;
    double length_km = std::numeric_limits<double>::infinity();
  };

  // Cheapest direct substation link per turbine; direct arcs always exist.
  std::vector<Gate> node_gate(static_cast<std::size_t>(n + 1));
  for (NodeId t = g.n_s + 1; t <= n; ++t) {
    Gate best;
    for (NodeId s = 1; s <= g.n_s; ++s) {
      int ei = g.edge_index(s, t);
      if (ei < 0) continue;
      double len = g.edges[static_cast<std::size_t>(ei)].length_km;
      if (len < best.length_km || (len == best.length_km && s < best.substation)) {
        best = {t, s, len};
      }
    }
    node_gate[static_cast<std::size_t>(t)] = best;
  }

  // Union-find over turbines with per-component size and gate.
  std::vector<int> parent(static_cast<std::size_t>(n + 1));
  std::vector<int> comp_size(static_cast<std::size_t>(n + 1), 1);
  std::vector<Gate> comp_gate(static_cast<std::size_t>(n + 1));
  for (NodeId t = 0; t <= n; ++t) parent[static_cast<std::size_t>(t)] = t;
  for (NodeId t = g.n_s + 1; t <= n; ++t)
    comp_gate[static_cast<std::size_t>(t)] = node_gate[static_cast<std::size_t>(t)];

  auto find = [&](NodeId x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };

  // turbine-turbine lateral edges only
  std::vector<int> laterals;
  for (int i = 0; i < static_cast<int>(g.edges.size()); ++i) {
    if (g.edges[static_cast<std::size_t>(i)].u > g.n_s) laterals.push_back(i);
  }

  EdgeMatrix lateral_rows;
  while (true) {
    double best_tradeoff = 0.0;
    int best_edge = -1;
    for (int ei : laterals) {
      const UndirectedEdge& e = g.edges[static_cast<std::size_t>(ei)];
      NodeId ru = find(e.u), rv = find(e.v);
      if (ru == rv) continue;
      if (comp_size[static_cast<std::size_t>(ru)] + comp_size[static_cast<std::size_t>(rv)] > q)
        continue;
      // merging drops the more expensive of the two gates
      const double dropped = std::max(comp_gate[static_cast<std::size_t>(ru)].length_km,
                                      comp_gate[static_cast<std::size_t>(rv)].length_km);
      const double tradeoff = e.length_km - dropped;
      if (tradeoff >= -1e-12) continue;
      if (best_edge < 0 || tradeoff < best_tradeoff - 1e-15 ||
          (std::abs(tradeoff - best_tradeoff) <= 1e-15 &&
           (e.length_km < g.edges[static_cast<std::size_t>(best_edge)].length_km ||
            (e.length_km == g.edges[static_cast<std::size_t>(best_edge)].length_km &&
             std::pair(e.u, e.v) < std::pair(g.edges[static_cast<std::size_t>(best_edge)].u,
                                             g.edges[static_cast<std::size_t>(best_edge)].v))))) {
        best_tradeoff = tradeoff;
        best_edge = ei;
      }
    }
    if (best_edge < 0) break;
    const UndirectedEdge& e = g.edges[static_cast<std::size_t>(best_edge)];
    NodeId ru = find(e.u), rv = find(e.v);
    const Gate& ga = comp_gate[static_cast<std::size_t>(ru)];
    const Gate& gb = comp_gate[static_cast<std::size_t>(rv)];
    Gate kept = ga;
    if (gb.length_km < kept.length_km ||
        (gb.length_km == kept.length_km &&
         std::pair(gb.turbine, gb.substation) < std::pair(kept.turbine, kept.substation))) {
      kept = gb;
    }
    parent[static_cast<std::size_t>(ru)] = rv;
    comp_size[static_cast<std::size_t>(rv)] += comp_size[static_cast<std::size_t>(ru)];
    comp_gate[static_cast<std::size_t>(rv)] = kept;
    lateral_rows.push_back({e.u, e.v, e.length_km, -1, -1});
  }

  // one gate edge per surviving component
  EdgeMatrix rows = lateral_rows;
  for (NodeId t = g.n_s + 1; t <= n; ++t) {
    if (find(t) != t) continue;
    const Gate& gt = comp_gate[static_cast<std::size_t>(t)];
    rows.push_back({gt.substation, gt.turbine, gt.length_km, -1, -1});
  }
  return rows;
}

// Depth-first orientation from the substations: upstream endpoint first,
// downstream turbine counts and cheapest feasible cable per edge.
inline EdgeMatrix assign_cables(const EdgeMatrix& tree, const Instance& inst) {
  auto counts = check_detail::downstream_counts(tree, inst);
  if (!counts) throw std::invalid_argument("assign_cables: input is not a spanning forest");

  const int n = inst.n_nodes();
  std::vector<std::vector<std::pair<NodeId, int>>> adj(static_cast<std::size_t>(n + 1));
  for (int i = 0; i < static_cast<int>(tree.size()); ++i) {
    const EdgeRow& r = tree[static_cast<std::size_t>(i)];
    adj[static_cast<std::size_t>(r.a)].emplace_back(r.b, i);
    adj[static_cast<std::size_t>(r.b)].emplace_back(r.a, i);
  }
  for (auto& lst : adj) std::sort(lst.begin(), lst.end());

  EdgeMatrix out;
  out.reserve(tree.size());
  std::vector<char> visited(static_cast<std::size_t>(n + 1), 0);
  for (NodeId s = 1; s <= inst.n_s(); ++s) {
    std::vector<NodeId> stack{s};
    visited[static_cast<std::size_t>(s)] = 1;
    while (!stack.empty()) {
      NodeId node = stack.back();
      stack.pop_back();
      // push in reverse so ascending ids are visited first
      const auto& nbrs = adj[static_cast<std::size_t>(node)];
      for (auto it = nbrs.rbegin(); it != nbrs.rend(); ++it) {
        const auto& [next, edge] = *it;
        if (visited[static_cast<std::size_t>(next)]) continue;
        visited[static_cast<std::size_t>(next)] = 1;
        const EdgeRow& r = tree[static_cast<std::size_t>(edge)];
        const int k = (*counts)[static_cast<std::size_t>(edge)];
        auto cable = inst.catalog.cheapest_cable_for(k);
        if (!cable) throw CapacityExceeded("downstream count exceeds largest cable");
        out.push_back({node, next, r.length_km, k, *cable});
        stack.push_back(next);
      }
    }
  }
  return out;
}

struct ConstructResult {
  EdgeMatrix tree;
  int crossing_count = 0;
};

// Two steps: topology by Esau-Williams, then orientation and cable sizing.
// The result honors topology and capacity; crossings are only counted.
inline ConstructResult run_construct(const Instance& inst, const CandidateGraph& g) {
  EdgeMatrix topo = esau_williams(g, inst);
  EdgeMatrix tree = assign_cables(topo, inst);
  auto crossings = all_crossings(segments_of(tree, inst));
  return {std::move(tree), static_cast<int>(crossings.size())};
}

inline ConstructResult run_construct(const Instance& inst) {
  return run_construct(inst, build_candidate_graph(inst));
}

}  // namespace owcs
