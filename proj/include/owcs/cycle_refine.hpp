#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <vector>

#include "owcs/candidate_graph.hpp"
#include "owcs/checker.hpp"
#include "owcs/construct.hpp"
#include "owcs/design.hpp"

namespace owcs {

// Signed per-arc flow over the forward arc set: positive along the canonical
// direction, negative against it. Values are integer turbine counts.
struct FlowAssignment {
  std::vector<int> flow;  // indexed by forward arc
};

inline FlowAssignment flow_from_tree(const EdgeMatrix& tree, const ForwardArcSet& fas) {
  FlowAssignment fa;
  fa.flow.assign(static_cast<std::size_t>(fas.size()), 0);
  for (const EdgeRow& r : tree) {
    int idx = fas.index_of(r.a, r.b);
    if (idx < 0) throw ArcMissing("tree edge not present in candidate graph");
    // flow runs downstream -> upstream, magnitude = downstream count
    fa.flow[static_cast<std::size_t>(idx)] = fas.direction(idx, r.b, r.a) * r.downstream_count;
  }
  return fa;
}

// Constant residual network: base nodes, a cluster transfer node rerouting
// surplus between substations, and a fictitious root reaching everything.
struct ResidualNetwork {
  enum class Kind { SubToCluster, ClusterToSub, Forward, Backward, Root };
  struct RArc {
    int tail = 0;
    int head = 0;
    Kind kind{};
    int ref = -1;  // forward-arc index, or substation id for cluster arcs
  };

  int n_base = 0;
  int n_s = 0;
  int cluster_node = 0;
  int root_node = 0;
  std::vector<RArc> arcs;

  int n_total() const { return n_base + 2; }

  static bool inverse_pair(const RArc& a, const RArc& b) {
    if (a.kind == Kind::Forward && b.kind == Kind::Backward) return a.ref == b.ref;
    if (a.kind == Kind::Backward && b.kind == Kind::Forward) return a.ref == b.ref;
    if (a.kind == Kind::SubToCluster && b.kind == Kind::ClusterToSub) return a.ref == b.ref;
    if (a.kind == Kind::ClusterToSub && b.kind == Kind::SubToCluster) return a.ref == b.ref;
    return false;
  }
};

inline ResidualNetwork build_residual_network(const ForwardArcSet& fas, int n_s, int n_t) {
  ResidualNetwork net;
  net.n_base = n_s + n_t;
  net.n_s = n_s;
  net.cluster_node = net.n_base + 1;
  net.root_node = net.n_base + 2;
  for (int s = 1; s <= n_s; ++s) {
    net.arcs.push_back({s, net.cluster_node, ResidualNetwork::Kind::SubToCluster, s});
    net.arcs.push_back({net.cluster_node, s, ResidualNetwork::Kind::ClusterToSub, s});
  }
  for (int i = 0; i < fas.size(); ++i) {
    const ForwardArc& a = fas.arcs[static_cast<std::size_t>(i)];
    net.arcs.push_back({a.tail, a.head, ResidualNetwork::Kind::Forward, i});
    net.arcs.push_back({a.head, a.tail, ResidualNetwork::Kind::Backward, i});
  }
  for (int j = 1; j <= net.n_base + 1; ++j) {
    net.arcs.push_back({net.root_node, j, ResidualNetwork::Kind::Root, -1});
  }
  return net;
}

// Net inflow per substation under the current flow.
inline std::vector<int> substation_inflows(const FlowAssignment& flow, const ForwardArcSet& fas,
                                           int n_s) {
  std::vector<int> in(static_cast<std::size_t>(n_s + 1), 0);
  for (int i = 0; i < fas.size(); ++i) {
    const ForwardArc& a = fas.arcs[static_cast<std::size_t>(i)];
    if (a.head <= n_s) in[static_cast<std::size_t>(a.head)] += flow.flow[static_cast<std::size_t>(i)];
  }
  return in;
}

// Residual cost of moving delta units over one residual arc given the current
// mirrored flow: free on root and substation-side cluster arcs, the step-cost
// difference on forward/backward arcs within capacity, infinite otherwise
// (including any push that would drive flow out of a substation).
inline double residual_cost(const ResidualNetwork::RArc& arc, const FlowAssignment& flow,
                            const ForwardArcSet& fas, int delta, const CableCatalog& catalog,
                            const std::vector<int>& inflows, int n_s) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const int q = catalog.max_capacity();
  switch (arc.kind) {
    case ResidualNetwork::Kind::Root:
    case ResidualNetwork::Kind::SubToCluster:
      return 0.0;
    case ResidualNetwork::Kind::ClusterToSub:
      return delta <= inflows[static_cast<std::size_t>(arc.ref)] ? 0.0 : kInf;
    case ResidualNetwork::Kind::Forward: {
      const ForwardArc& a = fas.arcs[static_cast<std::size_t>(arc.ref)];
      const int lam = flow.flow[static_cast<std::size_t>(arc.ref)];
      if (std::abs(lam + delta) > q) return kInf;
      return catalog.step_cost(a.length_km, std::abs(lam + delta)) -
             catalog.step_cost(a.length_km, std::abs(lam));
    }
    case ResidualNetwork::Kind::Backward: {
      const ForwardArc& a = fas.arcs[static_cast<std::size_t>(arc.ref)];
      const int lam = flow.flow[static_cast<std::size_t>(arc.ref)];
      // a backward arc leaving a substation may not reverse the flow
      if (arc.tail <= n_s && delta > lam) return kInf;
      if (std::abs(lam - delta) > q) return kInf;
      return catalog.step_cost(a.length_km, std::abs(lam - delta)) -
             catalog.step_cost(a.length_km, std::abs(lam));
    }
  }
  return kInf;
}

inline std::vector<double> residual_costs(const ResidualNetwork& net, const FlowAssignment& flow,
                                          const ForwardArcSet& fas, int delta,
                                          const CableCatalog& catalog,
                                          const std::vector<int>& inflows) {
  std::vector<double> costs(net.arcs.size());
  for (std::size_t i = 0; i < net.arcs.size(); ++i) {
    costs[i] = residual_cost(net.arcs[i], flow, fas, delta, catalog, inflows, net.n_s);
  }
  return costs;
}

struct CostedCycle {
  std::vector<int> arc_ids;  // indices into ResidualNetwork::arcs, in walk order
  double cost = 0.0;
};

namespace refine_detail {

inline void split_walk(const ResidualNetwork& net, const std::vector<double>& costs,
                       std::vector<int> walk, std::vector<CostedCycle>& out) {
  const int m = static_cast<int>(walk.size());
  for (int p = 0; p < m; ++p) {
    for (int qi = p + 1; qi < m; ++qi) {
      const auto& a = net.arcs[static_cast<std::size_t>(walk[static_cast<std::size_t>(p)])];
      const auto& b = net.arcs[static_cast<std::size_t>(walk[static_cast<std::size_t>(qi)])];
      if (!ResidualNetwork::inverse_pair(a, b)) continue;
      std::vector<int> first(walk.begin() + p + 1, walk.begin() + qi);
      std::vector<int> second(walk.begin() + qi + 1, walk.end());
      second.insert(second.end(), walk.begin(), walk.begin() + p);
      split_walk(net, costs, std::move(first), out);
      split_walk(net, costs, std::move(second), out);
      return;
    }
  }
  if (m >= 3) {
    CostedCycle c;
    c.arc_ids = std::move(walk);
    for (int id : c.arc_ids) c.cost += costs[static_cast<std::size_t>(id)];
    out.push_back(std::move(c));
  }
}

}  // namespace refine_detail

// Bellman-Ford rooted at the fictitious root over the finite-cost arcs. At
// most one negative walk is recovered per invocation; arcs paired with their
// inverses are stripped and the remaining sub-cycles (three arcs or more)
// returned with their total residual cost.
inline std::vector<CostedCycle> find_negative_cycles(const ResidualNetwork& net,
                                                     const std::vector<double>& costs) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const int n = net.n_total();

  // relaxation sweeps in ascending tail-node order
  std::vector<int> order(net.arcs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return net.arcs[static_cast<std::size_t>(x)].tail < net.arcs[static_cast<std::size_t>(y)].tail;
  });

  std::vector<double> dist(static_cast<std::size_t>(n + 1), kInf);
  std::vector<int> pred(static_cast<std::size_t>(n + 1), -1);
  dist[static_cast<std::size_t>(net.root_node)] = 0.0;

  int relax_node = -1;
  for (int pass = 0; pass < n && relax_node < 0; ++pass) {
    bool changed = false;
    for (int ai : order) {
      const auto& arc = net.arcs[static_cast<std::size_t>(ai)];
      const double c = costs[static_cast<std::size_t>(ai)];
      if (c == kInf || dist[static_cast<std::size_t>(arc.tail)] == kInf) continue;
      if (dist[static_cast<std::size_t>(arc.tail)] + c <
          dist[static_cast<std::size_t>(arc.head)] - 1e-12) {
        dist[static_cast<std::size_t>(arc.head)] = dist[static_cast<std::size_t>(arc.tail)] + c;
        pred[static_cast<std::size_t>(arc.head)] = ai;
        changed = true;
        if (pass == n - 1) {
          relax_node = arc.head;
          break;
        }
      }
    }
    if (!changed) break;
  }
  if (relax_node < 0) return {};

  // walk predecessors until a node repeats, then cut out the cycle
  int x = relax_node;
  for (int i = 0; i < n; ++i) x = net.arcs[static_cast<std::size_t>(pred[static_cast<std::size_t>(x)])].tail;
  std::vector<int> walk;
  int y = x;
  do {
    const int ai = pred[static_cast<std::size_t>(y)];
    walk.push_back(ai);
    y = net.arcs[static_cast<std::size_t>(ai)].tail;
  } while (y != x);
  std::reverse(walk.begin(), walk.end());

  std::vector<CostedCycle> out;
  refine_detail::split_walk(net, costs, std::move(walk), out);
  return out;
}

// Push delta around a cycle: forward arcs gain delta, backward arcs unwind
// it on their canonical counterpart; cluster and root arcs carry no state.
inline void push_on_cycle(FlowAssignment& flow, const ResidualNetwork& net,
                          const CostedCycle& cycle, int delta) {
  for (int ai : cycle.arc_ids) {
    const auto& arc = net.arcs[static_cast<std::size_t>(ai)];
    if (arc.kind == ResidualNetwork::Kind::Forward)
      flow.flow[static_cast<std::size_t>(arc.ref)] += delta;
    else if (arc.kind == ResidualNetwork::Kind::Backward)
      flow.flow[static_cast<std::size_t>(arc.ref)] -= delta;
  }
}

inline double flow_cost(const FlowAssignment& flow, const ForwardArcSet& fas,
                        const CableCatalog& catalog) {
  double total = 0.0;
  for (int i = 0; i < fas.size(); ++i) {
    const int lam = flow.flow[static_cast<std::size_t>(i)];
    if (lam != 0) total += catalog.step_cost(fas.arcs[static_cast<std::size_t>(i)].length_km,
                                             std::abs(lam));
  }
  return total;
}

inline EdgeMatrix active_edges(const FlowAssignment& flow, const ForwardArcSet& fas) {
  EdgeMatrix rows;
  for (int i = 0; i < fas.size(); ++i) {
    if (flow.flow[static_cast<std::size_t>(i)] == 0) continue;
    const ForwardArc& a = fas.arcs[static_cast<std::size_t>(i)];
    rows.push_back({a.tail, a.head, a.length_km, -1, -1});
  }
  return rows;
}

// Topology and planarity on the active-arc network, plus a capacity sanity check.
inline bool flow_feasible(const FlowAssignment& flow, const ForwardArcSet& fas,
                          const Instance& inst) {
  const int q = inst.catalog.max_capacity();
  for (int lam : flow.flow) {
    if (std::abs(lam) > q) return false;
  }
  EdgeMatrix act = active_edges(flow, fas);
  if (!check_detail::forest_ok(act, inst)) return false;
  return all_crossings(segments_of(act, inst)).empty();
}

struct RefineStep {
  int delta = 0;
  double cycle_cost = 0.0;
  double cost_before = 0.0;
  double cost_after = 0.0;
};

struct RefineResult {
  FlowAssignment flow;
  EdgeMatrix tree;
  int iterations = 0;
  std::vector<RefineStep> steps;
};

// Cancel negative-cost cycles in the constant residual network: try each
// candidate surplus (the distinct nonzero flow magnitudes, ascending), push
// it around any strictly negative cycle whose trial flow stays a
// crossing-free forest, and restart after every committed improvement.
inline RefineResult refine(FlowAssignment flow, const Instance& inst, const CandidateGraph& g,
                           const ForwardArcSet& fas) {
  RefineResult res;
  ResidualNetwork net = build_residual_network(fas, g.n_s, g.n_t);

  auto deltas_of = [&](const FlowAssignment& f) {
    std::set<int> uniq;
    for (int lam : f.flow) {
      if (lam != 0) uniq.insert(std::abs(lam));
    }
    return std::vector<int>(uniq.begin(), uniq.end());
  };

  std::vector<int> deltas = deltas_of(flow);
  int counter = 0;
  while (counter < static_cast<int>(deltas.size())) {
    const int delta = deltas[static_cast<std::size_t>(counter)];
    auto inflows = substation_inflows(flow, fas, g.n_s);
    auto costs = residual_costs(net, flow, fas, delta, inst.catalog, inflows);
    auto cycles = find_negative_cycles(net, costs);
    bool improved = false;
    for (const CostedCycle& cycle : cycles) {
      if (cycle.cost >= -1e-9) continue;
      FlowAssignment trial = flow;
      push_on_cycle(trial, net, cycle, delta);
      if (!flow_feasible(trial, fas, inst)) continue;
      RefineStep step;
      step.delta = delta;
      step.cycle_cost = cycle.cost;
      step.cost_before = flow_cost(flow, fas, inst.catalog);
      step.cost_after = flow_cost(trial, fas, inst.catalog);
      flow = std::move(trial);
      res.steps.push_back(step);
      ++res.iterations;
      deltas = deltas_of(flow);
      counter = 0;
      improved = true;
      break;
    }
    if (!improved) ++counter;
  }

  res.tree = assign_cables(active_edges(flow, fas), inst);
  res.flow = std::move(flow);
  return res;
}

}  // namespace owcs
