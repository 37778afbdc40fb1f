#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "owcs/candidate_graph.hpp"
#include "owcs/checker.hpp"
#include "owcs/construct.hpp"
#include "owcs/design.hpp"
#include "owcs/geometry.hpp"

namespace owcs {
namespace oracle {

struct TooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InfeasibleInitial : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExactResult {
  double cost = std::numeric_limits<double>::infinity();
  EdgeMatrix tree;
  bool feasible = false;
};

namespace detail {

struct Enumerator {
  const Instance& inst;
  const CandidateGraph& g;
  int n_s, n_t, q;
  std::vector<std::vector<NodeId>> parents;  // per turbine: allowed upstream nodes
  std::vector<NodeId> choice;                // per turbine: chosen parent
  std::vector<Segment> segs;
  ExactResult best;

  explicit Enumerator(const Instance& i, const CandidateGraph& gr)
      : inst(i), g(gr), n_s(i.n_s()), n_t(i.n_t()), q(i.catalog.max_capacity()) {
    parents.resize(static_cast<std::size_t>(n_t));
    for (int t = 0; t < n_t; ++t) {
      NodeId id = n_s + 1 + t;
      std::vector<NodeId> p;
      for (int ei : g.undirected_adj[static_cast<std::size_t>(id)]) {
        const UndirectedEdge& e = g.edges[static_cast<std::size_t>(ei)];
        p.push_back(e.u == id ? e.v : e.u);
      }
      std::sort(p.begin(), p.end());
      p.erase(std::unique(p.begin(), p.end()), p.end());
      parents[static_cast<std::size_t>(t)] = std::move(p);
    }
    choice.assign(static_cast<std::size_t>(n_t), 0);
  }

  void run() { recurse(0); }

  void recurse(int t) {
    if (t == n_t) {
      finish();
      return;
    }
    NodeId id = n_s + 1 + t;
    for (NodeId p : parents[static_cast<std::size_t>(t)]) {
      Segment seg{inst.point_of(id), inst.point_of(p), id, p};
      bool crosses = false;
      for (const Segment& s : segs) {
        if (segments_cross(seg, s)) {
          crosses = true;
          break;
        }
      }
      if (crosses) continue;
      choice[static_cast<std::size_t>(t)] = p;
      segs.push_back(seg);
      recurse(t + 1);
      segs.pop_back();
    }
  }

  void finish() {
    // cycle check over parent pointers, then subtree counts per edge
    std::vector<int> depth(static_cast<std::size_t>(n_s + n_t + 1), -2);
    for (NodeId s = 1; s <= n_s; ++s) depth[static_cast<std::size_t>(s)] = 0;
    for (int t = 0; t < n_t; ++t) {
      NodeId cur = n_s + 1 + t;
      std::vector<NodeId> path;
      while (depth[static_cast<std::size_t>(cur)] == -2 && cur > n_s) {
        path.push_back(cur);
        depth[static_cast<std::size_t>(cur)] = -1;  // on stack
        cur = choice[static_cast<std::size_t>(cur - n_s - 1)];
        if (depth[static_cast<std::size_t>(cur)] == -1) return;  // cycle
      }
      for (auto it = path.rbegin(); it != path.rend(); ++it) {
        depth[static_cast<std::size_t>(*it)] = depth[static_cast<std::size_t>(cur)] + 1;
        cur = *it;
      }
    }
    // counts: each turbine contributes to every edge on its path to the root
    std::vector<int> subtree(static_cast<std::size_t>(n_s + n_t + 1), 0);
    for (int t = 0; t < n_t; ++t) {
      NodeId cur = n_s + 1 + t;
      while (cur > n_s) {
        subtree[static_cast<std::size_t>(cur)] += 1;
        cur = choice[static_cast<std::size_t>(cur - n_s - 1)];
      }
    }
    double cost = 0.0;
    for (int t = 0; t < n_t; ++t) {
      NodeId id = n_s + 1 + t;
      if (subtree[static_cast<std::size_t>(id)] > q) return;
      NodeId p = choice[static_cast<std::size_t>(t)];
      cost += inst.catalog.step_cost(distance(inst.point_of(id), inst.point_of(p)) / 1000.0,
                                     subtree[static_cast<std::size_t>(id)]);
    }
    if (cost > best.cost + 1e-12) return;
    EdgeMatrix tree;
    for (int t = 0; t < n_t; ++t) {
      NodeId id = n_s + 1 + t;
      NodeId p = choice[static_cast<std::size_t>(t)];
      tree.push_back({p, id, distance(inst.point_of(id), inst.point_of(p)) / 1000.0,
                      subtree[static_cast<std::size_t>(id)],
                      *inst.catalog.cheapest_cable_for(subtree[static_cast<std::size_t>(id)])});
    }
    auto edge_key = [](const EdgeMatrix& m) {
      std::vector<std::pair<NodeId, NodeId>> k;
      for (const EdgeRow& r : m) k.emplace_back(std::min(r.a, r.b), std::max(r.a, r.b));
      std::sort(k.begin(), k.end());
      return k;
    };
    if (cost < best.cost - 1e-12 ||
        (best.feasible && edge_key(tree) < edge_key(best.tree))) {
      best.cost = cost;
      best.tree = std::move(tree);
      best.feasible = true;
    }
  }
};

}  // namespace detail

// Exhaustive minimum over all crossing-free capacitated forests on the
// candidate adjacency; desk-scale ground truth only.
inline ExactResult exact_design(const Instance& inst) {
  if (inst.n_t() > 9) throw TooLarge("exact enumeration limited to 9 turbines");
  CandidateGraph g = build_candidate_graph(inst);
  detail::Enumerator e(inst, g);
  e.run();
  if (e.best.feasible) e.best.tree = assign_cables(e.best.tree, inst);
  return e.best;
}

// Classic linear-cost min cost flow.
struct McfArc {
  int tail = 0;
  int head = 0;
  int capacity = 0;
  double unit_cost = 0.0;
};

struct McfProblem {
  int n_nodes = 0;                // ids 1..n_nodes
  std::vector<int> demand;        // by node id; negative at sources, sums to zero
  std::vector<McfArc> arcs;
};

inline double mcf_cost(const McfProblem& p, const std::vector<int>& flow) {
  double c = 0.0;
  for (std::size_t i = 0; i < p.arcs.size(); ++i) c += p.arcs[i].unit_cost * flow[i];
  return c;
}

inline bool mcf_feasible(const McfProblem& p, const std::vector<int>& flow) {
  if (flow.size() != p.arcs.size()) return false;
  std::vector<int> net(static_cast<std::size_t>(p.n_nodes + 1), 0);
  for (std::size_t i = 0; i < p.arcs.size(); ++i) {
    if (flow[i] < 0 || flow[i] > p.arcs[i].capacity) return false;
    net[static_cast<std::size_t>(p.arcs[i].head)] += flow[i];
    net[static_cast<std::size_t>(p.arcs[i].tail)] -= flow[i];
  }
  for (int v = 1; v <= p.n_nodes; ++v) {
    if (net[static_cast<std::size_t>(v)] != p.demand[static_cast<std::size_t>(v)]) return false;
  }
  return true;
}

// Cancel negative cycles in the flow-dependent residual graph until none
// remain; exact for linear costs. The iteration cap guards against loops on
// malformed inputs.
inline std::vector<int> classic_ncc(const McfProblem& p, std::vector<int> flow) {
  if (!mcf_feasible(p, flow)) throw InfeasibleInitial("initial flow violates balance or capacity");

  const int root = p.n_nodes + 1;
  double max_cost = 1.0;
  double max_cap = 1.0;
  for (const McfArc& a : p.arcs) {
    max_cost = std::max(max_cost, std::abs(a.unit_cost));
    max_cap = std::max(max_cap, static_cast<double>(a.capacity));
  }
  const long iter_cap =
      static_cast<long>(std::ceil(static_cast<double>(p.arcs.size()) * max_cost * max_cap)) + 16;

  struct RArc {
    int tail, head;
    double cost;
    int arc;   // original arc index, -1 for root arcs
    int sign;  // +1 forward, -1 backward
  };

  for (long iter = 0; iter < iter_cap; ++iter) {
    std::vector<RArc> rarcs;
    for (int i = 0; i < static_cast<int>(p.arcs.size()); ++i) {
      const McfArc& a = p.arcs[static_cast<std::size_t>(i)];
      if (flow[static_cast<std::size_t>(i)] < a.capacity)
        rarcs.push_back({a.tail, a.head, a.unit_cost, i, +1});
      if (flow[static_cast<std::size_t>(i)] > 0)
        rarcs.push_back({a.head, a.tail, -a.unit_cost, i, -1});
    }
    for (int v = 1; v <= p.n_nodes; ++v) rarcs.push_back({root, v, 0.0, -1, 0});

    const int n = root;
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(static_cast<std::size_t>(n + 1), kInf);
    std::vector<int> pred(static_cast<std::size_t>(n + 1), -1);
    dist[static_cast<std::size_t>(root)] = 0.0;
    int relax_node = -1;
    for (int pass = 0; pass < n && relax_node < 0; ++pass) {
      bool changed = false;
      for (int ai = 0; ai < static_cast<int>(rarcs.size()); ++ai) {
        const RArc& ra = rarcs[static_cast<std::size_t>(ai)];
        if (dist[static_cast<std::size_t>(ra.tail)] == kInf) continue;
        if (dist[static_cast<std::size_t>(ra.tail)] + ra.cost <
            dist[static_cast<std::size_t>(ra.head)] - 1e-12) {
          dist[static_cast<std::size_t>(ra.head)] = dist[static_cast<std::size_t>(ra.tail)] + ra.cost;
          pred[static_cast<std::size_t>(ra.head)] = ai;
          changed = true;
          if (pass == n - 1) {
            relax_node = ra.head;
            break;
          }
        }
      }
      if (!changed) break;
    }
    if (relax_node < 0) return flow;

    int x = relax_node;
    for (int i = 0; i < n; ++i)
      x = rarcs[static_cast<std::size_t>(pred[static_cast<std::size_t>(x)])].tail;
    std::vector<int> cycle;
    int y = x;
    do {
      int ai = pred[static_cast<std::size_t>(y)];
      cycle.push_back(ai);
      y = rarcs[static_cast<std::size_t>(ai)].tail;
    } while (y != x);

    int delta = std::numeric_limits<int>::max();
    for (int ai : cycle) {
      const RArc& ra = rarcs[static_cast<std::size_t>(ai)];
      if (ra.sign > 0)
        delta = std::min(delta, p.arcs[static_cast<std::size_t>(ra.arc)].capacity -
                                    flow[static_cast<std::size_t>(ra.arc)]);
      else if (ra.sign < 0)
        delta = std::min(delta, flow[static_cast<std::size_t>(ra.arc)]);
    }
    if (delta <= 0) return flow;
    for (int ai : cycle) {
      const RArc& ra = rarcs[static_cast<std::size_t>(ai)];
      if (ra.arc >= 0) flow[static_cast<std::size_t>(ra.arc)] += ra.sign * delta;
    }
  }
  throw std::runtime_error("cycle cancelling exceeded its iteration bound");
}

}  // namespace oracle
}  // namespace owcs
