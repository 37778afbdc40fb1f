#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "owcs/candidate_graph.hpp"
#include "owcs/design.hpp"
#include "owcs/geometry.hpp"
#include "owcs/model.hpp"

namespace owcs {

struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Binary arc-selection model: x_i_j activates arc (i, j), y_k_i_j carries k
// turbines over it. Tree topology, flow conservation, crossing exclusion,
// arc linking and per-turbine valid inequalities; objective is the step cost
// of every loaded arc.
struct MilpModel {
  int n_s = 0;
  int n_t = 0;
  CableCatalog catalog;
  std::vector<Arc> arcs;  // lexicographic by (tail, head)
  std::vector<UndirectedEdge> adjacencies;
  std::vector<std::pair<int, int>> crossing_pairs;  // indices into adjacencies

  int n_nodes() const { return n_s + n_t; }
  int max_capacity() const { return catalog.max_capacity(); }

  // largest load a cable into node j may carry
  int h(NodeId j) const { return j <= n_s ? max_capacity() : max_capacity() - 1; }

  bool has_arc(NodeId i, NodeId j) const {
    return arc_index_.count(CandidateGraph::key(i, j) * 2 + (i < j ? 0 : 1)) != 0;
  }

  int arc_index(NodeId i, NodeId j) const {
    auto it = arc_index_.find(CandidateGraph::key(i, j) * 2 + (i < j ? 0 : 1));
    return it == arc_index_.end() ? -1 : it->second;
  }

  void index_arcs() {
    arc_index_.clear();
    for (int i = 0; i < static_cast<int>(arcs.size()); ++i) {
      const Arc& a = arcs[static_cast<std::size_t>(i)];
      arc_index_.emplace(CandidateGraph::key(a.tail, a.head) * 2 + (a.tail < a.head ? 0 : 1), i);
    }
  }

  static std::string x_name(NodeId i, NodeId j) {
    return "x_" + std::to_string(i) + "_" + std::to_string(j);
  }
  static std::string y_name(int k, NodeId i, NodeId j) {
    return "y_" + std::to_string(k) + "_" + std::to_string(i) + "_" + std::to_string(j);
  }

 private:
  std::unordered_map<std::int64_t, int> arc_index_;
};

inline MilpModel build_milp(const Instance& inst, const CandidateGraph& g) {
  MilpModel m;
  m.n_s = g.n_s;
  m.n_t = g.n_t;
  m.catalog = inst.catalog;
  // arcs from the undirected adjacency so any heuristic tree orientation maps
  // onto a variable: both directions for turbine pairs, turbine -> substation
  // for mixed pairs
  for (const UndirectedEdge& e : g.edges) {
    if (e.u > g.n_s) {
      m.arcs.push_back({e.u, e.v, e.length_km});
      m.arcs.push_back({e.v, e.u, e.length_km});
    } else {
      m.arcs.push_back({e.v, e.u, e.length_km});
    }
  }
  std::sort(m.arcs.begin(), m.arcs.end(), [](const Arc& a, const Arc& b) {
    if (a.tail != b.tail) return a.tail < b.tail;
    return a.head < b.head;
  });
  m.index_arcs();
  m.adjacencies = g.edges;
  for (int i = 0; i < static_cast<int>(m.adjacencies.size()); ++i) {
    const UndirectedEdge& e1 = m.adjacencies[static_cast<std::size_t>(i)];
    Segment s1{inst.point_of(e1.u), inst.point_of(e1.v), e1.u, e1.v};
    for (int j = i + 1; j < static_cast<int>(m.adjacencies.size()); ++j) {
      const UndirectedEdge& e2 = m.adjacencies[static_cast<std::size_t>(j)];
      Segment s2{inst.point_of(e2.u), inst.point_of(e2.v), e2.u, e2.v};
      if (segments_cross(s1, s2)) m.crossing_pairs.emplace_back(i, j);
    }
  }
  return m;
}

// Sparse `variable value` assignment for a sized tree: the arc of each edge,
// oriented downstream node -> upstream node, carries its downstream count.
inline std::unordered_map<std::string, double> assignment_from_tree(const EdgeMatrix& tree,
                                                                    const MilpModel& model) {
  if (tree.empty()) throw std::invalid_argument("warm start: empty tree");
  std::unordered_map<std::string, double> out;
  for (const EdgeRow& r : tree) {
    const NodeId i = r.b;  // downstream
    const NodeId j = r.a;  // upstream
    if (model.arc_index(i, j) < 0)
      throw ArcMissing("warm start: tree edge " + std::to_string(i) + "->" +
                            std::to_string(j) + " not a candidate arc");
    if (r.downstream_count < 1 || r.downstream_count > model.h(j))
      throw std::invalid_argument("warm start: downstream count outside model range");
    out[MilpModel::x_name(i, j)] = 1.0;
    out[MilpModel::y_name(r.downstream_count, i, j)] = 1.0;
  }
  return out;
}

inline std::string warm_start_text(const EdgeMatrix& tree, const MilpModel& model) {
  // deterministic order: arcs lexicographic
  EdgeMatrix sorted = tree;
  std::sort(sorted.begin(), sorted.end(), [](const EdgeRow& a, const EdgeRow& b) {
    if (a.b != b.b) return a.b < b.b;
    return a.a < b.a;
  });
  std::ostringstream os;
  os << "# warm start: variable value, unlisted variables are zero\n";
  for (const EdgeRow& r : sorted) {
    if (r.downstream_count < 1 || r.downstream_count > model.h(r.a))
      throw std::invalid_argument("warm start: downstream count outside model range");
    if (model.arc_index(r.b, r.a) < 0)
      throw ArcMissing("warm start: tree edge not a candidate arc");
    os << MilpModel::x_name(r.b, r.a) << " 1\n";
    os << MilpModel::y_name(r.downstream_count, r.b, r.a) << " 1\n";
  }
  return os.str();
}

inline void write_warm_start(const EdgeMatrix& tree, const MilpModel& model,
                             const std::string& path) {
  if (tree.empty()) throw std::invalid_argument("warm start: empty tree");
  std::ofstream f(path);
  if (!f) throw IoFailure("cannot open " + path);
  f << warm_start_text(tree, model);
  if (!f) throw IoFailure("write failed: " + path);
}

namespace milp_detail {

inline std::string num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace milp_detail

// CPLEX-LP dialect text: Minimize / Subject To / Binary / End. An optional
// warm-start block is embedded as comments at the top.
inline void write_lp(const MilpModel& m, const std::string& path,
                     const std::string* warm_start = nullptr) {
  std::ofstream f(path);
  if (!f) throw IoFailure("cannot open " + path);
  f << "\\ collection system cable network model\n";
  if (warm_start) {
    std::istringstream ws(*warm_start);
    std::string line;
    while (std::getline(ws, line)) f << "\\ start: " << line << "\n";
  }
  f << "Minimize\n obj:";
  bool first = true;
  for (const Arc& a : m.arcs) {
    for (int k = 1; k <= m.h(a.head); ++k) {
      const double coeff = m.catalog.step_cost(a.length_km, k);
      f << (first ? " " : " + ") << milp_detail::num(coeff) << " "
        << MilpModel::y_name(k, a.tail, a.head);
      first = false;
    }
  }
  f << "\nSubject To\n";
  // one cable out of every turbine
  for (NodeId i = m.n_s + 1; i <= m.n_nodes(); ++i) {
    f << " deg_" << i << ":";
    bool any = false;
    for (const Arc& a : m.arcs) {
      if (a.tail != i) continue;
      for (int k = 1; k <= m.h(a.head); ++k) {
        f << (any ? " + " : " ") << MilpModel::y_name(k, a.tail, a.head);
        any = true;
      }
    }
    f << " = 1\n";
  }
  // flow conservation per turbine
  for (NodeId i = m.n_s + 1; i <= m.n_nodes(); ++i) {
    f << " flow_" << i << ":";
    bool any = false;
    for (const Arc& a : m.arcs) {
      if (a.tail == i) {
        for (int k = 1; k <= m.h(a.head); ++k) {
          f << (any ? " + " : " ") << k << " " << MilpModel::y_name(k, a.tail, a.head);
          any = true;
        }
      } else if (a.head == i) {
        for (int k = 1; k <= m.h(i); ++k) {
          f << (any ? " - " : " - ") << k << " " << MilpModel::y_name(k, a.tail, a.head);
          any = true;
        }
      }
    }
    f << " = 1\n";
  }
  // crossing exclusion
  for (int p = 0; p < static_cast<int>(m.crossing_pairs.size()); ++p) {
    const auto& [e1, e2] = m.crossing_pairs[static_cast<std::size_t>(p)];
    const UndirectedEdge& a = m.adjacencies[static_cast<std::size_t>(e1)];
    const UndirectedEdge& b = m.adjacencies[static_cast<std::size_t>(e2)];
    f << " cross_" << p << ":";
    bool any = false;
    for (auto [i, j] : {std::pair(a.u, a.v), std::pair(a.v, a.u), std::pair(b.u, b.v),
                        std::pair(b.v, b.u)}) {
      if (m.arc_index(i, j) >= 0) {
        f << (any ? " + " : " ") << MilpModel::x_name(i, j);
        any = true;
      }
    }
    f << " <= 1\n";
  }
  // arc linking
  for (const Arc& a : m.arcs) {
    f << " link_" << a.tail << "_" << a.head << ":";
    for (int k = 1; k <= m.h(a.head); ++k) {
      f << (k == 1 ? " " : " + ") << MilpModel::y_name(k, a.tail, a.head);
    }
    f << " - " << MilpModel::x_name(a.tail, a.head) << " <= 0\n";
  }
  // valid inequalities
  for (int v = 2; v <= m.max_capacity() - 1; ++v) {
    for (NodeId i = m.n_s + 1; i <= m.n_nodes(); ++i) {
      std::ostringstream row;
      bool any = false;
      for (const Arc& a : m.arcs) {
        if (a.tail == i) {
          for (int k = v + 1; k <= m.h(a.head); ++k) {
            const int coeff = (k - 1) / v;
            if (coeff == 0) continue;
            row << " - " << coeff << " " << MilpModel::y_name(k, a.tail, a.head);
            any = true;
          }
        } else if (a.head == i) {
          for (int k = v; k <= m.h(i); ++k) {
            row << (any ? " + " : " ") << MilpModel::y_name(k, a.tail, a.head);
            any = true;
          }
        }
      }
      if (!any) continue;
      f << " valid_" << v << "_" << i << ":" << row.str() << " <= 0\n";
    }
  }
  f << "Binary\n";
  for (const Arc& a : m.arcs) {
    f << " " << MilpModel::x_name(a.tail, a.head) << "\n";
    for (int k = 1; k <= m.h(a.head); ++k) {
      f << " " << MilpModel::y_name(k, a.tail, a.head) << "\n";
    }
  }
  f << "End\n";
  if (!f) throw IoFailure("write failed: " + path);
}

struct EvalResult {
  double objective = 0.0;
  std::vector<std::string> violated;
};

// Objective and full constraint audit of a sparse binary assignment
// (unlisted variables are zero, unknown names are ignored). The map is decoded
// into per-arc arrays up front so the constraint sweeps stay numeric.
inline EvalResult evaluate_assignment(const MilpModel& m,
                                      const std::unordered_map<std::string, double>& assignment) {
  std::vector<double> x(m.arcs.size(), 0.0);
  std::vector<std::vector<double>> y(m.arcs.size());
  for (std::size_t i = 0; i < m.arcs.size(); ++i) {
    y[i].assign(static_cast<std::size_t>(m.h(m.arcs[i].head)) + 1, 0.0);
  }
  for (const auto& [name, value] : assignment) {
    int fields[3] = {0, 0, 0};
    int n_fields = 0;
    std::size_t pos = name.find('_');
    while (pos != std::string::npos && n_fields < 3) {
      fields[n_fields++] = std::atoi(name.c_str() + pos + 1);
      pos = name.find('_', pos + 1);
    }
    if (name.rfind("x_", 0) == 0 && n_fields == 2) {
      int idx = m.arc_index(fields[0], fields[1]);
      if (idx >= 0) x[static_cast<std::size_t>(idx)] = value;
    } else if (name.rfind("y_", 0) == 0 && n_fields == 3) {
      int idx = m.arc_index(fields[1], fields[2]);
      const int k = fields[0];
      if (idx >= 0 && k >= 1 && k < static_cast<int>(y[static_cast<std::size_t>(idx)].size())) {
        y[static_cast<std::size_t>(idx)][static_cast<std::size_t>(k)] = value;
      }
    }
  }

  EvalResult res;
  for (std::size_t ai = 0; ai < m.arcs.size(); ++ai) {
    const Arc& a = m.arcs[ai];
    for (int k = 1; k <= m.h(a.head); ++k) {
      if (y[ai][static_cast<std::size_t>(k)] > 0.5) {
        res.objective += m.catalog.step_cost(a.length_km, k);
      }
    }
  }
  const int n = m.n_nodes();
  std::vector<double> deg(static_cast<std::size_t>(n + 1), 0.0);
  std::vector<double> flow(static_cast<std::size_t>(n + 1), 0.0);
  for (std::size_t ai = 0; ai < m.arcs.size(); ++ai) {
    const Arc& a = m.arcs[ai];
    for (int k = 1; k <= m.h(a.head); ++k) {
      const double v = y[ai][static_cast<std::size_t>(k)];
      deg[static_cast<std::size_t>(a.tail)] += v;
      flow[static_cast<std::size_t>(a.tail)] += k * v;
      flow[static_cast<std::size_t>(a.head)] -= k * v;
    }
  }
  for (NodeId i = m.n_s + 1; i <= n; ++i) {
    if (std::abs(deg[static_cast<std::size_t>(i)] - 1.0) > 1e-9)
      res.violated.push_back("deg_" + std::to_string(i));
    if (std::abs(flow[static_cast<std::size_t>(i)] - 1.0) > 1e-9)
      res.violated.push_back("flow_" + std::to_string(i));
  }
  for (int p = 0; p < static_cast<int>(m.crossing_pairs.size()); ++p) {
    const auto& [e1, e2] = m.crossing_pairs[static_cast<std::size_t>(p)];
    const UndirectedEdge& a = m.adjacencies[static_cast<std::size_t>(e1)];
    const UndirectedEdge& b = m.adjacencies[static_cast<std::size_t>(e2)];
    double sum = 0.0;
    for (auto [i, j] : {std::pair(a.u, a.v), std::pair(a.v, a.u), std::pair(b.u, b.v),
                        std::pair(b.v, b.u)}) {
      int idx = m.arc_index(i, j);
      if (idx >= 0) sum += x[static_cast<std::size_t>(idx)];
    }
    if (sum > 1.0 + 1e-9) res.violated.push_back("cross_" + std::to_string(p));
  }
  for (std::size_t ai = 0; ai < m.arcs.size(); ++ai) {
    const Arc& a = m.arcs[ai];
    double ysum = 0.0;
    for (int k = 1; k <= m.h(a.head); ++k) ysum += y[ai][static_cast<std::size_t>(k)];
    if (ysum - x[ai] > 1e-9) {
      res.violated.push_back("link_" + std::to_string(a.tail) + "_" + std::to_string(a.head));
    }
  }
  for (int v = 2; v <= m.max_capacity() - 1; ++v) {
    std::vector<double> lhs(static_cast<std::size_t>(n + 1), 0.0);
    for (std::size_t ai = 0; ai < m.arcs.size(); ++ai) {
      const Arc& a = m.arcs[ai];
      for (int k = v + 1; k <= m.h(a.head); ++k) {
        lhs[static_cast<std::size_t>(a.tail)] -= ((k - 1) / v) * y[ai][static_cast<std::size_t>(k)];
      }
      for (int k = v; k <= m.h(a.head); ++k) {
        lhs[static_cast<std::size_t>(a.head)] += y[ai][static_cast<std::size_t>(k)];
      }
    }
    for (NodeId i = m.n_s + 1; i <= n; ++i) {
      if (lhs[static_cast<std::size_t>(i)] > 1e-9) {
        res.violated.push_back("valid_" + std::to_string(v) + "_" + std::to_string(i));
      }
    }
  }
  return res;
}

}  // namespace owcs
