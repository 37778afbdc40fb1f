// Acceptance gate: one line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "owcs/milp.hpp"
#include "owcs/oracle.hpp"
#include "owcs/pipeline.hpp"
#include "owcs/random_instance.hpp"

using namespace owcs;

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("criterion %d: %s - %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  if (!pass) ++g_failures;
}

CableCatalog benchmark_catalog(int i) {
  static const std::vector<std::vector<CableType>> sets{
      {{7, 0.37}, {11, 0.39}, {13, 0.43}}, {{7, 0.44}, {12, 0.45}},
      {{10, 0.44}, {14, 0.62}},            {{5, 0.41}, {10, 0.61}},
      {{4, 0.38}, {9, 0.63}},              {{4, 0.37}, {6, 0.39}, {8, 0.43}},
      {{6, 0.44}, {8, 0.62}},              {{7, 0.38}, {15, 0.63}},
      {{7, 0.44}, {10, 0.62}},
  };
  return CableCatalog::normalize(sets[static_cast<std::size_t>(i) % sets.size()]);
}

Instance sized_layout(std::uint64_t seed, int n_t, int n_s, const CableCatalog& cat) {
  const double side = 900.0 * std::sqrt(static_cast<double>(n_t + n_s));
  return generate_random_instance(seed, n_t, n_s, side, side, cat, 350.0);
}

struct SuiteRun {
  Instance inst;
  PipelineResult result;
};

// exact parametric intersection over the supporting lines, independent of the
// production predicate
bool oracle_cross(const Segment& s1, const Segment& s2) {
  if (s1.na == s2.na || s1.na == s2.nb || s1.nb == s2.na || s1.nb == s2.nb) return false;
  const double rx = s1.b.x - s1.a.x, ry = s1.b.y - s1.a.y;
  const double sx = s2.b.x - s2.a.x, sy = s2.b.y - s2.a.y;
  const double denom = rx * sy - ry * sx;
  const double qpx = s2.a.x - s1.a.x, qpy = s2.a.y - s1.a.y;
  if (denom != 0.0) {
    const double t = (qpx * sy - qpy * sx) / denom;
    const double u = (qpx * ry - qpy * rx) / denom;
    return t >= 0.0 && t <= 1.0 && u >= 0.0 && u <= 1.0;
  }
  if (qpx * ry - qpy * rx != 0.0) return false;
  const double len2 = rx * rx + ry * ry;
  double t0 = (qpx * rx + qpy * ry) / len2;
  double t1 = t0 + (sx * rx + sy * ry) / len2;
  if (t0 > t1) std::swap(t0, t1);
  return t1 >= 0.0 && t0 <= 1.0;
}

// -------- criterion 1: feasibility sweep --------
std::vector<SuiteRun> criterion_1() {
  const int sizes[] = {20, 40, 60, 80};
  std::vector<SuiteRun> runs;
  int exit0 = 0, checked_ok = 0, feasible_total = 0;
  double worst_ms = 0.0;
  bool time_ok = true;
  for (int i = 0; i < 200; ++i) {
    const int n_t = sizes[i % 4];
    const int n_s = 1 + (i / 4) % 2;
    Instance inst = sized_layout(1000 + static_cast<std::uint64_t>(i), n_t, n_s,
                                 benchmark_catalog(i));
    auto t0 = std::chrono::steady_clock::now();
    PipelineResult res = run_pipeline(inst);
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    worst_ms = std::max(worst_ms, ms);
    if (ms >= 120000.0) time_ok = false;
    if (res.exit_code == 0) {
      ++exit0;
      ++feasible_total;
      DesignReport rep = check_design(res.design, inst);
      if (rep.feasible()) ++checked_ok;
    }
    runs.push_back({std::move(inst), std::move(res)});
  }
  const bool pass = exit0 >= 190 && checked_ok == feasible_total && time_ok;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "%d/200 designs feasible (need 190), %d/%d pass the full check, "
                "slowest run %.1f s (limit 120)",
                exit0, checked_ok, feasible_total, worst_ms / 1000.0);
  report(1, pass, buf);
  return runs;
}

// -------- criterion 2: monotone refinement --------
void criterion_2(const std::vector<SuiteRun>& runs) {
  int steps = 0, bad = 0, raised = 0;
  for (const SuiteRun& r : runs) {
    if (r.result.exit_code != 0) continue;
    double repaired_cost = -1.0;
    for (const StageReport& s : r.result.stages) {
      if (s.name != "refine") repaired_cost = s.cost;
    }
    const StageReport& last = r.result.stages.back();
    if (last.name == "refine" && repaired_cost >= 0 && last.cost > repaired_cost + 1e-9) ++raised;
    for (const RefineStep& s : r.result.refine.steps) {
      ++steps;
      if (!(s.cost_after < s.cost_before)) ++bad;
      const double delta = s.cost_after - s.cost_before;
      const double scale = std::max({std::abs(delta), std::abs(s.cycle_cost), 1e-6});
      if (std::abs(delta - s.cycle_cost) / scale > 1e-6) ++bad;
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "%d committed refinement steps, %d non-monotone or mispriced, "
                "%d runs ended above their repaired cost",
                steps, bad, raised);
  report(2, bad == 0 && raised == 0, buf);
}

// -------- criterion 3: tiny-instance oracle equivalence --------
void criterion_3() {
  int runs_done = 0, optimum_hits = 0, stage_violations = 0;
  for (int i = 0; i < 50; ++i) {
    const int n_t = 4 + i % 4;  // 4..7
    Instance inst = sized_layout(3000 + static_cast<std::uint64_t>(i), n_t, 1,
                                 benchmark_catalog(i));
    inst.neighbor_truncation = n_t - 1;
    oracle::ExactResult exact = oracle::exact_design(inst);
    if (!exact.feasible) continue;
    PipelineResult res = run_pipeline(inst);
    ++runs_done;
    for (const StageReport& s : res.stages) {
      // the oracle optimizes over crossing-free trees; compare like with like
      if (s.crossings == 0 && s.cost < exact.cost - 1e-9) ++stage_violations;
    }
    if (res.exit_code == 0 &&
        std::abs(res.final_report.total_cost - exact.cost) <= 1e-6 * std::max(1.0, exact.cost)) {
      ++optimum_hits;
    }
  }
  // regression floor frozen from the measured rate of 46/50, with slack for
  // future tie-breaking changes; the hard minimum is 30%
  const int floor_hits = std::max((runs_done * 30 + 99) / 100, (runs_done * 84) / 100);
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "%d/%d pipeline runs reach the exact optimum (floor %d), "
                "%d stage costs beat the oracle",
                optimum_hits, runs_done, floor_hits, stage_violations);
  report(3, runs_done >= 40 && optimum_hits >= floor_hits && stage_violations == 0, buf);
}

// -------- criterion 4: classic cycle cancelling vs brute force --------
double brute_force_mcf(const oracle::McfProblem& p) {
  std::vector<int> flow(p.arcs.size(), 0);
  double best = std::numeric_limits<double>::infinity();
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == p.arcs.size()) {
      if (oracle::mcf_feasible(p, flow)) best = std::min(best, oracle::mcf_cost(p, flow));
      return;
    }
    for (int v = 0; v <= p.arcs[i].capacity; ++v) {
      flow[i] = v;
      rec(i + 1);
    }
    flow[i] = 0;
  };
  rec(0);
  return best;
}

void criterion_4() {
  int mismatches = 0;
  rng_detail::SplitMix64 rng(404);
  for (int t = 0; t < 100; ++t) {
    oracle::McfProblem p;
    p.n_nodes = 4 + static_cast<int>(rng.below(3));
    p.demand.assign(static_cast<std::size_t>(p.n_nodes + 1), 0);
    const int units = 1 + static_cast<int>(rng.below(3));
    p.demand[1] = -units;
    p.demand[static_cast<std::size_t>(p.n_nodes)] = units;
    for (int v = 1; v < p.n_nodes; ++v) {
      p.arcs.push_back({v, v + 1, 4, rng.uniform(0.0, 3.0)});
    }
    const int extras = static_cast<int>(rng.below(5));
    for (int e = 0; e < extras; ++e) {
      int a = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(p.n_nodes)));
      int b = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(p.n_nodes)));
      if (a == b) continue;
      p.arcs.push_back({a, b, 1 + static_cast<int>(rng.below(4)), rng.uniform(0.0, 3.0)});
    }
    std::vector<int> init(p.arcs.size(), 0);
    for (int v = 0; v < p.n_nodes - 1; ++v) init[static_cast<std::size_t>(v)] = units;
    std::vector<int> flow = oracle::classic_ncc(p, init);
    const double best = brute_force_mcf(p);
    if (!oracle::mcf_feasible(p, flow) ||
        std::abs(oracle::mcf_cost(p, flow) - best) > 1e-9 * std::max(1.0, best)) {
      ++mismatches;
    }
  }
  char buf[120];
  std::snprintf(buf, sizeof(buf), "100 random min-cost-flow networks, %d mismatches", mismatches);
  report(4, mismatches == 0, buf);
}

// -------- criterion 5: model audit --------
void criterion_5(const std::vector<SuiteRun>& runs) {
  int audited = 0, violated = 0, off_objective = 0;
  for (const SuiteRun& r : runs) {
    if (r.result.exit_code != 0) continue;
    CandidateGraph g = build_candidate_graph(r.inst);
    MilpModel m = build_milp(r.inst, g);
    EvalResult eval = evaluate_assignment(m, assignment_from_tree(r.result.design, m));
    ++audited;
    if (!eval.violated.empty()) ++violated;
    const double cost = r.result.final_report.total_cost;
    if (std::abs(eval.objective - cost) > 1e-6 * std::max(1.0, cost)) ++off_objective;
  }

  // random feasible trees must also clear the load-splitting inequalities
  rng_detail::SplitMix64 rng(505);
  int trees = 0, cut = 0;
  long attempts = 0;
  while (trees < 1000 && attempts < 200000) {
    ++attempts;
    const int n_t = 5 + static_cast<int>(rng.below(6));  // 5..10
    Instance inst = sized_layout(rng.next(), n_t, 1, benchmark_catalog(static_cast<int>(rng.below(9))));
    inst.neighbor_truncation = n_t - 1;
    CandidateGraph g = build_candidate_graph(inst);

    // random parent per turbine among its candidate neighbors
    EdgeMatrix tree;
    bool ok = true;
    for (NodeId t = 2; t <= inst.n_nodes(); ++t) {
      const auto& adj = g.undirected_adj[static_cast<std::size_t>(t)];
      if (adj.empty()) {
        ok = false;
        break;
      }
      const UndirectedEdge& e =
          g.edges[static_cast<std::size_t>(adj[rng.below(adj.size())])];
      const NodeId p = e.u == t ? e.v : e.u;
      tree.push_back({p, t, e.length_km, -1, -1});
    }
    if (!ok || !check_detail::capacitated_forest_ok(tree, inst)) continue;
    if (!all_crossings(segments_of(tree, inst)).empty()) continue;
    EdgeMatrix sized = assign_cables(tree, inst);
    MilpModel m = build_milp(inst, g);
    EvalResult eval = evaluate_assignment(m, assignment_from_tree(sized, m));
    ++trees;
    for (const std::string& c : eval.violated) {
      if (c.rfind("valid_", 0) == 0) {
        ++cut;
        break;
      }
    }
  }
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "%d designs audited, %d with violations, %d with objective drift; "
                "%d/1000 random feasible trees, %d cut by the load inequalities",
                audited, violated, off_objective, trees, cut);
  report(5, violated == 0 && off_objective == 0 && trees == 1000 && cut == 0, buf);
}

// -------- criterion 6: external benchmark layouts --------
void criterion_6() {
  std::printf(
      "criterion 6: SKIP - published benchmark layout coordinates are not available in this "
      "environment; criteria 1-5 form the acceptance gate\n");
}

// -------- criterion 7: geometry robustness --------
void criterion_7() {
  rng_detail::SplitMix64 rng(707);
  int disagreements = 0;
  for (int i = 0; i < 10000; ++i) {
    Segment a{{rng.uniform(0, 100), rng.uniform(0, 100)},
              {rng.uniform(0, 100), rng.uniform(0, 100)},
              1,
              2};
    Segment b{{rng.uniform(0, 100), rng.uniform(0, 100)},
              {rng.uniform(0, 100), rng.uniform(0, 100)},
              3,
              4};
    if (segments_cross(a, b) != oracle_cross(a, b)) ++disagreements;
  }

  struct Fixed {
    Segment a, b;
    bool expect;
  };
  auto seg = [](double ax, double ay, double bx, double by, NodeId na, NodeId nb) {
    return Segment{{ax, ay}, {bx, by}, na, nb};
  };
  const std::vector<Fixed> battery{
      {seg(0, 0, 2, 2, 1, 2), seg(0, 2, 2, 0, 3, 4), true},          // proper crossing
      {seg(0, 0, 1, 1, 1, 2), seg(1, 1, 2, 0, 2, 3), false},         // shared node
      {seg(0, 0, 1, 1, 1, 2), seg(1, 1, 2, 0, 5, 3), true},          // same point, other ids
      {seg(0, 0, 2, 0, 1, 2), seg(1, 0, 3, 0, 3, 4), true},          // collinear overlap
      {seg(0, 0, 1, 0, 1, 2), seg(2, 0, 3, 0, 3, 4), false},         // collinear disjoint
      {seg(0, 0, 1, 0, 1, 2), seg(1, 0, 2, 0, 3, 4), true},          // collinear touch
      {seg(0, 0, 2, 0, 1, 2), seg(1, -1, 1, 1, 3, 4), true},         // transversal
      {seg(0, 0, 2, 0, 1, 2), seg(1, 0, 1, 1, 3, 4), true},          // T-junction on edge
      {seg(0, 0, 2, 0, 1, 2), seg(2, 0, 2, 1, 3, 4), true},          // T at endpoint
      {seg(0, 0, 2, 0, 1, 2), seg(1, 1, 1, 2, 3, 4), false},         // above, no contact
      {seg(0, 0, 0, 2, 1, 2), seg(0, 1, 0, 3, 3, 4), true},          // vertical overlap
      {seg(0, 0, 0, 1, 1, 2), seg(0, 2, 0, 3, 3, 4), false},         // vertical disjoint
      {seg(0, 0, 4, 4, 1, 2), seg(2, 2, 6, 6, 3, 4), true},          // diagonal overlap
      {seg(0, 0, 1, 1, 1, 2), seg(2, 2, 3, 3, 3, 4), false},         // diagonal disjoint
      {seg(0, 0, 2, 2, 1, 2), seg(1, 1, 3, 0, 3, 4), true},          // interior touch
      {seg(0, 0, 2, 2, 1, 2), seg(2, 2, 3, 3, 2, 4), false},         // shared node collinear
      {seg(0, 0, 2, 2, 1, 2), seg(2, 2, 3, 3, 5, 4), true},          // same point touch
      {seg(0, 0, 1, 0, 1, 2), seg(0, 1, 1, 1, 3, 4), false},         // parallel apart
      {seg(0, 0, 10, 1, 1, 2), seg(0, 1, 10, 0, 3, 4), true},        // shallow crossing
      {seg(-1, -1, 1, 1, 1, 2), seg(-1, 1, 1, -1, 3, 4), true},      // crossing at origin
  };
  int battery_failures = 0;
  for (const Fixed& f : battery) {
    if (segments_cross(f.a, f.b) != f.expect) ++battery_failures;
    if (segments_cross(f.a, f.b) != oracle_cross(f.a, f.b)) ++battery_failures;
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "10000 random segment pairs, %d oracle disagreements; %d degenerate-case failures",
                disagreements, battery_failures);
  report(7, disagreements == 0 && battery_failures == 0, buf);
}

}  // namespace

int main() {
  std::vector<SuiteRun> runs = criterion_1();
  criterion_2(runs);
  criterion_3();
  criterion_4();
  criterion_5(runs);
  criterion_6();
  criterion_7();
  return g_failures == 0 ? 0 : 1;
}
