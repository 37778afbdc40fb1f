#include <doctest.h>

#include "owcs/crossing_repair.hpp"
#include "test_support.hpp"

using namespace owcs;

namespace {

EdgeRow edge(NodeId a, NodeId b, double len) {
  EdgeRow r;
  r.a = a;
  r.b = b;
  r.length_km = len;
  return r;
}

double dist_km(const Instance& inst, NodeId a, NodeId b) {
  return distance(inst.point_of(a), inst.point_of(b)) / 1000.0;
}

}  // namespace

TEST_CASE("crossing table sorts rows by crosser count") {
  // edge 0 crosses both 1 and 2; 1 and 2 cross nothing else
  auto inst = test_support::make_instance(
      {{0, 0}}, {{4000, 0}, {1000, 1000}, {1000, -1000}, {3000, 1000}, {3000, -1000}},
      test_support::catalog_7_11_13(), 15);
  EdgeMatrix tree{edge(1, 2, 4.0), edge(3, 4, 2.0), edge(5, 6, 2.0)};
  // keep the matrix a legal input shape even though it is not a forest here;
  // crossing_table only looks at geometry
  auto rows = crossing_table(tree, inst);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].edge == 0);
  CHECK(rows[0].crossers.size() == 2);
  CHECK(rows[1].crossers.size() == 1);
  CHECK(rows[2].crossers.size() == 1);
}

TEST_CASE("crossing-free input passes through untouched") {
  auto inst = test_support::random_layout(3, 15, 1, test_support::catalog_7_11_13());
  auto g = build_candidate_graph(inst);
  auto res = run_construct(inst, g);
  auto out = repair_crossings(res.tree, inst, g);
  if (res.crossing_count == 0) {
    CHECK_FALSE(out.infeasible);
    CHECK(out.swaps.empty());
    CHECK(design_cost(out.tree, inst) == doctest::Approx(design_cost(res.tree, inst)));
  }
}

TEST_CASE("single crossing is swapped away") {
  auto inst = test_support::make_instance(
      {{0, 0}}, {{2000, 0}, {1000, 1000}, {1000, -1000}}, test_support::catalog_7_11_13(), 3);
  auto g = build_candidate_graph(inst);
  // 1-2 runs under the 3-4 lateral; they cross at (1000, 0)
  EdgeMatrix tree{edge(1, 2, dist_km(inst, 1, 2)), edge(1, 3, dist_km(inst, 1, 3)),
                  edge(3, 4, dist_km(inst, 3, 4))};
  auto out = repair_crossings(tree, inst, g);
  CHECK_FALSE(out.infeasible);
  REQUIRE(out.swaps.size() == 1);
  auto rep = check_design(out.tree, inst);
  CHECK(rep.feasible());
}

TEST_CASE("repair gives up when every swap fails capacity or crosses") {
  // X-shaped crossing; the only non-crossing reconnections would overload the
  // capacity-2 cables, the direct substation links cross the other chain
  auto cat = test_support::make_catalog({{2, 1.0}});
  auto inst = test_support::make_instance(
      {{0, 0}}, {{-1000, 1500}, {1000, 2500}, {1000, 1500}, {-1000, 2500}}, cat, 1);
  auto g = build_candidate_graph(inst);
  EdgeMatrix tree{edge(1, 2, dist_km(inst, 1, 2)), edge(2, 3, dist_km(inst, 2, 3)),
                  edge(1, 4, dist_km(inst, 1, 4)), edge(4, 5, dist_km(inst, 4, 5))};
  REQUIRE(all_crossings(segments_of(tree, inst)).size() == 1);
  auto out = repair_crossings(tree, inst, g);
  CHECK(out.infeasible);
}

TEST_CASE("candidate edges require exactly one orphan endpoint, sorted by length") {
  auto inst = test_support::make_instance(
      {{0, 0}}, {{2000, 0}, {1000, 1000}, {1000, -1000}}, test_support::catalog_7_11_13(), 3);
  auto g = build_candidate_graph(inst);
  EdgeMatrix pruned{edge(1, 3, dist_km(inst, 1, 3)), edge(3, 4, dist_km(inst, 3, 4))};
  std::vector<char> orphan(static_cast<std::size_t>(inst.n_nodes() + 1), 0);
  orphan[2] = 1;
  auto cands = candidate_edges_for(orphan, pruned, g, inst);
  REQUIRE_FALSE(cands.empty());
  for (const UndirectedEdge& e : cands) {
    CHECK((e.u == 2) != (e.v == 2));
  }
  for (std::size_t i = 1; i < cands.size(); ++i) {
    CHECK(cands[i - 1].length_km <= cands[i].length_km);
  }
  // the laterals to 3 and 4 are shorter than the direct substation link
  CHECK(cands[0].length_km == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("orphan detection follows connectivity to substations") {
  auto inst = test_support::make_instance(
      {{0, 0}}, {{1000, 0}, {2000, 0}, {3000, 0}}, test_support::catalog_7_11_13(), 15);
  EdgeMatrix pruned{edge(1, 2, 1.0), edge(3, 4, 1.0)};
  auto orphan = repair_detail::orphan_nodes(pruned, inst);
  CHECK_FALSE(orphan[2]);
  CHECK(orphan[3]);
  CHECK(orphan[4]);
  CHECK_FALSE(orphan[1]);
}

TEST_CASE("repaired designs pass an independent full check") {
  int repaired = 0;
  for (std::uint64_t seed = 200; seed < 230; ++seed) {
    auto inst = test_support::random_layout(seed, 35, 1, test_support::catalog_7_11_13());
    auto g = build_candidate_graph(inst);
    auto res = run_construct(inst, g);
    auto out = repair_crossings(res.tree, inst, g);
    if (out.infeasible) continue;
    auto rep = check_design(out.tree, inst);
    CHECK(rep.c1);
    CHECK(rep.c2);
    CHECK(rep.c3);
    if (res.crossing_count > 0) ++repaired;
  }
  // the sweep must actually exercise the repair path
  CHECK(repaired > 0);
}

TEST_CASE("each swap records the removed and added edge") {
  auto inst = test_support::make_instance(
      {{0, 0}}, {{2000, 0}, {1000, 1000}, {1000, -1000}}, test_support::catalog_7_11_13(), 3);
  auto g = build_candidate_graph(inst);
  EdgeMatrix tree{edge(1, 2, dist_km(inst, 1, 2)), edge(1, 3, dist_km(inst, 1, 3)),
                  edge(3, 4, dist_km(inst, 3, 4))};
  auto out = repair_crossings(tree, inst, g);
  REQUIRE(out.swaps.size() == 1);
  const auto& [removed, added] = out.swaps[0];
  CHECK(std::minmax(removed.a, removed.b) == std::minmax<NodeId>(1, 2));
  CHECK(added.length_km <= dist_km(inst, 1, 2) + 3.0);
}
