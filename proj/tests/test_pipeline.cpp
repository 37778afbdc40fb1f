#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "owcs/io.hpp"
#include "owcs/pipeline.hpp"
#include "test_support.hpp"

using namespace owcs;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream f(path);
  REQUIRE(f.good());
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(std::string name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("feasible run exits zero with all stage rows") {
  auto inst = test_support::random_layout(901, 30, 1, test_support::catalog_7_11_13());
  auto res = run_pipeline(inst);
  CHECK(res.exit_code == 0);
  CHECK(res.final_report.feasible());
  REQUIRE_FALSE(res.stages.empty());
  CHECK(res.stages.front().name == "construct");
  CHECK(res.stages.back().name == "refine");
  // refine never raises the cost
  CHECK(res.stages.back().gain_pct <= 1e-9);
  for (const StageReport& s : res.stages) CHECK(s.ran);
}

TEST_CASE("refine can be disabled") {
  auto inst = test_support::random_layout(902, 25, 1, test_support::catalog_4_9());
  PipelineOptions opt;
  opt.refine_enabled = false;
  auto res = run_pipeline(inst, opt);
  CHECK(res.exit_code == 0);
  for (const StageReport& s : res.stages) CHECK(s.name != "refine");
}

TEST_CASE("artifacts are written and consistent") {
  TempDir dir("owcs_pipe_artifacts");
  auto inst = test_support::random_layout(903, 20, 1, test_support::catalog_7_11_13());
  PipelineOptions opt;
  opt.out_dir = dir.path.string();
  opt.export_milp = true;
  opt.plot = true;
  auto res = run_pipeline(inst, opt);
  REQUIRE(res.exit_code == 0);
  CHECK(fs::exists(dir.path / "design.json"));
  CHECK(fs::exists(dir.path / "check.json"));
  CHECK(fs::exists(dir.path / "report.csv"));
  CHECK(fs::exists(dir.path / "model.lp"));
  CHECK(fs::exists(dir.path / "warmstart.txt"));
  for (const StageReport& s : res.stages) {
    CHECK(fs::exists(dir.path / (s.name + ".svg")));
  }

  auto design = nlohmann::json::parse(slurp(dir.path / "design.json"));
  CHECK(design.at("cost").get<double>() ==
        doctest::Approx(res.final_report.total_cost));
  CHECK(design.at("edges").size() == res.design.size());

  auto check = nlohmann::json::parse(slurp(dir.path / "check.json"));
  CHECK(check.at("feasible").get<bool>());

  const std::string csv = slurp(dir.path / "report.csv");
  CHECK(csv.rfind("stage,sol_meur,time_ms,crossings,iterations,gain_pct\n", 0) == 0);
  CHECK(csv.find("construct,") != std::string::npos);

  // warm start audits clean against the exported model
  auto g = build_candidate_graph(inst);
  auto m = build_milp(inst, g);
  auto eval = evaluate_assignment(m, assignment_from_tree(res.design, m));
  CHECK(eval.violated.empty());
  CHECK(eval.objective == doctest::Approx(res.final_report.total_cost).epsilon(1e-6));
}

TEST_CASE("design json bytes are reproducible") {
  TempDir d1("owcs_pipe_rep1");
  TempDir d2("owcs_pipe_rep2");
  auto inst = test_support::random_layout(904, 25, 2, test_support::catalog_7_11_13());
  PipelineOptions o1, o2;
  o1.out_dir = d1.path.string();
  o2.out_dir = d2.path.string();
  auto r1 = run_pipeline(inst, o1);
  auto r2 = run_pipeline(inst, o2);
  CHECK(r1.exit_code == r2.exit_code);
  CHECK(slurp(d1.path / "design.json") == slurp(d2.path / "design.json"));
  CHECK(slurp(d1.path / "check.json") == slurp(d2.path / "check.json"));
}

TEST_CASE("unrepairable crossings exit with code 2 and a partial report") {
  // the X layout whose swaps all fail capacity; feed it as a raw instance and
  // force the crossing via a pre-built tree is not possible through the
  // pipeline, so check the pipeline surface only for feasibility reporting
  TempDir dir("owcs_pipe_infeasible");
  auto cat = test_support::make_catalog({{2, 1.0}});
  auto inst = test_support::make_instance(
      {{0, 0}}, {{-1000, 1500}, {1000, 2500}, {1000, 1500}, {-1000, 2500}}, cat, 1);
  PipelineOptions opt;
  opt.out_dir = dir.path.string();
  auto res = run_pipeline(inst, opt);
  // construct may or may not produce the crossing arrangement; either way the
  // exit code is 0 (clean) or 2 (repair failed), never 1
  CHECK(res.exit_code != 1);
  if (res.exit_code == 2) {
    CHECK(fs::exists(dir.path / "check.json"));
    CHECK(fs::exists(dir.path / "report.csv"));
    CHECK_FALSE(fs::exists(dir.path / "design.json"));
  }
}

TEST_CASE("neighbor override narrows the candidate graph") {
  auto inst = test_support::random_layout(905, 20, 1, test_support::catalog_7_11_13());
  PipelineOptions opt;
  opt.neighbors = 3;
  auto res = run_pipeline(inst, opt);
  CHECK(res.exit_code != 1);
}

TEST_CASE("max feeders is reported but not enforced") {
  auto inst = test_support::random_layout(906, 20, 1, test_support::catalog_7_11_13());
  PipelineOptions opt;
  opt.max_feeders = 1;
  auto res = run_pipeline(inst, opt);
  REQUIRE(res.final_report.feeder_limit_ok.has_value());
  // with 20 turbines and capacity 13 a single feeder cannot suffice
  CHECK_FALSE(*res.final_report.feeder_limit_ok);
  CHECK(res.exit_code == 0);
}

TEST_CASE("instance json round trip") {
  auto inst = test_support::random_layout(907, 12, 2, test_support::catalog_4_9(), 5);
  auto j = instance_to_json(inst);
  auto back = instance_from_json(j);
  CHECK(back.n_s() == inst.n_s());
  CHECK(back.n_t() == inst.n_t());
  CHECK(back.neighbor_truncation == inst.neighbor_truncation);
  for (int i = 0; i < inst.n_nodes(); ++i) {
    CHECK(back.point_of(i + 1).x == inst.point_of(i + 1).x);
    CHECK(back.point_of(i + 1).y == inst.point_of(i + 1).y);
  }
  CHECK(instance_to_json(back) == j);
}

TEST_CASE("instance json requires the core keys") {
  nlohmann::json j;
  j["substations"] = {{0.0, 0.0}};
  j["turbines"] = {{1000.0, 0.0}};
  CHECK_THROWS(instance_from_json(j));  // no cables
  j["cables"] = {{{"capacity", 5}, {"cost_per_km", 0.4}}};
  auto inst = instance_from_json(j);
  CHECK(inst.neighbor_truncation == 15);
}

TEST_CASE("generated instances are byte reproducible") {
  auto cat = test_support::catalog_7_11_13();
  auto a = generate_random_instance(42, 30, 2, 7000, 7000, cat, 400);
  auto b = generate_random_instance(42, 30, 2, 7000, 7000, cat, 400);
  CHECK(instance_to_json(a).dump() == instance_to_json(b).dump());
  auto c = generate_random_instance(43, 30, 2, 7000, 7000, cat, 400);
  CHECK(instance_to_json(a).dump() != instance_to_json(c).dump());
}

TEST_CASE("impossible separation raises placement failure") {
  auto cat = test_support::catalog_7_11_13();
  CHECK_THROWS_AS(generate_random_instance(1, 50, 1, 100, 100, cat, 400), PlacementFailure);
}
