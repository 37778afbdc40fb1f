#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "owcs/candidate_graph.hpp"
#include "owcs/checker.hpp"
#include "owcs/construct.hpp"
#include "owcs/crossing_repair.hpp"
#include "owcs/cycle_refine.hpp"
#include "owcs/io.hpp"
#include "owcs/milp.hpp"
#include "owcs/svg.hpp"

namespace owcs {

struct StageReport {
  std::string name;          // construct / repair / refine
  EdgeMatrix tree;           // design after this stage
  bool ran = false;
  bool feasible = false;
  double cost = 0.0;
  double time_ms = 0.0;
  int crossings = 0;
  int iterations = 0;        // committed refinement cycles
  double gain_pct = 0.0;     // refine stage: cost change vs repaired design
};

struct PipelineOptions {
  std::string out_dir;
  bool export_milp = false;
  bool plot = false;
  bool refine_enabled = true;
  std::optional<int> neighbors;    // overrides the instance truncation
  std::optional<int> max_feeders;  // report-only
};

struct PipelineResult {
  // 0 = feasible design written, 2 = repair could not remove all crossings
  int exit_code = 1;
  std::vector<StageReport> stages;
  EdgeMatrix design;
  DesignReport final_report;
  RefineResult refine;
};

namespace pipeline_detail {

inline double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace pipeline_detail

// Construct, repair crossings when needed, then refine; stage metrics mirror
// the report table. Artifacts (design/report/LP/SVG) are written only when
// out_dir is set.
inline PipelineResult run_pipeline(Instance inst, const PipelineOptions& opt = {}) {
  namespace fs = std::filesystem;
  if (opt.neighbors) inst.neighbor_truncation = *opt.neighbors;
  inst.validate();

  PipelineResult res;
  CandidateGraph g = build_candidate_graph(inst);

  auto t0 = std::chrono::steady_clock::now();
  ConstructResult cons = run_construct(inst, g);
  StageReport sr;
  sr.name = "construct";
  sr.ran = true;
  sr.time_ms = pipeline_detail::ms_since(t0);
  sr.cost = design_cost(cons.tree, inst.catalog);
  sr.crossings = cons.crossing_count;
  sr.feasible = cons.crossing_count == 0;
  sr.tree = cons.tree;
  res.stages.push_back(sr);

  EdgeMatrix current = cons.tree;
  if (cons.crossing_count > 0) {
    t0 = std::chrono::steady_clock::now();
    RepairOutcome rep = repair_crossings(current, inst, g);
    StageReport rr;
    rr.name = "repair";
    rr.ran = true;
    rr.time_ms = pipeline_detail::ms_since(t0);
    rr.feasible = !rep.infeasible;
    rr.cost = rep.infeasible ? sr.cost : design_cost(rep.tree, inst.catalog);
    rr.crossings = rep.infeasible
                       ? static_cast<int>(all_crossings(segments_of(rep.tree, inst)).size())
                       : 0;
    rr.tree = rep.tree;
    res.stages.push_back(rr);
    if (rep.infeasible) {
      res.exit_code = 2;
      res.design = rep.tree;
      res.final_report = check_design(rep.tree, inst, opt.max_feeders);
      if (!opt.out_dir.empty()) {
        fs::create_directories(opt.out_dir);
        const fs::path out(opt.out_dir);
        std::ofstream c(out / "check.json");
        c << report_to_json(res.final_report).dump(2) << "\n";
        std::ofstream f(out / "report.csv");
        f << "stage,sol_meur,time_ms,crossings,iterations,gain_pct\n";
        f.precision(6);
        f << std::fixed;
        for (const StageReport& s : res.stages) {
          f << s.name << "," << s.cost << "," << s.time_ms << "," << s.crossings << ","
            << s.iterations << "," << s.gain_pct << "\n";
        }
      }
      return res;
    }
    current = rep.tree;
  }

  if (opt.refine_enabled) {
    const double cost_before = design_cost(current, inst.catalog);
    t0 = std::chrono::steady_clock::now();
    ForwardArcSet fas = forward_arcs(g);
    FlowAssignment flow = flow_from_tree(current, fas);
    res.refine = refine(std::move(flow), inst, g, fas);
    StageReport nr;
    nr.name = "refine";
    nr.ran = true;
    nr.time_ms = pipeline_detail::ms_since(t0);
    nr.iterations = res.refine.iterations;
    nr.cost = design_cost(res.refine.tree, inst.catalog);
    nr.feasible = true;
    nr.gain_pct = cost_before > 0 ? (nr.cost - cost_before) / cost_before * 100.0 : 0.0;
    nr.tree = res.refine.tree;
    res.stages.push_back(nr);
    current = res.refine.tree;
  }

  res.design = current;
  res.final_report = check_design(current, inst, opt.max_feeders);
  res.exit_code = res.final_report.feasible() ? 0 : 1;

  if (!opt.out_dir.empty()) {
    fs::create_directories(opt.out_dir);
    const fs::path out(opt.out_dir);
    {
      std::ofstream f(out / "design.json");
      f << design_to_json(res.design, res.final_report.total_cost).dump(2) << "\n";
    }
    {
      std::ofstream f(out / "check.json");
      f << report_to_json(res.final_report).dump(2) << "\n";
    }
    {
      std::ofstream f(out / "report.csv");
      f << "stage,sol_meur,time_ms,crossings,iterations,gain_pct\n";
      f.precision(6);
      f << std::fixed;
      for (const StageReport& s : res.stages) {
        f << s.name << "," << s.cost << "," << s.time_ms << "," << s.crossings << ","
          << s.iterations << "," << s.gain_pct << "\n";
      }
    }
    if (opt.export_milp) {
      MilpModel model = build_milp(inst, g);
      std::string ws = warm_start_text(res.design, model);
      write_lp(model, (out / "model.lp").string(), &ws);
      write_warm_start(res.design, model, (out / "warmstart.txt").string());
    }
    if (opt.plot) {
      for (const StageReport& s : res.stages) {
        write_svg(s.tree, inst, (out / (s.name + ".svg")).string());
      }
    }
  }
  return res;
}

}  // namespace owcs
