#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "owcs/io.hpp"
#include "owcs/pipeline.hpp"
#include "owcs/random_instance.hpp"

namespace {

owcs::CableCatalog parse_catalog(const std::vector<std::string>& specs) {
  std::vector<owcs::CableType> cables;
  for (const std::string& s : specs) {
    auto colon = s.find(':');
    if (colon == std::string::npos) throw CLI::ValidationError("cable must be capacity:cost_per_km");
    cables.push_back({std::stoi(s.substr(0, colon)), std::stod(s.substr(colon + 1))});
  }
  return owcs::CableCatalog::normalize(cables);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Offshore collection-system cable network designer"};
  app.require_subcommand(1);

  // run: full pipeline on an instance file
  auto* run = app.add_subcommand("run", "Design a cable network for an instance file");
  std::string instance_path, out_dir;
  bool export_milp = false, plot = false, refine_off = false;
  int neighbors = -1, max_feeders = -1;
  run->add_option("--instance", instance_path, "Instance JSON file")->required();
  run->add_option("--out", out_dir, "Output directory for artifacts");
  run->add_flag("--export-milp", export_milp, "Write LP model and warm-start files");
  run->add_flag("--plot", plot, "Write an SVG per pipeline stage");
  run->add_flag("--nccrh-off", refine_off, "Skip the cycle-cancelling refinement stage");
  run->add_option("--neighbors", neighbors, "Candidate-graph truncation (nearest turbines)");
  run->add_option("--max-feeders", max_feeders, "Report-only feeder limit per substation");

  // gen: synthetic instance
  auto* gen = app.add_subcommand("gen", "Generate a random instance file");
  std::uint64_t seed = 1;
  int n_t = 74, n_s = 1;
  double width = 7000, height = 7000, min_sep = 400;
  std::string gen_out = "instance.json";
  std::vector<std::string> cable_specs{"7:0.37", "11:0.39", "13:0.43"};
  gen->add_option("--seed", seed, "Random seed");
  gen->add_option("--turbines", n_t, "Number of turbines");
  gen->add_option("--substations", n_s, "Number of substations");
  gen->add_option("--width", width, "Area width in meters");
  gen->add_option("--height", height, "Area height in meters");
  gen->add_option("--min-sep", min_sep, "Minimum node separation in meters");
  gen->add_option("--cable", cable_specs, "Cable as capacity:cost_per_km (repeatable)");
  gen->add_option("--out", gen_out, "Output instance file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      owcs::Instance inst = owcs::load_instance(instance_path);
      owcs::PipelineOptions opt;
      opt.out_dir = out_dir;
      opt.export_milp = export_milp;
      opt.plot = plot;
      opt.refine_enabled = !refine_off;
      if (neighbors > 0) opt.neighbors = neighbors;
      if (max_feeders > 0) opt.max_feeders = max_feeders;
      owcs::PipelineResult res = owcs::run_pipeline(inst, opt);
      for (const owcs::StageReport& s : res.stages) {
        std::cout << s.name << ": cost " << s.cost << " M, " << s.time_ms << " ms";
        if (s.crossings > 0) std::cout << ", " << s.crossings << " crossings";
        if (s.name == "refine") std::cout << ", " << s.iterations << " improvements";
        std::cout << "\n";
      }
      if (res.exit_code == 2) {
        std::cerr << "repair could not remove all crossings; design infeasible\n";
      }
      return res.exit_code;
    }
    if (gen->parsed()) {
      owcs::Instance inst = owcs::generate_random_instance(seed, n_t, n_s, width, height,
                                                           parse_catalog(cable_specs), min_sep);
      std::ofstream f(gen_out);
      if (!f) throw std::runtime_error("cannot open " + gen_out);
      f << owcs::instance_to_json(inst).dump(2) << "\n";
      std::cout << "wrote " << gen_out << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
