#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "nartplan/gridworld.hpp"
#include "nartplan/runner.hpp"
#include "nartplan/scenario.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitPlanning = 3;

int cmd_run(const std::string& scenario_path, const std::string& out_dir, int parallel) {
  nartplan::Scenario scenario;
  try {
    scenario = nartplan::load_scenario_file(scenario_path);
  } catch (const std::exception& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  }
  try {
    nartplan::RunResult result = nartplan::run_scenario(scenario, out_dir, parallel);
    for (const nartplan::TrialResult& t : result.trials) {
      std::cout << "trial " << t.trial << " seed " << t.seed << " J=" << t.objective
                << " TPOC=" << t.metrics.TPOC << " ETR=" << t.metrics.ETR << "\n";
    }
    std::cout << "wrote " << result.directory << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "planning error: " << e.what() << "\n";
    return kExitPlanning;
  }
}

int cmd_validate(const std::string& scenario_path) {
  try {
    nartplan::Scenario scenario = nartplan::load_scenario_file(scenario_path);
    nartplan::GridWorld grid = nartplan::build_grid(scenario);
    std::cout << "scenario ok: use_case=" << nartplan::use_case_name(scenario.use_case)
              << " uavs=" << scenario.uav_count << " trials=" << scenario.trials << " grid="
              << grid.width() << "x" << grid.height() << " total_poc=" << grid.total_poc()
              << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  }
}

int cmd_compare(const std::vector<std::string>& dirs, const std::string& out_file) {
  try {
    nartplan::compare_runs(dirs, out_file);
    std::cout << "wrote " << out_file << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "compare error: " << e.what() << "\n";
    return kExitValidation;
  }
}

int cmd_gen_map(const std::string& kind, int width, int height, double cell_size,
                double total_poc, std::uint64_t seed, const std::string& out_file) {
  try {
    nartplan::GridWorld grid =
        kind == "uniform"
            ? nartplan::make_uniform_map(width, height, cell_size, total_poc)
            : nartplan::make_clustered_map(width, height, cell_size, total_poc, seed);
    nartplan::save_poc_map_file(grid, out_file);
    std::cout << "wrote " << out_file << " (total poc " << grid.total_poc() << ")\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "gen-map error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trajectory optimizer and mission simulator for cooperative aerial robot teams"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir = "out";
  int parallel = 1;
  auto* run = app.add_subcommand("run", "Run every trial of a scenario");
  run->add_option("scenario", scenario_path, "Scenario file")->required();
  run->add_option("-o,--out", out_dir, "Output directory");
  run->add_option("--parallel-trials", parallel, "Concurrent trials");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Parse and validate a scenario");
  validate->add_option("scenario", validate_path, "Scenario file")->required();

  std::vector<std::string> compare_dirs;
  std::string compare_out = "comparison.csv";
  auto* compare = app.add_subcommand("compare", "Tabulate metrics across runs");
  compare->add_option("dirs", compare_dirs, "Run directories (first is the baseline)")
      ->required()
      ->expected(-2);
  compare->add_option("-o,--out", compare_out, "Comparison CSV");

  std::string map_kind = "uniform";
  int map_width = 20;
  int map_height = 20;
  double map_cell = 100.0;
  double map_poc = 0.648;
  std::uint64_t map_seed = 1;
  std::string map_out = "map.grid";
  auto* gen = app.add_subcommand("gen-map", "Generate a probability-of-containment map");
  gen->add_option("--kind", map_kind, "uniform or clustered")
      ->check(CLI::IsMember({"uniform", "clustered"}));
  gen->add_option("--width", map_width, "Grid width in cells");
  gen->add_option("--height", map_height, "Grid height in cells");
  gen->add_option("--cell-size", map_cell, "Cell size in meters");
  gen->add_option("--total-poc", map_poc, "Total probability mass");
  gen->add_option("--seed", map_seed, "Generator seed");
  gen->add_option("-o,--out", map_out, "Output map file");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return cmd_run(scenario_path, out_dir, parallel);
  if (validate->parsed()) return cmd_validate(validate_path);
  if (compare->parsed()) return cmd_compare(compare_dirs, compare_out);
  if (gen->parsed()) {
    return cmd_gen_map(map_kind, map_width, map_height, map_cell, map_poc, map_seed, map_out);
  }
  return 0;
}
