#ifndef NARTPLAN_SCENARIO_HPP
#define NARTPLAN_SCENARIO_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nartplan/fleet.hpp"
#include "nartplan/gridworld.hpp"
#include "nartplan/planner.hpp"
#include "nartplan/radio.hpp"

namespace nartplan {

/// Team compositions: UAVs alone (baseline planning, or with mutual
/// incentives), or supported by a static/mobile external entity. The tag
/// fixes roles, cooperation weights, and the role-based flag.
enum class UseCase { Baseline, MUG, SEE, MEE1, MEE2 };

std::string use_case_name(UseCase u);
UseCase parse_use_case(const std::string& name);

struct MapSpec {
  std::string file;  // wins over generation when non-empty
  std::string kind = "uniform";
  int width = 20;
  int height = 20;
  double cell_size_m = 100.0;
  double total_poc = 0.648;
  std::uint64_t seed = 1;
};

struct Scenario {
  UseCase use_case = UseCase::Baseline;
  MapSpec map;
  int uav_count = 3;
  double uav_energy = 2000.0;
  double pod = 0.63;
  double delta_z = kDefaultDeltaZ;
  int adjacency = 8;
  std::vector<CellIndex> see_positions;  // one per trial (wrapping), S-EE only
  int trials = 1;
  std::vector<std::uint64_t> seeds;
  RadioConfig radio;
  ObjectiveConfig objective;  // w1/w2/role_based filled from the use case
  AnnealConfig anneal;
  EnergyModel energy;
  AttractionConfig attraction;

  void validate() const;
};

/// Flat `key = value` text format; `#` starts a comment. Unknown keys are
/// rejected. Applies the use-case row (weights, roles, role-based flag).
Scenario parse_scenario(const std::string& text);
Scenario load_scenario_file(const std::string& path);

/// Default static-EE placements: grid center plus the four edge midpoints.
std::vector<CellIndex> default_see_positions(int width, int height);

GridWorld build_grid(const Scenario& scenario);

/// Agent roster for one trial (UAVs first, then the EE when the use case
/// has one).
std::vector<AgentSpec> build_roster(const Scenario& scenario, int trial);

std::string scenario_to_json(const Scenario& scenario);

}  // namespace nartplan

#endif
