#ifndef NARTPLAN_PLANNER_HPP
#define NARTPLAN_PLANNER_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "nartplan/coop.hpp"
#include "nartplan/fleet.hpp"
#include "nartplan/gridworld.hpp"
#include "nartplan/metrics.hpp"
#include "nartplan/radio.hpp"

namespace nartplan {

struct ObjectiveConfig {
  double time_discount_eps = 0.005;  // per-step discount in the objective
  int n_meetings = 4;                // reference exchange count per agent
  double w1 = 0.0;                   // weight of explorer-facing cooperation
  double w2 = 0.0;                   // weight of relay-facing cooperation
  bool role_based = false;           // separate VoM clocks per peer class
  double t_sys_factor = 1.0 / 3.0;   // t_sys = factor * tau

  void validate() const;
};

struct AnnealConfig {
  double t_init = 1.83e-3;
  double t_end = 2.11e-5;
  double cooling = 0.954;
  int chains = 15;
  int moves_per_temp = 200;
  std::uint64_t seed = 0;

  void validate() const;
};

struct AttractionConfig {
  double gamma = 0.5;        // pull of distant unclaimed probability mass
  int start_candidates = 16; // seeded start-set draws scored by spread
};

/// Everything an objective evaluation needs besides the candidate paths.
/// Immutable during optimization; shared read-only across chains.
struct MissionSetup {
  GridWorld grid;
  std::vector<AgentSpec> specs;
  RadioConfig radio;
  ObjectiveConfig objective;
  EnergyModel energy;
  double delta_z = kDefaultDeltaZ;
  std::vector<CellIndex> mobile_ee_loop;  // base loop, adapted to mission length at eval time

  int nart_size() const { return static_cast<int>(specs.size()); }
  void validate() const;
};

struct MissionPlan {
  std::vector<AgentPath> paths;  // indexed by agent id; EE entries may be empty pre-materialize
  double objective = 0.0;
};

/// Dijkstra tour of the AoI vertices hugging the frontier, closed back to
/// the first vertex and adapted to max_path_len.
AgentPath mobile_ee_path(const GridWorld& grid, int max_path_len);

/// Base loop before length adaptation (one full tour of the AoI frontier).
AgentPath mobile_ee_base_loop(const GridWorld& grid);

/// Greedy seeded construction: each UAV in turn walks toward unclaimed
/// probability mass until its energy cannot fund another move.
MissionPlan attraction_init(const GridWorld& grid, const std::vector<AgentSpec>& specs,
                            const EnergyModel& energy, const AttractionConfig& config,
                            std::uint64_t seed);

/// Simulates the mission and returns the objective value. When `trace` is
/// non-null it is filled with the full per-step record (links, exchanges,
/// VoM, cooperation terms).
double evaluate_objective(const MissionPlan& plan, const MissionSetup& setup,
                          MissionTrace* trace = nullptr);

/// Parallel simulated annealing over the UAV paths; EE motion stays fixed.
/// Deterministic for a given (config.seed, chains): the best chain result
/// wins, ties broken by chain index.
MissionPlan optimize(const MissionPlan& initial, const MissionSetup& setup,
                     const AnnealConfig& config);

/// Fills EE path slots (static position held, mobile loop adapted to the
/// longest UAV lifetime) so the plan serializes with one path per agent.
void materialize_ee_paths(MissionPlan& plan, const MissionSetup& setup);

/// Longest UAV lifetime in the plan; mission length for EE adaptation.
int mission_length(const MissionPlan& plan, const MissionSetup& setup);

/// Deterministic seed stream derivation.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace nartplan

#endif
