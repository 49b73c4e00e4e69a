#ifndef NARTPLAN_FLEET_HPP
#define NARTPLAN_FLEET_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "nartplan/gridworld.hpp"

namespace nartplan {

enum class AgentKind { UAV, StaticEE, MobileEE };

/// Mission task sets: exploration-and-target-detection vs. relaying.
struct Roles {
  bool explorer = false;
  bool relay = false;
};

struct AgentSpec {
  int id = 0;
  AgentKind kind = AgentKind::UAV;
  Roles roles;
  double energy_budget = 0.0;                // UAVs only
  std::optional<CellIndex> fixed_position;   // StaticEE only

  void validate() const;
};

/// Default vertical displacement between stacked agents [m].
constexpr double kDefaultDeltaZ = 2.0;

/// Altitude of an agent under the stacking scheme: UAV i flies at
/// delta_z*(i+1), the mobile EE one slot above the highest UAV, static EEs
/// sit on the ground.
double agent_altitude(const AgentSpec& spec, int nart_size, double delta_z);

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct KinematicState {
  CellIndex cell;
  Point3 position;
  double yaw = 0.0;
};

KinematicState kinematic_state(const GridWorld& grid, const AgentSpec& spec, CellIndex cell,
                               int nart_size, double yaw, double delta_z = kDefaultDeltaZ);

using Mat3 = std::array<std::array<double, 3>, 3>;

/// Body-to-local rotation for a yaw angle; identity at yaw = 0.
Mat3 yaw_rotation(double yaw);

/// Per-move energy model. Defaults calibrated so a 2000-unit budget funds
/// about 86 straight moves.
struct EnergyModel {
  double translate = 23.0;
  double rotate_per_45deg = 2.0;
  double diagonal_factor = 1.0;
};

struct StepCost {
  double energy = 0.0;
  double new_heading = 0.0;
};

/// Energy of one step from `from` to `to` (adjacent or equal). Heading is
/// quantized to 45-degree increments; a stationary step is free and keeps
/// the heading.
StepCost step_energy(const EnergyModel& model, CellIndex from,
                     std::optional<double> heading_before, CellIndex to);

struct AgentPath {
  std::vector<CellIndex> cells;

  int lifetime() const { return static_cast<int>(cells.size()); }
  bool empty() const { return cells.empty(); }
};

struct FeasibilityReport {
  bool feasible = false;
  std::string violation;     // empty when feasible
  int violation_step = -1;   // index of the offending transition target
  double residual_energy = 0.0;
};

/// Checks cell validity, adjacency of consecutive cells, and the prefix
/// energy budget. Report-valued; never throws.
FeasibilityReport validate_path(const AgentSpec& spec, const AgentPath& path,
                                const GridWorld& grid, const EnergyModel& model);

/// Total energy of a path under the model (first move establishes the
/// heading free of rotation charge). Optionally reports the heading after
/// the last actual move.
double path_energy(const AgentPath& path, const EnergyModel& model,
                   std::optional<double>* final_heading = nullptr);

/// Truncates or cyclically extends the path to exactly target_len cells.
/// Extension requires the last cell to be adjacent (or equal) to the first.
AgentPath clip_or_extend_path(const AgentPath& path, int target_len, const GridWorld& grid);

/// CSV rows: agent_id, step, col, row, x_m, y_m, z_m, residual_energy.
/// EEs get an empty residual field.
void write_paths_csv(const std::vector<AgentSpec>& specs, const std::vector<AgentPath>& paths,
                     const GridWorld& grid, const EnergyModel& model, double delta_z,
                     const std::string& path);

}  // namespace nartplan

#endif
