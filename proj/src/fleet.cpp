#include "nartplan/fleet.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace nartplan {

namespace {

constexpr double kPi = std::numbers::pi;

bool adjacent_or_equal(const GridWorld& grid, CellIndex a, CellIndex b) {
  if (a == b) return true;
  int dc = std::abs(a.col - b.col);
  int dr = std::abs(a.row - b.row);
  if (grid.adjacency() == Adjacency::Four) {
    return dc + dr == 1;
  }
  return std::max(dc, dr) == 1;
}

// Minimal absolute angular difference in [0, pi].
double angle_diff(double a, double b) {
  double d = std::fmod(a - b, 2.0 * kPi);
  if (d > kPi) d -= 2.0 * kPi;
  if (d < -kPi) d += 2.0 * kPi;
  return std::abs(d);
}

}  // namespace

void AgentSpec::validate() const {
  if (!roles.explorer && !roles.relay) {
    throw std::invalid_argument("agent " + std::to_string(id) + " has no role");
  }
  switch (kind) {
    case AgentKind::UAV:
      if (!(energy_budget > 0.0)) {
        throw std::invalid_argument("UAV " + std::to_string(id) +
                                    " needs a positive energy budget");
      }
      break;
    case AgentKind::StaticEE:
      if (!fixed_position) {
        throw std::invalid_argument("static EE " + std::to_string(id) +
                                    " needs a fixed position");
      }
      break;
    case AgentKind::MobileEE:
      break;
  }
}

double agent_altitude(const AgentSpec& spec, int nart_size, double delta_z) {
  switch (spec.kind) {
    case AgentKind::UAV:
      return delta_z * (spec.id + 1);
    case AgentKind::MobileEE:
      return delta_z * nart_size;
    case AgentKind::StaticEE:
      return 0.0;
  }
  return 0.0;
}

KinematicState kinematic_state(const GridWorld& grid, const AgentSpec& spec, CellIndex cell,
                               int nart_size, double yaw, double delta_z) {
  Point2 xy = cell_center(grid, cell);
  return KinematicState{cell, Point3{xy.x, xy.y, agent_altitude(spec, nart_size, delta_z)}, yaw};
}

Mat3 yaw_rotation(double yaw) {
  double c = std::cos(yaw);
  double s = std::sin(yaw);
  return Mat3{{{c, s, 0.0}, {-s, c, 0.0}, {0.0, 0.0, 1.0}}};
}

StepCost step_energy(const EnergyModel& model, CellIndex from,
                     std::optional<double> heading_before, CellIndex to) {
  if (from == to) {
    return StepCost{0.0, heading_before.value_or(0.0)};
  }
  int dc = to.col - from.col;
  int dr = to.row - from.row;
  if (std::max(std::abs(dc), std::abs(dr)) != 1) {
    throw std::invalid_argument("step_energy: cells are not adjacent");
  }
  double heading = std::atan2(static_cast<double>(dr), static_cast<double>(dc));
  bool diagonal = dc != 0 && dr != 0;
  double cost = model.translate * (diagonal ? model.diagonal_factor : 1.0);
  if (heading_before) {
    cost += model.rotate_per_45deg * (angle_diff(heading, *heading_before) / (kPi / 4.0));
  }
  return StepCost{cost, heading};
}

double path_energy(const AgentPath& path, const EnergyModel& model,
                   std::optional<double>* final_heading) {
  double total = 0.0;
  std::optional<double> heading;
  for (size_t s = 1; s < path.cells.size(); ++s) {
    StepCost c = step_energy(model, path.cells[s - 1], heading, path.cells[s]);
    total += c.energy;
    if (path.cells[s] != path.cells[s - 1]) heading = c.new_heading;
  }
  if (final_heading) *final_heading = heading;
  return total;
}

FeasibilityReport validate_path(const AgentSpec& spec, const AgentPath& path,
                                const GridWorld& grid, const EnergyModel& model) {
  FeasibilityReport report;
  if (path.empty()) {
    report.violation = "path is empty";
    report.violation_step = 0;
    return report;
  }
  if (!grid.is_valid(path.cells[0])) {
    report.violation = "start cell out of bounds or masked invalid";
    report.violation_step = 0;
    return report;
  }
  double spent = 0.0;
  std::optional<double> heading;
  for (size_t s = 1; s < path.cells.size(); ++s) {
    CellIndex from = path.cells[s - 1];
    CellIndex to = path.cells[s];
    if (!grid.is_valid(to)) {
      report.violation = "cell out of bounds or masked invalid";
      report.violation_step = static_cast<int>(s);
      return report;
    }
    if (spec.kind == AgentKind::StaticEE) {
      if (to != from) {
        report.violation = "static EE must hold its position";
        report.violation_step = static_cast<int>(s);
        return report;
      }
      continue;
    }
    if (!adjacent_or_equal(grid, from, to)) {
      report.violation = "consecutive cells are not adjacent";
      report.violation_step = static_cast<int>(s);
      return report;
    }
    StepCost c = step_energy(model, from, heading, to);
    spent += c.energy;
    if (to != from) heading = c.new_heading;
    if (spec.kind == AgentKind::UAV && spent > spec.energy_budget) {
      report.violation = "energy budget exhausted";
      report.violation_step = static_cast<int>(s);
      report.residual_energy = spec.energy_budget - spent;
      return report;
    }
  }
  report.feasible = true;
  report.residual_energy =
      spec.kind == AgentKind::UAV ? spec.energy_budget - spent : 0.0;
  return report;
}

AgentPath clip_or_extend_path(const AgentPath& path, int target_len, const GridWorld& grid) {
  if (path.empty()) {
    throw std::invalid_argument("clip_or_extend_path: empty path");
  }
  if (target_len <= 0) {
    throw std::invalid_argument("clip_or_extend_path: target length must be positive");
  }
  int len = path.lifetime();
  AgentPath out;
  out.cells.reserve(static_cast<size_t>(target_len));
  if (target_len > len && !adjacent_or_equal(grid, path.cells.back(), path.cells.front())) {
    throw std::invalid_argument(
        "clip_or_extend_path: extension needs the last cell adjacent to the first");
  }
  for (int s = 0; s < target_len; ++s) {
    out.cells.push_back(path.cells[static_cast<size_t>(s % len)]);
  }
  return out;
}

void write_paths_csv(const std::vector<AgentSpec>& specs, const std::vector<AgentPath>& paths,
                     const GridWorld& grid, const EnergyModel& model, double delta_z,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write paths csv: " + path);
  }
  out << "agent_id,step,col,row,x_m,y_m,z_m,residual_energy\n";
  int nart = static_cast<int>(specs.size());
  char buf[64];
  auto fmt = [&buf](double v) {
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
  };
  for (size_t a = 0; a < specs.size(); ++a) {
    const AgentSpec& spec = specs[a];
    const AgentPath& p = paths[a];
    double spent = 0.0;
    std::optional<double> heading;
    for (size_t s = 0; s < p.cells.size(); ++s) {
      if (s > 0 && spec.kind == AgentKind::UAV) {
        StepCost c = step_energy(model, p.cells[s - 1], heading, p.cells[s]);
        spent += c.energy;
        if (p.cells[s] != p.cells[s - 1]) heading = c.new_heading;
      }
      Point2 xy = cell_center(grid, p.cells[s]);
      out << spec.id << ',' << s << ',' << p.cells[s].col << ',' << p.cells[s].row << ','
          << fmt(xy.x) << ',' << fmt(xy.y) << ','
          << fmt(agent_altitude(spec, nart, delta_z)) << ',';
      if (spec.kind == AgentKind::UAV) {
        out << fmt(spec.energy_budget - spent);
      }
      out << '\n';
    }
  }
}

}  // namespace nartplan
