#include "nartplan/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace nartplan {

std::string use_case_name(UseCase u) {
  switch (u) {
    case UseCase::Baseline: return "baseline";
    case UseCase::MUG: return "mug";
    case UseCase::SEE: return "see";
    case UseCase::MEE1: return "mee1";
    case UseCase::MEE2: return "mee2";
  }
  return "baseline";
}

UseCase parse_use_case(const std::string& name) {
  if (name == "baseline") return UseCase::Baseline;
  if (name == "mug") return UseCase::MUG;
  if (name == "see" || name == "s-ee") return UseCase::SEE;
  if (name == "mee1" || name == "m-ee1") return UseCase::MEE1;
  if (name == "mee2" || name == "m-ee2") return UseCase::MEE2;
  throw std::invalid_argument("unknown use case '" + name +
                              "' (expected baseline|mug|see|mee1|mee2)");
}

namespace {

struct UseCaseRow {
  double w1;
  double w2;
  bool role_based;
  bool uav_relays;      // UAVs take the relaying task too
  AgentKind ee_kind;    // UAV means "no EE"
};

UseCaseRow use_case_row(UseCase u) {
  switch (u) {
    case UseCase::Baseline: return {0.0, 0.0, false, false, AgentKind::UAV};
    case UseCase::MUG: return {1.0, 0.0, false, true, AgentKind::UAV};
    case UseCase::SEE: return {0.0, 1.0, false, false, AgentKind::StaticEE};
    case UseCase::MEE1: return {0.3, 0.7, false, true, AgentKind::MobileEE};
    case UseCase::MEE2: return {0.3, 0.7, true, true, AgentKind::MobileEE};
  }
  return {0.0, 0.0, false, false, AgentKind::UAV};
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

CellIndex parse_cell(const std::string& token) {
  auto comma = token.find(',');
  if (comma == std::string::npos) {
    throw std::invalid_argument("cell '" + token + "' is not 'col,row'");
  }
  return CellIndex{std::stoi(token.substr(0, comma)), std::stoi(token.substr(comma + 1))};
}

double to_double(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad numeric value for " + key + ": '" + value + "'");
  }
}

int to_int(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    int v = std::stoi(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad integer value for " + key + ": '" + value + "'");
  }
}

}  // namespace

std::vector<CellIndex> default_see_positions(int width, int height) {
  return {CellIndex{width / 2, height / 2}, CellIndex{width / 2, 0},
          CellIndex{width - 1, height / 2}, CellIndex{width / 2, height - 1},
          CellIndex{0, height / 2}};
}

Scenario parse_scenario(const std::string& text) {
  Scenario sc;
  bool saw_use_case = false;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("scenario line " + std::to_string(line_no) +
                                  ": expected 'key = value'");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw std::invalid_argument("scenario line " + std::to_string(line_no) +
                                  ": empty key or value");
    }

    if (key == "use_case") {
      sc.use_case = parse_use_case(value);
      saw_use_case = true;
    } else if (key == "map.file") {
      sc.map.file = value;
    } else if (key == "map.kind") {
      if (value != "uniform" && value != "clustered") {
        throw std::invalid_argument("map.kind must be uniform or clustered");
      }
      sc.map.kind = value;
    } else if (key == "map.width") {
      sc.map.width = to_int(key, value);
    } else if (key == "map.height") {
      sc.map.height = to_int(key, value);
    } else if (key == "map.cell_size_m") {
      sc.map.cell_size_m = to_double(key, value);
    } else if (key == "map.total_poc") {
      sc.map.total_poc = to_double(key, value);
    } else if (key == "map.seed") {
      sc.map.seed = static_cast<std::uint64_t>(std::stoull(value));
    } else if (key == "uav_count") {
      sc.uav_count = to_int(key, value);
    } else if (key == "uav_energy") {
      sc.uav_energy = to_double(key, value);
    } else if (key == "pod") {
      sc.pod = to_double(key, value);
    } else if (key == "delta_z_m") {
      sc.delta_z = to_double(key, value);
    } else if (key == "adjacency") {
      sc.adjacency = to_int(key, value);
    } else if (key == "see_positions") {
      sc.see_positions.clear();
      std::istringstream cells(value);
      std::string token;
      while (cells >> token) sc.see_positions.push_back(parse_cell(token));
    } else if (key == "trials") {
      sc.trials = to_int(key, value);
    } else if (key == "seeds") {
      sc.seeds.clear();
      std::istringstream seeds(value);
      std::string token;
      while (seeds >> token) sc.seeds.push_back(std::stoull(token));
    } else if (key == "eps") {
      sc.objective.time_discount_eps = to_double(key, value);
    } else if (key == "n_meetings") {
      sc.objective.n_meetings = to_int(key, value);
    } else if (key == "t_sys_factor") {
      sc.objective.t_sys_factor = to_double(key, value);
    } else if (key == "radio.frequency_hz") {
      sc.radio.frequency_hz = to_double(key, value);
    } else if (key == "radio.tx_power_dbm") {
      sc.radio.tx_power_dbm = to_double(key, value);
    } else if (key == "radio.gain_tx") {
      sc.radio.gain_tx = to_double(key, value);
    } else if (key == "radio.gain_rx") {
      sc.radio.gain_rx = to_double(key, value);
    } else if (key == "radio.sensitivity_dbm") {
      sc.radio.sensitivity_dbm = to_double(key, value);
    } else if (key == "radio.path_loss_exponent") {
      sc.radio.path_loss_exponent = to_double(key, value);
    } else if (key == "radio.smoothing_k") {
      sc.radio.smoothing_k = to_double(key, value);
    } else if (key == "radio.smoothing_eps") {
      sc.radio.smoothing_eps = to_double(key, value);
    } else if (key == "energy.translate") {
      sc.energy.translate = to_double(key, value);
    } else if (key == "energy.rotate_per_45deg") {
      sc.energy.rotate_per_45deg = to_double(key, value);
    } else if (key == "energy.diagonal_factor") {
      sc.energy.diagonal_factor = to_double(key, value);
    } else if (key == "anneal.t_init") {
      sc.anneal.t_init = to_double(key, value);
    } else if (key == "anneal.t_end") {
      sc.anneal.t_end = to_double(key, value);
    } else if (key == "anneal.cooling") {
      sc.anneal.cooling = to_double(key, value);
    } else if (key == "anneal.chains") {
      sc.anneal.chains = to_int(key, value);
    } else if (key == "anneal.moves_per_temp") {
      sc.anneal.moves_per_temp = to_int(key, value);
    } else if (key == "attraction.gamma") {
      sc.attraction.gamma = to_double(key, value);
    } else if (key == "attraction.start_candidates") {
      sc.attraction.start_candidates = to_int(key, value);
    } else {
      throw std::invalid_argument("scenario line " + std::to_string(line_no) +
                                  ": unknown key '" + key + "'");
    }
  }
  if (!saw_use_case) {
    throw std::invalid_argument("scenario is missing use_case");
  }

  UseCaseRow row = use_case_row(sc.use_case);
  sc.objective.w1 = row.w1;
  sc.objective.w2 = row.w2;
  sc.objective.role_based = row.role_based;

  if (sc.use_case == UseCase::SEE && sc.see_positions.empty()) {
    sc.see_positions = default_see_positions(sc.map.width, sc.map.height);
  }
  sc.validate();
  return sc;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open scenario file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

void Scenario::validate() const {
  if (uav_count < 1) {
    throw std::invalid_argument("scenario needs at least one UAV");
  }
  if (!(uav_energy > 0.0)) {
    throw std::invalid_argument("UAV energy budget must be positive");
  }
  if (!(pod > 0.0) || pod > 1.0) {
    throw std::invalid_argument("pod must lie in (0,1]");
  }
  if (adjacency != 4 && adjacency != 8) {
    throw std::invalid_argument("adjacency must be 4 or 8");
  }
  if (trials < 1) {
    throw std::invalid_argument("trials must be at least 1");
  }
  if (static_cast<int>(seeds.size()) != trials) {
    throw std::invalid_argument("seed list length (" + std::to_string(seeds.size()) +
                                ") must equal trials (" + std::to_string(trials) + ")");
  }
  if (use_case == UseCase::SEE && see_positions.empty()) {
    throw std::invalid_argument("S-EE use case needs see_positions");
  }
  radio.validate();
  objective.validate();
  anneal.validate();
}

GridWorld build_grid(const Scenario& scenario) {
  GridWorld grid;
  if (!scenario.map.file.empty()) {
    grid = load_poc_map_file(scenario.map.file);
  } else if (scenario.map.kind == "uniform") {
    grid = make_uniform_map(scenario.map.width, scenario.map.height, scenario.map.cell_size_m,
                            scenario.map.total_poc);
  } else {
    grid = make_clustered_map(scenario.map.width, scenario.map.height, scenario.map.cell_size_m,
                              scenario.map.total_poc, scenario.map.seed);
  }
  grid.set_adjacency(scenario.adjacency == 4 ? Adjacency::Four : Adjacency::Eight);
  return grid;
}

std::vector<AgentSpec> build_roster(const Scenario& scenario, int trial) {
  UseCaseRow row = use_case_row(scenario.use_case);
  std::vector<AgentSpec> specs;
  for (int i = 0; i < scenario.uav_count; ++i) {
    AgentSpec uav;
    uav.id = i;
    uav.kind = AgentKind::UAV;
    uav.roles.explorer = true;
    uav.roles.relay = row.uav_relays;
    uav.energy_budget = scenario.uav_energy;
    specs.push_back(uav);
  }
  if (row.ee_kind == AgentKind::StaticEE) {
    AgentSpec ee;
    ee.id = scenario.uav_count;
    ee.kind = AgentKind::StaticEE;
    ee.roles.relay = true;
    ee.fixed_position =
        scenario.see_positions[static_cast<size_t>(trial) % scenario.see_positions.size()];
    specs.push_back(ee);
  } else if (row.ee_kind == AgentKind::MobileEE) {
    AgentSpec ee;
    ee.id = scenario.uav_count;
    ee.kind = AgentKind::MobileEE;
    ee.roles.relay = true;
    specs.push_back(ee);
  }
  return specs;
}

std::string scenario_to_json(const Scenario& sc) {
  nlohmann::json j;
  j["use_case"] = use_case_name(sc.use_case);
  j["map"] = {{"file", sc.map.file},       {"kind", sc.map.kind},
              {"width", sc.map.width},     {"height", sc.map.height},
              {"cell_size_m", sc.map.cell_size_m}, {"total_poc", sc.map.total_poc},
              {"seed", sc.map.seed}};
  j["uav_count"] = sc.uav_count;
  j["uav_energy"] = sc.uav_energy;
  j["pod"] = sc.pod;
  j["delta_z_m"] = sc.delta_z;
  j["adjacency"] = sc.adjacency;
  auto cells = nlohmann::json::array();
  for (const CellIndex& c : sc.see_positions) {
    cells.push_back({c.col, c.row});
  }
  j["see_positions"] = cells;
  j["trials"] = sc.trials;
  j["seeds"] = sc.seeds;
  j["objective"] = {{"eps", sc.objective.time_discount_eps},
                    {"n_meetings", sc.objective.n_meetings},
                    {"w1", sc.objective.w1},
                    {"w2", sc.objective.w2},
                    {"role_based", sc.objective.role_based},
                    {"t_sys_factor", sc.objective.t_sys_factor}};
  j["radio"] = {{"frequency_hz", sc.radio.frequency_hz},
                {"tx_power_dbm", sc.radio.tx_power_dbm},
                {"gain_tx", sc.radio.gain_tx},
                {"gain_rx", sc.radio.gain_rx},
                {"sensitivity_dbm", sc.radio.sensitivity_dbm},
                {"path_loss_exponent", sc.radio.path_loss_exponent},
                {"smoothing_k", sc.radio.smoothing_k},
                {"smoothing_eps", sc.radio.smoothing_eps}};
  j["energy"] = {{"translate", sc.energy.translate},
                 {"rotate_per_45deg", sc.energy.rotate_per_45deg},
                 {"diagonal_factor", sc.energy.diagonal_factor}};
  j["anneal"] = {{"t_init", sc.anneal.t_init},
                 {"t_end", sc.anneal.t_end},
                 {"cooling", sc.anneal.cooling},
                 {"chains", sc.anneal.chains},
                 {"moves_per_temp", sc.anneal.moves_per_temp}};
  j["attraction"] = {{"gamma", sc.attraction.gamma},
                     {"start_candidates", sc.attraction.start_candidates}};
  return j.dump(2) + "\n";
}

}  // namespace nartplan
