#include "nartplan/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>
#include <stdexcept>
#include <thread>

namespace nartplan {

namespace {

int grid_distance(const GridWorld& grid, CellIndex a, CellIndex b) {
  int dc = std::abs(a.col - b.col);
  int dr = std::abs(a.row - b.row);
  return grid.adjacency() == Adjacency::Eight ? std::max(dc, dr) : dc + dr;
}

double euclid_cells(CellIndex a, CellIndex b) {
  double dc = a.col - b.col;
  double dr = a.row - b.row;
  return std::sqrt(dc * dc + dr * dr);
}

}  // namespace

void ObjectiveConfig::validate() const {
  if (!(time_discount_eps >= 0.0)) {
    throw std::invalid_argument("time discount must be non-negative");
  }
  if (n_meetings < 1) {
    throw std::invalid_argument("n_meetings must be at least 1");
  }
  if (!(w1 >= 0.0) || !(w2 >= 0.0)) {
    throw std::invalid_argument("cooperation weights must be non-negative");
  }
  if (!(t_sys_factor > 0.0)) {
    throw std::invalid_argument("t_sys factor must be positive");
  }
}

void AnnealConfig::validate() const {
  if (!(t_end > 0.0) || !(t_init >= t_end)) {
    throw std::invalid_argument("temperatures must satisfy 0 < t_end <= t_init");
  }
  if (!(cooling > 0.0) || !(cooling < 1.0)) {
    throw std::invalid_argument("cooling factor must lie in (0,1)");
  }
  if (chains < 1) {
    throw std::invalid_argument("need at least one annealing chain");
  }
  if (moves_per_temp < 1) {
    throw std::invalid_argument("moves_per_temp must be positive");
  }
}

void MissionSetup::validate() const {
  grid.validate();
  radio.validate();
  objective.validate();
  if (specs.empty()) {
    throw std::invalid_argument("mission needs at least one agent");
  }
  bool has_uav = false;
  for (size_t i = 0; i < specs.size(); ++i) {
    specs[i].validate();
    if (specs[i].id != static_cast<int>(i)) {
      throw std::invalid_argument("agent ids must be dense and ordered");
    }
    if (specs[i].kind == AgentKind::UAV) has_uav = true;
    if (specs[i].kind == AgentKind::StaticEE && !grid.is_valid(*specs[i].fixed_position)) {
      throw std::invalid_argument("static EE position is not a valid cell");
    }
    if (specs[i].kind == AgentKind::MobileEE && mobile_ee_loop.empty()) {
      throw std::invalid_argument("mobile EE present but no base loop planned");
    }
  }
  if (!has_uav) {
    throw std::invalid_argument("mission needs at least one UAV");
  }
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
  auto mix = [](std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  };
  return mix(seed ^ mix(salt));
}

// ---------------------------------------------------------------------------
// Mobile EE tour
// ---------------------------------------------------------------------------

namespace {

// Dijkstra with node-entry weights of 1 + distance-to-frontier, so equal-length
// routes settle on the one hugging the area boundary. Deterministic: the
// priority queue breaks ties by cell index.
std::vector<CellIndex> dijkstra_frontier(const GridWorld& grid, CellIndex from, CellIndex to) {
  const int n = grid.cell_count();
  std::vector<double> dist(static_cast<size_t>(n), std::numeric_limits<double>::infinity());
  std::vector<int> pred(static_cast<size_t>(n), -1);
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  int src = grid.index_of(from);
  int dst = grid.index_of(to);
  dist[static_cast<size_t>(src)] = 0.0;
  queue.emplace(0.0, src);
  while (!queue.empty()) {
    auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[static_cast<size_t>(u)]) continue;
    if (u == dst) break;
    for (CellIndex nb : neighbors(grid, grid.cell_at(u))) {
      int v = grid.index_of(nb);
      double w = 1.0 + grid.frontier_distance(nb);
      if (d + w < dist[static_cast<size_t>(v)]) {
        dist[static_cast<size_t>(v)] = d + w;
        pred[static_cast<size_t>(v)] = u;
        queue.emplace(d + w, v);
      }
    }
  }
  if (src != dst && pred[static_cast<size_t>(dst)] == -1) {
    return {};
  }
  std::vector<CellIndex> path;
  for (int u = dst; u != -1; u = pred[static_cast<size_t>(u)]) {
    path.push_back(grid.cell_at(u));
    if (u == src) break;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

AgentPath mobile_ee_base_loop(const GridWorld& grid) {
  const auto& vertices = grid.aoi_vertices();
  if (vertices.size() < 3) {
    throw std::invalid_argument("mobile EE tour needs at least 3 AoI vertices");
  }
  AgentPath loop;
  for (size_t v = 0; v < vertices.size(); ++v) {
    CellIndex from = vertices[v];
    CellIndex to = vertices[(v + 1) % vertices.size()];
    std::vector<CellIndex> segment = dijkstra_frontier(grid, from, to);
    if (segment.empty()) {
      throw std::runtime_error("mobile EE tour: no route between AoI vertices (" +
                               std::to_string(from.col) + "," + std::to_string(from.row) +
                               ") and (" + std::to_string(to.col) + "," +
                               std::to_string(to.row) + ")");
    }
    // Drop the segment's last cell; the next segment starts there.
    loop.cells.insert(loop.cells.end(), segment.begin(), segment.end() - 1);
  }
  if (loop.cells.empty()) {
    throw std::runtime_error("mobile EE tour is empty");
  }
  return loop;
}

AgentPath mobile_ee_path(const GridWorld& grid, int max_path_len) {
  return clip_or_extend_path(mobile_ee_base_loop(grid), max_path_len, grid);
}

// ---------------------------------------------------------------------------
// Attraction initialization
// ---------------------------------------------------------------------------

MissionPlan attraction_init(const GridWorld& grid, const std::vector<AgentSpec>& specs,
                            const EnergyModel& energy, const AttractionConfig& config,
                            std::uint64_t seed) {
  std::vector<int> uav_ids;
  for (const AgentSpec& spec : specs) {
    if (spec.kind == AgentKind::UAV) uav_ids.push_back(spec.id);
  }
  if (uav_ids.empty()) {
    throw std::invalid_argument("attraction_init needs at least one UAV");
  }
  std::vector<int> valid_cells;
  for (int c = 0; c < grid.cell_count(); ++c) {
    if (grid.valid_mask()[static_cast<size_t>(c)]) valid_cells.push_back(c);
  }
  if (valid_cells.size() < uav_ids.size()) {
    throw std::invalid_argument("fewer valid cells than UAVs");
  }

  std::mt19937_64 rng(derive_seed(seed, 0xA771));
  std::uniform_int_distribution<size_t> pick(0, valid_cells.size() - 1);

  // Seeded start sets, keeping the most spread-out draw.
  std::vector<int> starts;
  double best_spread = -1.0;
  for (int cand = 0; cand < std::max(1, config.start_candidates); ++cand) {
    std::vector<int> draw;
    while (draw.size() < uav_ids.size()) {
      int c = valid_cells[pick(rng)];
      if (std::find(draw.begin(), draw.end(), c) == draw.end()) draw.push_back(c);
    }
    double spread = std::numeric_limits<double>::max();
    for (size_t a = 0; a < draw.size(); ++a) {
      for (size_t b = a + 1; b < draw.size(); ++b) {
        spread = std::min(spread, euclid_cells(grid.cell_at(draw[a]), grid.cell_at(draw[b])));
      }
    }
    if (draw.size() < 2) spread = 0.0;
    if (spread > best_spread) {
      best_spread = spread;
      starts = draw;
    }
  }

  std::vector<bool> claimed(static_cast<size_t>(grid.cell_count()), false);
  MissionPlan plan;
  plan.paths.resize(specs.size());

  auto attract_field = [&](CellIndex at) {
    double pull = 0.0;
    for (int c : valid_cells) {
      if (claimed[static_cast<size_t>(c)]) continue;
      CellIndex cc = grid.cell_at(c);
      if (cc == at) continue;
      pull += grid.poc_at(c) / euclid_cells(at, cc);
    }
    return pull;
  };

  for (size_t u = 0; u < uav_ids.size(); ++u) {
    const AgentSpec& spec = specs[static_cast<size_t>(uav_ids[u])];
    AgentPath path;
    CellIndex cur = grid.cell_at(starts[u]);
    path.cells.push_back(cur);
    claimed[static_cast<size_t>(starts[u])] = true;
    double residual = spec.energy_budget;
    std::optional<double> heading;
    while (true) {
      double best_score = -std::numeric_limits<double>::infinity();
      std::optional<CellIndex> best_cell;
      double best_cost = 0.0;
      double best_heading = 0.0;
      for (CellIndex nb : neighbors(grid, cur)) {
        StepCost sc = step_energy(energy, cur, heading, nb);
        if (sc.energy > residual) continue;
        double score = (claimed[static_cast<size_t>(grid.index_of(nb))] ? 0.0 : grid.poc(nb)) +
                       config.gamma * attract_field(nb);
        if (score > best_score) {
          best_score = score;
          best_cell = nb;
          best_cost = sc.energy;
          best_heading = sc.new_heading;
        }
      }
      if (!best_cell) break;
      residual -= best_cost;
      heading = best_heading;
      cur = *best_cell;
      claimed[static_cast<size_t>(grid.index_of(cur))] = true;
      path.cells.push_back(cur);
    }
    plan.paths[static_cast<size_t>(uav_ids[u])] = std::move(path);
  }
  return plan;
}

// ---------------------------------------------------------------------------
// Mission simulation / objective
// ---------------------------------------------------------------------------

int mission_length(const MissionPlan& plan, const MissionSetup& setup) {
  int longest = 0;
  for (const AgentSpec& spec : setup.specs) {
    if (spec.kind == AgentKind::UAV) {
      longest = std::max(longest, plan.paths[static_cast<size_t>(spec.id)].lifetime());
    }
  }
  if (longest == 0) {
    throw std::invalid_argument("plan has no UAV path");
  }
  return longest;
}

void materialize_ee_paths(MissionPlan& plan, const MissionSetup& setup) {
  int length = mission_length(plan, setup);
  for (const AgentSpec& spec : setup.specs) {
    if (spec.kind == AgentKind::StaticEE) {
      AgentPath path;
      path.cells.assign(static_cast<size_t>(length), *spec.fixed_position);
      plan.paths[static_cast<size_t>(spec.id)] = std::move(path);
    } else if (spec.kind == AgentKind::MobileEE) {
      AgentPath loop;
      loop.cells = setup.mobile_ee_loop;
      plan.paths[static_cast<size_t>(spec.id)] = clip_or_extend_path(loop, length, setup.grid);
    }
  }
}

double evaluate_objective(const MissionPlan& plan, const MissionSetup& setup,
                          MissionTrace* trace) {
  const GridWorld& grid = setup.grid;
  const ObjectiveConfig& obj = setup.objective;
  const int n = setup.nart_size();
  if (static_cast<int>(plan.paths.size()) != n) {
    throw std::invalid_argument("plan path count does not match agent roster");
  }
  for (const AgentSpec& spec : setup.specs) {
    if (spec.kind != AgentKind::UAV) continue;
    FeasibilityReport rep =
        validate_path(spec, plan.paths[static_cast<size_t>(spec.id)], grid, setup.energy);
    if (!rep.feasible) {
      throw std::invalid_argument("infeasible plan for agent " + std::to_string(spec.id) +
                                  ": " + rep.violation + " at step " +
                                  std::to_string(rep.violation_step));
    }
  }
  const int n_steps = mission_length(plan, setup);
  const int loop_len = static_cast<int>(setup.mobile_ee_loop.size());

  std::vector<int> lifetime(static_cast<size_t>(n), n_steps);
  std::vector<double> altitude(static_cast<size_t>(n), 0.0);
  std::vector<bool> is_explorer(static_cast<size_t>(n), false);
  std::vector<bool> is_relay(static_cast<size_t>(n), false);
  for (const AgentSpec& spec : setup.specs) {
    size_t i = static_cast<size_t>(spec.id);
    if (spec.kind == AgentKind::UAV) {
      lifetime[i] = plan.paths[i].lifetime();
    }
    altitude[i] = agent_altitude(spec, n, setup.delta_z);
    is_explorer[i] = spec.roles.explorer;
    is_relay[i] = spec.roles.relay;
  }
  // Does the roster offer any peer of the class at all? Agents without such
  // peers contribute no term for that class.
  std::vector<bool> has_etd_peer(static_cast<size_t>(n), false);
  std::vector<bool> has_relay_peer(static_cast<size_t>(n), false);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (is_explorer[static_cast<size_t>(j)]) has_etd_peer[static_cast<size_t>(i)] = true;
      if (is_relay[static_cast<size_t>(j)]) has_relay_peer[static_cast<size_t>(i)] = true;
    }
  }

  auto cell_of = [&](const AgentSpec& spec, int step) -> CellIndex {
    switch (spec.kind) {
      case AgentKind::UAV:
        return plan.paths[static_cast<size_t>(spec.id)].cells[static_cast<size_t>(step)];
      case AgentKind::StaticEE:
        return *spec.fixed_position;
      case AgentKind::MobileEE:
        return setup.mobile_ee_loop[static_cast<size_t>(step % loop_len)];
    }
    return CellIndex{};
  };

  const bool coop_active = obj.w1 != 0.0 || obj.w2 != 0.0;
  std::vector<VomClock> unified(static_cast<size_t>(n));
  std::vector<VomClock> etd_clock(static_cast<size_t>(n));
  std::vector<VomClock> relay_clock(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    double tau = static_cast<double>(lifetime[static_cast<size_t>(i)]) / obj.n_meetings;
    VomClock clock{tau, obj.t_sys_factor * tau, 0};
    unified[static_cast<size_t>(i)] = clock;
    etd_clock[static_cast<size_t>(i)] = clock;
    relay_clock[static_cast<size_t>(i)] = clock;
  }

  KnowledgeLedger ledger;
  if (trace) {
    trace->width = grid.width();
    trace->height = grid.height();
    trace->cell_size = grid.cell_size();
    trace->n_valid_cells = grid.valid_cell_count();
    trace->cell_poc = grid.poc_values();
    trace->valid_mask = grid.valid_mask();
    trace->is_explorer.assign(is_explorer.begin(), is_explorer.end());
    trace->is_relay.assign(is_relay.begin(), is_relay.end());
    trace->lifetime = lifetime;
    trace->steps.clear();
    trace->steps.reserve(static_cast<size_t>(n_steps));
    ledger = KnowledgeLedger(n, grid.cell_count());
  }

  std::vector<bool> visited(static_cast<size_t>(grid.cell_count()), false);
  std::vector<bool> alive(static_cast<size_t>(n), false);
  std::vector<Point3> positions(static_cast<size_t>(n));
  std::vector<int> cells(static_cast<size_t>(n), -1);
  double objective_value = 0.0;

  for (int s = 0; s < n_steps; ++s) {
    for (int i = 0; i < n; ++i) {
      alive[static_cast<size_t>(i)] = s < lifetime[static_cast<size_t>(i)];
      if (alive[static_cast<size_t>(i)]) {
        CellIndex c = cell_of(setup.specs[static_cast<size_t>(i)], s);
        cells[static_cast<size_t>(i)] = grid.index_of(c);
        Point2 xy = cell_center(grid, c);
        positions[static_cast<size_t>(i)] =
            Point3{xy.x, xy.y, altitude[static_cast<size_t>(i)]};
      } else {
        cells[static_cast<size_t>(i)] = -1;
      }
    }

    // First-visit POC, credited in agent-id order.
    double collected = 0.0;
    for (int i = 0; i < n; ++i) {
      if (!alive[static_cast<size_t>(i)] || !is_explorer[static_cast<size_t>(i)]) continue;
      int c = cells[static_cast<size_t>(i)];
      if (trace) ledger.record_visit(i, c);
      if (!visited[static_cast<size_t>(c)]) {
        visited[static_cast<size_t>(c)] = true;
        collected += grid.poc_at(c);
      }
    }

    StepRecord rec;
    std::vector<LinkSample>* samples = nullptr;
    if (trace) {
      rec.cell.assign(cells.begin(), cells.end());
      rec.alive.assign(alive.begin(), alive.end());
      rec.vom.assign(static_cast<size_t>(n), std::numeric_limits<double>::quiet_NaN());
      rec.vom_etd = rec.vom;
      rec.vom_r = rec.vom;
      rec.csi_best.assign(static_cast<size_t>(n), -1.0);
      rec.coop.assign(static_cast<size_t>(n), 0.0);
      rec.poc_collected = collected;
      samples = &rec.links;
    }

    CsiMatrix csi = pairwise_csi(positions, alive, setup.radio, s, samples);

    double coop_sum = 0.0;
    const bool need_agent_terms = coop_active || trace != nullptr;
    for (int i = 0; need_agent_terms && i < n; ++i) {
      if (!alive[static_cast<size_t>(i)]) continue;
      double vom_u = vom_value(unified[static_cast<size_t>(i)], s);
      double vom_e = obj.role_based ? vom_value(etd_clock[static_cast<size_t>(i)], s) : vom_u;
      double vom_r = obj.role_based ? vom_value(relay_clock[static_cast<size_t>(i)], s) : vom_u;
      double csi_e = -1.0;
      double csi_r = -1.0;
      for (int j = 0; j < n; ++j) {
        if (j == i || !csi.present(i, j)) continue;
        double v = csi.csi(i, j);
        if (is_explorer[static_cast<size_t>(j)]) csi_e = std::max(csi_e, v);
        if (is_relay[static_cast<size_t>(j)]) csi_r = std::max(csi_r, v);
      }
      double c_i = 0.0;
      if (coop_active) {
        if (obj.w1 != 0.0 && has_etd_peer[static_cast<size_t>(i)]) {
          c_i += obj.w1 * cooperation_term(vom_e, csi_e);
        }
        if (obj.w2 != 0.0 && has_relay_peer[static_cast<size_t>(i)]) {
          c_i += obj.w2 * cooperation_term(vom_r, csi_r);
        }
        coop_sum += c_i;
      }
      if (trace) {
        rec.vom[static_cast<size_t>(i)] = vom_u;
        rec.vom_etd[static_cast<size_t>(i)] = vom_e;
        rec.vom_r[static_cast<size_t>(i)] = vom_r;
        rec.csi_best[static_cast<size_t>(i)] = agent_csi(csi, i);
        rec.coop[static_cast<size_t>(i)] = c_i;
      }
    }

    if (coop_active) {
      objective_value += std::exp(-obj.time_discount_eps * s) * collected * (1.0 + coop_sum);
    } else {
      objective_value += std::exp(-obj.time_discount_eps * s) * collected;
    }

    std::vector<std::pair<int, int>> exchanges = detect_exchanges(csi);
    for (const auto& [i, j] : exchanges) {
      unified[static_cast<size_t>(i)].last_exchange_step = s;
      unified[static_cast<size_t>(j)].last_exchange_step = s;
      if (is_explorer[static_cast<size_t>(j)]) {
        etd_clock[static_cast<size_t>(i)].last_exchange_step = s;
      }
      if (is_relay[static_cast<size_t>(j)]) {
        relay_clock[static_cast<size_t>(i)].last_exchange_step = s;
      }
      if (is_explorer[static_cast<size_t>(i)]) {
        etd_clock[static_cast<size_t>(j)].last_exchange_step = s;
      }
      if (is_relay[static_cast<size_t>(i)]) {
        relay_clock[static_cast<size_t>(j)].last_exchange_step = s;
      }
    }
    if (trace) {
      apply_step_exchanges(ledger, exchanges);
      rec.exchanges = std::move(exchanges);
      trace->steps.push_back(std::move(rec));
    }
  }
  return objective_value;
}

// ---------------------------------------------------------------------------
// Simulated annealing
// ---------------------------------------------------------------------------

namespace {

class ProposalEngine {
public:
  ProposalEngine(const MissionSetup& setup, std::uint64_t seed)
      : setup_(setup), rng_(seed), unit_(0.0, 1.0) {
    for (const AgentSpec& spec : setup.specs) {
      if (spec.kind == AgentKind::UAV) uav_ids_.push_back(spec.id);
    }
  }

  std::mt19937_64& rng() { return rng_; }
  double uniform() { return unit_(rng_); }

  int uniform_int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }

  // Mutates the plan in place; returns false when no usable move came out.
  bool propose(MissionPlan& plan) {
    double roll = uniform();
    if (roll < 0.35) return segment_regrow(plan);
    if (roll < 0.60) return endpoint_move(plan);
    if (roll < 0.70) return relocate_start(plan);
    if (roll < 0.85) {
      if (tail_swap(plan)) return true;
      return segment_regrow(plan);
    }
    if (roll < 0.90) return reverse_path(plan);
    return rigid_transform(plan);
  }

private:
  int random_uav() { return uav_ids_[static_cast<size_t>(uniform_int(0, n_uavs() - 1))]; }
  int n_uavs() const { return static_cast<int>(uav_ids_.size()); }

  // Random walk from -> to whose length stays within `budget` moves. Empty on
  // dead ends (possible with validity masks).
  std::vector<CellIndex> walk_to(CellIndex from, CellIndex to, int budget) {
    std::vector<CellIndex> cells{from};
    CellIndex cur = from;
    while (!(cur == to)) {
      std::vector<CellIndex> nbrs = neighbors(setup_.grid, cur);
      std::vector<CellIndex> usable;
      for (CellIndex nb : nbrs) {
        if (grid_distance(setup_.grid, nb, to) <= budget - 1) usable.push_back(nb);
      }
      if (usable.empty()) return {};
      cur = usable[static_cast<size_t>(uniform_int(0, static_cast<int>(usable.size()) - 1))];
      cells.push_back(cur);
      --budget;
    }
    return cells;
  }

  void repair_energy(AgentPath& path, const AgentSpec& spec) {
    while (path.cells.size() > 1 && path_energy(path, setup_.energy) > spec.energy_budget) {
      path.cells.pop_back();
    }
  }

  bool segment_regrow(MissionPlan& plan) {
    int agent = random_uav();
    AgentPath& path = plan.paths[static_cast<size_t>(agent)];
    int len = path.lifetime();
    if (len < 3) return endpoint_move(plan);
    int a = uniform_int(0, len - 3);
    int b = std::min(len - 1, a + 1 + uniform_int(1, 11));
    int span = b - a;
    int dist = grid_distance(setup_.grid, path.cells[static_cast<size_t>(a)],
                             path.cells[static_cast<size_t>(b)]);
    int budget = std::max(dist, span + uniform_int(-2, 4));
    std::vector<CellIndex> mid =
        walk_to(path.cells[static_cast<size_t>(a)], path.cells[static_cast<size_t>(b)], budget);
    if (mid.empty()) return false;
    std::vector<CellIndex> next(path.cells.begin(), path.cells.begin() + a);
    next.insert(next.end(), mid.begin(), mid.end());
    next.insert(next.end(), path.cells.begin() + b + 1, path.cells.end());
    path.cells = std::move(next);
    repair_energy(path, setup_.specs[static_cast<size_t>(agent)]);
    return true;
  }

  // Appends random adjacent moves while the budget allows, up to max_moves.
  int grow_tail(AgentPath& path, const AgentSpec& spec, int max_moves) {
    std::optional<double> heading;
    double spent = path_energy(path, setup_.energy, &heading);
    int grown = 0;
    for (int k = 0; k < max_moves; ++k) {
      std::vector<CellIndex> nbrs = neighbors(setup_.grid, path.cells.back());
      if (nbrs.empty()) break;
      CellIndex nb = nbrs[static_cast<size_t>(uniform_int(0, static_cast<int>(nbrs.size()) - 1))];
      StepCost sc = step_energy(setup_.energy, path.cells.back(), heading, nb);
      if (spent + sc.energy > spec.energy_budget) break;
      spent += sc.energy;
      heading = sc.new_heading;
      path.cells.push_back(nb);
      ++grown;
    }
    return grown;
  }

  // Tail edit: usually replaces the last cells with a fresh walk of similar
  // length; sometimes a pure shrink or pure growth.
  bool endpoint_move(MissionPlan& plan) {
    int agent = random_uav();
    const AgentSpec& spec = setup_.specs[static_cast<size_t>(agent)];
    AgentPath& path = plan.paths[static_cast<size_t>(agent)];
    int len = path.lifetime();
    double roll = uniform();
    if (roll < 0.2) {
      return grow_tail(path, spec, uniform_int(1, 8)) > 0;
    }
    if (len < 2) return grow_tail(path, spec, uniform_int(1, 8)) > 0;
    int k = uniform_int(1, std::min(8, len - 1));
    path.cells.resize(path.cells.size() - static_cast<size_t>(k));
    if (roll < 0.4) return true;  // pure retraction
    grow_tail(path, spec, k + uniform_int(0, 2));
    return true;
  }

  bool relocate_start(MissionPlan& plan) {
    int agent = random_uav();
    AgentPath& path = plan.paths[static_cast<size_t>(agent)];
    int len = path.lifetime();
    if (len < 2) return false;
    CellIndex start = path.cells.front();
    CellIndex candidate{start.col + uniform_int(-3, 3), start.row + uniform_int(-3, 3)};
    if (!setup_.grid.is_valid(candidate)) return false;
    int k = uniform_int(1, std::min(6, len - 1));
    CellIndex anchor = path.cells[static_cast<size_t>(k)];
    int dist = grid_distance(setup_.grid, candidate, anchor);
    std::vector<CellIndex> head = walk_to(candidate, anchor, std::max(dist, k + 2));
    if (head.empty()) return false;
    std::vector<CellIndex> next(head.begin(), head.end());
    next.insert(next.end(), path.cells.begin() + k + 1, path.cells.end());
    path.cells = std::move(next);
    repair_energy(path, setup_.specs[static_cast<size_t>(agent)]);
    return true;
  }

  // Visiting order flip; transition angles are preserved, so the energy is
  // unchanged and only the discounting changes.
  bool reverse_path(MissionPlan& plan) {
    int agent = random_uav();
    AgentPath& path = plan.paths[static_cast<size_t>(agent)];
    if (path.lifetime() < 2) return false;
    std::reverse(path.cells.begin(), path.cells.end());
    return true;
  }

  // Translates the whole path to a random start, optionally under one of the
  // eight grid symmetries. Angles between moves are preserved, so the cost
  // carries over; the move fails if any cell leaves the valid region.
  bool rigid_transform(MissionPlan& plan) {
    int agent = random_uav();
    AgentPath& path = plan.paths[static_cast<size_t>(agent)];
    int len = path.lifetime();
    CellIndex start{uniform_int(0, setup_.grid.width() - 1),
                    uniform_int(0, setup_.grid.height() - 1)};
    if (!setup_.grid.is_valid(start)) return false;
    int variant = uniform_int(0, 7);
    auto map_move = [variant](int dc, int dr) {
      if (variant & 4) std::swap(dc, dr);
      if (variant & 1) dc = -dc;
      if (variant & 2) dr = -dr;
      return std::pair<int, int>{dc, dr};
    };
    std::vector<CellIndex> next{start};
    next.reserve(static_cast<size_t>(len));
    for (int s = 1; s < len; ++s) {
      auto [dc, dr] = map_move(path.cells[static_cast<size_t>(s)].col -
                                   path.cells[static_cast<size_t>(s - 1)].col,
                               path.cells[static_cast<size_t>(s)].row -
                                   path.cells[static_cast<size_t>(s - 1)].row);
      CellIndex cell{next.back().col + dc, next.back().row + dr};
      if (!setup_.grid.is_valid(cell)) return false;
      next.push_back(cell);
    }
    path.cells = std::move(next);
    return true;
  }

  bool tail_swap(MissionPlan& plan) {
    if (n_uavs() < 2) return false;
    int a = random_uav();
    int b = random_uav();
    if (a == b) return false;
    AgentPath& pa = plan.paths[static_cast<size_t>(a)];
    AgentPath& pb = plan.paths[static_cast<size_t>(b)];
    int horizon = std::min(pa.lifetime(), pb.lifetime()) - 2;
    if (horizon < 0) return false;
    for (int attempt = 0; attempt < 8; ++attempt) {
      int t = uniform_int(0, horizon);
      CellIndex at = pa.cells[static_cast<size_t>(t)];
      CellIndex bt = pb.cells[static_cast<size_t>(t)];
      CellIndex an = pa.cells[static_cast<size_t>(t + 1)];
      CellIndex bn = pb.cells[static_cast<size_t>(t + 1)];
      if (grid_distance(setup_.grid, at, bn) <= 1 && grid_distance(setup_.grid, bt, an) <= 1) {
        std::vector<CellIndex> tail_a(pa.cells.begin() + t + 1, pa.cells.end());
        std::vector<CellIndex> tail_b(pb.cells.begin() + t + 1, pb.cells.end());
        pa.cells.resize(static_cast<size_t>(t + 1));
        pb.cells.resize(static_cast<size_t>(t + 1));
        pa.cells.insert(pa.cells.end(), tail_b.begin(), tail_b.end());
        pb.cells.insert(pb.cells.end(), tail_a.begin(), tail_a.end());
        repair_energy(pa, setup_.specs[static_cast<size_t>(a)]);
        repair_energy(pb, setup_.specs[static_cast<size_t>(b)]);
        return true;
      }
    }
    return false;
  }

  const MissionSetup& setup_;
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> unit_;
  std::vector<int> uav_ids_;
};

struct ChainResult {
  MissionPlan plan;
  double objective = -std::numeric_limits<double>::infinity();
};

ChainResult run_chain(const MissionPlan& initial, double initial_objective,
                      const MissionSetup& setup, const AnnealConfig& config,
                      std::uint64_t seed) {
  ProposalEngine engine(setup, seed);
  MissionPlan current = initial;
  double current_objective = initial_objective;
  ChainResult best{initial, initial_objective};
  for (double temperature = config.t_init; temperature >= config.t_end;
       temperature *= config.cooling) {
    for (int move = 0; move < config.moves_per_temp; ++move) {
      MissionPlan candidate = current;
      if (!engine.propose(candidate)) continue;
      double candidate_objective = evaluate_objective(candidate, setup);
      double delta = candidate_objective - current_objective;
      if (delta >= 0.0 || engine.uniform() < std::exp(delta / temperature)) {
        current = std::move(candidate);
        current_objective = candidate_objective;
        if (current_objective > best.objective) {
          best.plan = current;
          best.objective = current_objective;
        }
      }
    }
  }
  return best;
}

}  // namespace

MissionPlan optimize(const MissionPlan& initial, const MissionSetup& setup,
                     const AnnealConfig& config) {
  config.validate();
  setup.validate();
  double initial_objective = evaluate_objective(initial, setup);

  std::vector<ChainResult> results(static_cast<size_t>(config.chains));
  std::vector<std::thread> workers;
  workers.reserve(static_cast<size_t>(config.chains));
  for (int chain = 0; chain < config.chains; ++chain) {
    workers.emplace_back([&, chain]() {
      results[static_cast<size_t>(chain)] =
          run_chain(initial, initial_objective, setup, config,
                    derive_seed(config.seed, 0xC4A1 + static_cast<std::uint64_t>(chain)));
    });
  }
  for (auto& worker : workers) worker.join();

  // Best chain wins; ties go to the lowest chain index.
  const ChainResult* best = &results[0];
  for (const ChainResult& result : results) {
    if (result.objective > best->objective) best = &result;
  }
  MissionPlan plan = best->plan;
  plan.objective = best->objective;
  materialize_ee_paths(plan, setup);
  return plan;
}

}  // namespace nartplan
