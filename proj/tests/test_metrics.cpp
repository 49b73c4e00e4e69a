#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>
#include <random>

#include "nartplan/metrics.hpp"
#include "nartplan/planner.hpp"

using namespace nartplan;

namespace {

// Hand-built traces: a 10x10 unit grid unless stated otherwise.
MissionTrace blank_trace(int n_agents, int width = 10, int height = 10) {
  MissionTrace t;
  t.width = width;
  t.height = height;
  t.cell_size = 10.0;
  t.n_valid_cells = width * height;
  t.cell_poc.assign(static_cast<size_t>(width * height), 0.0);
  t.valid_mask.assign(static_cast<size_t>(width * height), 1);
  t.is_explorer.assign(static_cast<size_t>(n_agents), 1);
  t.is_relay.assign(static_cast<size_t>(n_agents), 0);
  t.lifetime.assign(static_cast<size_t>(n_agents), 0);
  return t;
}

StepRecord blank_step(int n_agents) {
  StepRecord rec;
  rec.cell.assign(static_cast<size_t>(n_agents), -1);
  rec.alive.assign(static_cast<size_t>(n_agents), false);
  rec.vom.assign(static_cast<size_t>(n_agents), 0.0);
  rec.vom_etd = rec.vom;
  rec.vom_r = rec.vom;
  rec.csi_best.assign(static_cast<size_t>(n_agents), -1.0);
  rec.coop.assign(static_cast<size_t>(n_agents), 0.0);
  return rec;
}

LinkSample link(int step, int i, int j, double csi) {
  return LinkSample{step, i, j, 100.0, -60.0, csi};
}

}  // namespace

TEST_CASE("E and TPOC count first visits with and without discount") {
  SUBCASE("empty trace") {
    MissionTrace t = blank_trace(1);
    CHECK(metric_E(t, 0.005) == 0.0);
    CHECK(metric_TPOC(t) == 0.0);
  }
  SUBCASE("single visit of poc 0.1 at step 10") {
    MissionTrace t = blank_trace(1);
    t.lifetime = {11};
    t.cell_poc[42] = 0.1;
    for (int s = 0; s <= 10; ++s) {
      StepRecord rec = blank_step(1);
      rec.alive[0] = true;
      rec.cell[0] = s == 10 ? 42 : 0;
      t.steps.push_back(rec);
    }
    CHECK(metric_E(t, 0.005) == doctest::Approx(0.1 * std::exp(-0.05)).epsilon(1e-12));
    CHECK(metric_E(t, 0.0) == doctest::Approx(metric_TPOC(t)).epsilon(1e-15));
  }
  SUBCASE("revisits and simultaneous visits are credited once") {
    MissionTrace t = blank_trace(2);
    t.lifetime = {3, 3};
    t.cell_poc[5] = 0.2;
    t.cell_poc[6] = 0.3;
    for (int s = 0; s < 3; ++s) {
      StepRecord rec = blank_step(2);
      rec.alive = {true, true};
      rec.cell = {5, 5};  // both sit on cell 5; only agent 0 collects
      if (s == 2) rec.cell[1] = 6;
      t.steps.push_back(rec);
    }
    CHECK(metric_TPOC(t) == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("EP is the visited fraction of valid cells") {
  MissionTrace t = blank_trace(1);
  GridWorld grid = make_uniform_map(10, 10, 10.0, 0.5);
  CHECK(metric_EP(t, grid) == 0.0);
  t.lifetime = {10};
  for (int s = 0; s < 10; ++s) {
    StepRecord rec = blank_step(1);
    rec.alive[0] = true;
    rec.cell[0] = s;
    t.steps.push_back(rec);
  }
  CHECK(metric_EP(t, grid) == doctest::Approx(0.10));

  MissionTrace full = blank_trace(1);
  full.lifetime = {100};
  for (int s = 0; s < 100; ++s) {
    StepRecord rec = blank_step(1);
    rec.alive[0] = true;
    rec.cell[0] = s;
    full.steps.push_back(rec);
  }
  CHECK(metric_EP(full, grid) == doctest::Approx(1.0));
}

TEST_CASE("reporting metrics follow per-agent per-step increments") {
  SUBCASE("one pairwise contact yields two reports") {
    MissionTrace t = blank_trace(2);
    t.lifetime = {5, 5};
    for (int s = 0; s < 5; ++s) {
      StepRecord rec = blank_step(2);
      rec.alive = {true, true};
      rec.cell = {0, 1};
      if (s == 2) rec.links.push_back(link(2, 0, 1, 0.4));
      t.steps.push_back(rec);
    }
    CHECK(metric_ETR(t) == doctest::Approx(2.0));
  }
  SUBCASE("no feasible link means zero reports") {
    MissionTrace t = blank_trace(2);
    t.lifetime = {3, 3};
    for (int s = 0; s < 3; ++s) {
      StepRecord rec = blank_step(2);
      rec.alive = {true, true};
      rec.cell = {0, 1};
      rec.links.push_back(link(s, 0, 1, -0.5));
      t.steps.push_back(rec);
    }
    CHECK(metric_ETR(t) == 0.0);
  }
  SUBCASE("a triangle of links in one step gives three increments") {
    MissionTrace t = blank_trace(3);
    t.lifetime = {1, 1, 1};
    StepRecord rec = blank_step(3);
    rec.alive = {true, true, true};
    rec.cell = {0, 1, 2};
    rec.links.push_back(link(0, 0, 1, 0.1));
    rec.links.push_back(link(0, 0, 2, 0.2));
    rec.links.push_back(link(0, 1, 2, 0.3));
    t.steps.push_back(rec);
    CHECK(metric_ETR(t) == doctest::Approx(3.0));
  }
  SUBCASE("parity holds when the contact graph is a disjoint union of edges") {
    std::mt19937 rng(6);
    for (int trial = 0; trial < 50; ++trial) {
      int agents = 6;
      int steps = 1 + static_cast<int>(rng() % 10);
      MissionTrace t = blank_trace(agents);
      t.lifetime.assign(static_cast<size_t>(agents), steps);
      int edge_steps = 0;
      for (int s = 0; s < steps; ++s) {
        StepRecord rec = blank_step(agents);
        for (int i = 0; i < agents; ++i) {
          rec.alive[static_cast<size_t>(i)] = true;
          rec.cell[static_cast<size_t>(i)] = i;
        }
        // Random matching: pair up a shuffled prefix.
        std::vector<int> ids(static_cast<size_t>(agents));
        std::iota(ids.begin(), ids.end(), 0);
        std::shuffle(ids.begin(), ids.end(), rng);
        int pairs = static_cast<int>(rng() % (agents / 2 + 1));
        for (int p = 0; p < pairs; ++p) {
          int a = std::min(ids[static_cast<size_t>(2 * p)], ids[static_cast<size_t>(2 * p + 1)]);
          int b = std::max(ids[static_cast<size_t>(2 * p)], ids[static_cast<size_t>(2 * p + 1)]);
          rec.links.push_back(link(s, a, b, 0.5));
          ++edge_steps;
        }
        t.steps.push_back(rec);
      }
      CHECK(metric_ETR(t) == doctest::Approx(2.0 * edge_steps));
    }
  }
  SUBCASE("EART maps report-free explorers to their lifetime") {
    MissionTrace t = blank_trace(3);
    t.is_explorer = {1, 1, 0};  // third agent is a relay-only contact partner
    t.is_relay = {0, 0, 1};
    t.lifetime = {80, 60, 80};
    for (int s = 0; s < 80; ++s) {
      StepRecord rec = blank_step(3);
      rec.alive = {true, s < 60, true};
      rec.cell = {0, s < 60 ? 1 : -1, 2};
      if (s < 4) rec.links.push_back(link(s, 0, 2, 0.2));
      t.steps.push_back(rec);
    }
    // Agent 0: 80/4 = 20; agent 1: no reports -> 60. Mean = 40.
    CHECK(metric_EART(t) == doctest::Approx(40.0));
    auto reports = reports_per_agent(t);
    CHECK(reports[0] == 4.0);
    CHECK(reports[1] == 0.0);
    CHECK(reports[2] == 4.0);
    CHECK(metric_ETR(t) == doctest::Approx(8.0));
  }
}

TEST_CASE("knowledge metrics follow the detection-probability ledger") {
  SUBCASE("single visits, double visits, and unvisited cells") {
    MissionTrace t = blank_trace(1, 5, 2);
    t.lifetime = {2};
    for (int s = 0; s < 2; ++s) {
      StepRecord rec = blank_step(1);
      rec.alive[0] = true;
      rec.cell[0] = 3;
      t.steps.push_back(rec);
    }
    KnowledgeSeries series;
    EtakResult etak = metric_ETAK(t, 0.63, &series);
    CHECK(series.eak[0][0] == doctest::Approx(0.63 / 10.0).epsilon(1e-12));
    double twice = 1.0 - 0.37 * 0.37;  // 0.8631
    CHECK(series.eak[1][0] == doctest::Approx(twice / 10.0).epsilon(1e-12));
    CHECK(etak.final_mean == doctest::Approx(twice / 10.0).epsilon(1e-12));
    CHECK(etak.time_mean == doctest::Approx((0.63 + twice) / 20.0).epsilon(1e-12));
  }
  SUBCASE("disjoint exploration without exchanges intersects to zero") {
    MissionTrace t = blank_trace(2, 4, 1);
    t.lifetime = {2, 2};
    for (int s = 0; s < 2; ++s) {
      StepRecord rec = blank_step(2);
      rec.alive = {true, true};
      rec.cell = {s, 2 + s};
      t.steps.push_back(rec);
    }
    EtakResult eik = metric_EIK(t, 0.63);
    CHECK(eik.time_mean == 0.0);
    CHECK(eik.final_mean == 0.0);
  }
  SUBCASE("a full exchange synchronizes beliefs, so EIK matches EAK") {
    MissionTrace t = blank_trace(2, 4, 1);
    t.lifetime = {2, 2};
    for (int s = 0; s < 2; ++s) {
      StepRecord rec = blank_step(2);
      rec.alive = {true, true};
      rec.cell = {s, 2 + s};
      rec.exchanges.push_back({0, 1});
      t.steps.push_back(rec);
    }
    KnowledgeSeries series;
    metric_ETAK(t, 0.63, &series);
    EtakResult eik = metric_EIK(t, 0.63);
    CHECK(series.eak[1][0] == doctest::Approx(series.eak[1][1]).epsilon(1e-12));
    CHECK(eik.final_mean == doctest::Approx(series.eak[1][0]).epsilon(1e-12));
  }
}

TEST_CASE("metric invariants hold on simulated missions") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    GridWorld grid = make_clustered_map(9, 9, 100.0, 0.6, 1000 + trial);
    MissionSetup setup;
    setup.grid = grid;
    int uavs = 2 + static_cast<int>(rng() % 2);
    for (int i = 0; i < uavs; ++i) {
      AgentSpec spec;
      spec.id = i;
      spec.kind = AgentKind::UAV;
      spec.roles.explorer = true;
      spec.roles.relay = true;
      spec.energy_budget = 300.0 + static_cast<double>(rng() % 400);
      setup.specs.push_back(spec);
    }
    setup.objective.w1 = 1.0;
    setup.objective.w2 = 0.0;
    MissionPlan plan = attraction_init(grid, setup.specs, setup.energy, AttractionConfig{},
                                       derive_seed(99, trial));
    MissionTrace trace;
    evaluate_objective(plan, setup, &trace);
    MetricReport report = compute_metrics(trace, grid, 0.63, 0.005);

    CHECK(report.E <= report.TPOC + 1e-12);
    CHECK(report.TPOC <= grid.total_poc() + 1e-12);
    CHECK(report.EP >= 0.0);
    CHECK(report.EP <= 1.0);

    // EIK never exceeds the weakest agent's final accumulated knowledge.
    KnowledgeSeries series;
    metric_ETAK(trace, 0.63, &series);
    double weakest = 1.0;
    for (double v : series.eak.back()) weakest = std::min(weakest, v);
    CHECK(report.EIK <= weakest + 1e-12);
    CHECK(report.EIK_final <= weakest + 1e-12);

    // Knowledge series are non-decreasing.
    for (size_t s = 1; s < series.eak.size(); ++s) {
      for (size_t i = 0; i < series.eak[s].size(); ++i) {
        CHECK(series.eak[s][i] >= series.eak[s - 1][i] - 1e-15);
      }
      CHECK(series.kmin_mean[s] >= series.kmin_mean[s - 1] - 1e-15);
    }

    // Objective consistency when cooperation is off.
    MissionSetup plain = setup;
    plain.objective.w1 = 0.0;
    plain.objective.w2 = 0.0;
    plain.objective.time_discount_eps = 0.0;
    MissionTrace plain_trace;
    double J0 = evaluate_objective(plan, plain, &plain_trace);
    CHECK(J0 == metric_TPOC(plain_trace));
    plain.objective.time_discount_eps = 0.005;
    double J1 = evaluate_objective(plan, plain, &plain_trace);
    CHECK(J1 == metric_E(plain_trace, 0.005));
  }
}

TEST_CASE("metric report serializes every scalar") {
  MissionTrace t = blank_trace(1);
  t.lifetime = {1};
  StepRecord rec = blank_step(1);
  rec.alive[0] = true;
  rec.cell[0] = 0;
  t.steps.push_back(rec);
  GridWorld grid = make_uniform_map(10, 10, 10.0, 0.5);
  MetricReport report = compute_metrics(t, grid, 0.63, 0.005);
  std::string json = metric_report_json(report, "eak.csv", "eik.csv");
  for (const char* key : {"\"E\"", "\"TPOC\"", "\"EP\"", "\"ETR\"", "\"EART\"", "\"ETAK\"",
                          "\"EIK\"", "\"eart_rate\"", "\"ETAK_final\"", "\"EIK_final\"",
                          "\"series_files\""}) {
    CHECK(json.find(key) != std::string::npos);
  }
}
