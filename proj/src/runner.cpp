#include "nartplan/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace fs = std::filesystem;

namespace nartplan {

namespace {

std::string trial_dir_name(int trial) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "trial_%03d", trial);
  return buf;
}

TrialResult run_trial(const Scenario& scenario, const GridWorld& grid, int trial,
                      const std::string& out_dir) {
  TrialResult result;
  result.trial = trial;
  result.seed = scenario.seeds[static_cast<size_t>(trial)];

  MissionSetup setup;
  setup.grid = grid;
  setup.specs = build_roster(scenario, trial);
  setup.radio = scenario.radio;
  setup.objective = scenario.objective;
  setup.energy = scenario.energy;
  setup.delta_z = scenario.delta_z;
  bool has_mobile_ee = false;
  for (const AgentSpec& spec : setup.specs) {
    if (spec.kind == AgentKind::MobileEE) has_mobile_ee = true;
  }
  if (has_mobile_ee) {
    setup.mobile_ee_loop = mobile_ee_base_loop(setup.grid).cells;
  }
  setup.validate();

  MissionPlan initial = attraction_init(setup.grid, setup.specs, setup.energy,
                                        scenario.attraction, result.seed);
  AnnealConfig anneal = scenario.anneal;
  anneal.seed = result.seed;
  MissionPlan plan = optimize(initial, setup, anneal);
  result.objective = plan.objective;

  MissionTrace trace;
  evaluate_objective(plan, setup, &trace);
  KnowledgeSeries series;
  result.metrics = compute_metrics(trace, setup.grid, scenario.pod,
                                   scenario.objective.time_discount_eps, &series);

  fs::path dir = fs::path(out_dir) / trial_dir_name(trial);
  fs::create_directories(dir);
  result.directory = dir.string();
  write_paths_csv(setup.specs, plan.paths, setup.grid, setup.energy, setup.delta_z,
                  (dir / "plan.csv").string());
  write_connectivity_csv(trace, (dir / "connectivity.csv").string());
  write_vom_csv(trace, (dir / "vom_trace.csv").string());
  write_eak_series_csv(series, (dir / "eak_series.csv").string());
  write_eik_series_csv(series, (dir / "eik_series.csv").string());
  std::ofstream metrics_out(dir / "metrics.json");
  metrics_out << metric_report_json(result.metrics, "eak_series.csv", "eik_series.csv");
  return result;
}

nlohmann::json load_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("missing file: " + path.string());
  }
  nlohmann::json j;
  in >> j;
  return j;
}

}  // namespace

RunResult run_scenario(const Scenario& scenario, const std::string& out_dir,
                       int parallel_trials) {
  scenario.validate();
  if (parallel_trials < 1) parallel_trials = 1;
  auto start = std::chrono::steady_clock::now();
  fs::create_directories(out_dir);

  GridWorld grid = build_grid(scenario);
  // Keep the exact map next to the results.
  save_poc_map_file(grid, (fs::path(out_dir) / "map.grid").string());

  RunResult run;
  run.directory = out_dir;
  run.trials.resize(static_cast<size_t>(scenario.trials));

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    while (true) {
      int trial = next.fetch_add(1);
      if (trial >= scenario.trials) break;
      try {
        run.trials[static_cast<size_t>(trial)] = run_trial(scenario, grid, trial, out_dir);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  int n_workers = std::min(parallel_trials, scenario.trials);
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < n_workers; ++w) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - start)
                     .count();

  nlohmann::json manifest;
  manifest["scenario"] = nlohmann::json::parse(scenario_to_json(scenario));
  manifest["wall_ms"] = elapsed;
  auto trials = nlohmann::json::array();
  for (const TrialResult& t : run.trials) {
    trials.push_back({{"trial", t.trial},
                      {"seed", t.seed},
                      {"objective", t.objective},
                      {"directory", trial_dir_name(t.trial)}});
  }
  manifest["trials"] = trials;
  std::ofstream out(fs::path(out_dir) / "manifest.json");
  out << manifest.dump(2) << "\n";
  return run;
}

void compare_runs(const std::vector<std::string>& run_dirs, const std::string& out_file) {
  if (run_dirs.size() < 2) {
    throw std::invalid_argument("compare needs at least two run directories");
  }
  static const std::vector<std::string> kMetrics = {"E",    "TPOC", "EP",  "ETR",
                                                    "EART", "ETAK", "EIK"};
  struct RunStats {
    std::string label;
    std::map<std::string, std::vector<double>> values;
  };
  std::vector<RunStats> stats;
  std::vector<std::string> missing;
  for (const std::string& dir : run_dirs) {
    RunStats rs;
    fs::path manifest_path = fs::path(dir) / "manifest.json";
    if (!fs::exists(manifest_path)) {
      missing.push_back(manifest_path.string());
      continue;
    }
    nlohmann::json manifest = load_json_file(manifest_path);
    rs.label = manifest["scenario"]["use_case"].get<std::string>() + ":" + dir;
    for (const auto& t : manifest["trials"]) {
      fs::path metrics_path =
          fs::path(dir) / t["directory"].get<std::string>() / "metrics.json";
      if (!fs::exists(metrics_path)) {
        missing.push_back(metrics_path.string());
        continue;
      }
      nlohmann::json m = load_json_file(metrics_path);
      for (const std::string& name : kMetrics) {
        rs.values[name].push_back(m[name].get<double>());
      }
    }
    stats.push_back(std::move(rs));
  }
  if (!missing.empty()) {
    std::string msg = "compare: missing metric files:";
    for (const std::string& m : missing) msg += "\n  " + m;
    throw std::runtime_error(msg);
  }

  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
  };

  std::ofstream out(out_file);
  if (!out) {
    throw std::runtime_error("cannot write comparison file: " + out_file);
  }
  out << "metric,run,mean,min,max,gap_vs_baseline_pct\n";
  for (const std::string& name : kMetrics) {
    double base = mean(stats[0].values[name]);
    for (const RunStats& rs : stats) {
      const std::vector<double>& v = rs.values.at(name);
      double m = mean(v);
      double lo = *std::min_element(v.begin(), v.end());
      double hi = *std::max_element(v.begin(), v.end());
      out << name << ',' << rs.label << ',' << m << ',' << lo << ',' << hi << ',';
      if (base != 0.0) {
        out << 100.0 * (m - base) / std::abs(base);
      }
      out << '\n';
    }
  }
}

}  // namespace nartplan
