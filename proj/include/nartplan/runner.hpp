#ifndef NARTPLAN_RUNNER_HPP
#define NARTPLAN_RUNNER_HPP

#include <string>
#include <vector>

#include "nartplan/metrics.hpp"
#include "nartplan/scenario.hpp"

namespace nartplan {

struct TrialResult {
  int trial = 0;
  std::uint64_t seed = 0;
  double objective = 0.0;
  MetricReport metrics;
  std::string directory;
};

struct RunResult {
  std::string directory;
  std::vector<TrialResult> trials;
};

/// Runs every trial of the scenario: grid build, EE tour, attraction init,
/// annealing, trace simulation, metric scoring, and file output. Trials are
/// independent; `parallel_trials` > 1 runs them concurrently with identical
/// outputs.
RunResult run_scenario(const Scenario& scenario, const std::string& out_dir,
                       int parallel_trials = 1);

/// Per-metric mean/min/max per run plus relative gaps against the first
/// (baseline) run, written as CSV.
void compare_runs(const std::vector<std::string>& run_dirs, const std::string& out_file);

}  // namespace nartplan

#endif
