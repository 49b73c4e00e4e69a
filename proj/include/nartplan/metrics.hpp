#ifndef NARTPLAN_METRICS_HPP
#define NARTPLAN_METRICS_HPP

#include <string>
#include <utility>
#include <vector>

#include "nartplan/coop.hpp"
#include "nartplan/fleet.hpp"
#include "nartplan/radio.hpp"

namespace nartplan {

/// One simulated timestep: occupancy, link samples, exchanges, and the
/// reward terms that went into the objective.
struct StepRecord {
  std::vector<int> cell;          // flat cell index per agent, -1 when dead
  std::vector<bool> alive;
  std::vector<LinkSample> links;  // alive pairs only, i < j
  std::vector<std::pair<int, int>> exchanges;
  std::vector<double> vom;        // unified VoM per agent (NaN when dead)
  std::vector<double> vom_etd;    // explorer-facing clock (== vom when not role-based)
  std::vector<double> vom_r;      // relay-facing clock
  std::vector<double> csi_best;   // best link per agent, -1 when peerless
  std::vector<double> coop;       // cooperation term per agent
  double poc_collected = 0.0;     // first-visit POC gathered this step
};

/// Step-indexed record of a simulated mission, self-contained for metric
/// computation: carries the prior copy so metrics recompute first-visit POC
/// independently of the simulator's accumulation.
struct MissionTrace {
  int width = 0;
  int height = 0;
  double cell_size = 0.0;
  int n_valid_cells = 0;
  std::vector<double> cell_poc;
  std::vector<std::uint8_t> valid_mask;
  std::vector<std::uint8_t> is_explorer;  // per agent
  std::vector<std::uint8_t> is_relay;
  std::vector<int> lifetime;              // per agent, in steps
  std::vector<StepRecord> steps;

  int n_agents() const { return static_cast<int>(lifetime.size()); }
  int n_steps() const { return static_cast<int>(steps.size()); }
};

struct KnowledgeSeries {
  std::vector<std::vector<double>> eak;  // [step][agent]
  std::vector<double> kmin_mean;         // [step], cell-averaged min knowledge
};

struct MetricReport {
  double E = 0.0;
  double TPOC = 0.0;
  double EP = 0.0;
  double ETR = 0.0;
  double EART = 0.0;
  double eart_rate = 0.0;   // literal reports-per-step variant
  double ETAK = 0.0;        // time-normalized mean (headline)
  double ETAK_sum = 0.0;    // raw time sum over steps
  double ETAK_final = 0.0;  // final-step mean
  double EIK = 0.0;         // time-normalized mean (headline)
  double EIK_sum = 0.0;
  double EIK_final = 0.0;
  std::vector<double> reports_per_agent;
  std::vector<int> lifetime;
  double pod = 0.0;
  double eps = 0.0;
};

/// Time-discounted first-visit POC accumulated by the explorer agents.
double metric_E(const MissionTrace& trace, double eps);

/// Total first-visit POC, undiscounted.
double metric_TPOC(const MissionTrace& trace);

/// Fraction of valid cells visited at least once by an explorer.
double metric_EP(const MissionTrace& trace, const GridWorld& grid);

/// Total reports: every agent gains one report per step in which it has at
/// least one feasible link.
double metric_ETR(const MissionTrace& trace);

std::vector<double> reports_per_agent(const MissionTrace& trace);

/// Mean of lifetime/reports over explorers; report-free agents contribute
/// their whole lifetime.
double metric_EART(const MissionTrace& trace);

struct EtakResult {
  double time_mean = 0.0;
  double time_sum = 0.0;
  double final_mean = 0.0;
};

/// Expected accumulated knowledge: replays the ledger from the trace events
/// and averages per-cell detection probability across agents. Fills `series`
/// with the per-step EAK_i values and cell-averaged min knowledge when
/// non-null.
EtakResult metric_ETAK(const MissionTrace& trace, double pod, KnowledgeSeries* series = nullptr);

/// Expected intersected knowledge: cell-wise minimum detection probability
/// across all agents, aggregated like ETAK.
EtakResult metric_EIK(const MissionTrace& trace, double pod);

MetricReport compute_metrics(const MissionTrace& trace, const GridWorld& grid, double pod,
                             double eps, KnowledgeSeries* series = nullptr);

/// Serialization. The JSON report carries every scalar plus relative paths
/// of the series CSVs next to it.
std::string metric_report_json(const MetricReport& report, const std::string& eak_csv_name,
                               const std::string& eik_csv_name);

void write_connectivity_csv(const MissionTrace& trace, const std::string& path);
void write_vom_csv(const MissionTrace& trace, const std::string& path);
void write_eak_series_csv(const KnowledgeSeries& series, const std::string& path);
void write_eik_series_csv(const KnowledgeSeries& series, const std::string& path);

}  // namespace nartplan

#endif
