#include "nartplan/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace nartplan {

namespace {

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// First-visit POC per step, recomputed from cells. Simultaneous first visits
// credit the lowest agent index; iteration order must match the simulator.
std::vector<double> first_visit_poc(const MissionTrace& trace) {
  std::vector<bool> visited(trace.cell_poc.size(), false);
  std::vector<double> per_step(static_cast<size_t>(trace.n_steps()), 0.0);
  for (int s = 0; s < trace.n_steps(); ++s) {
    const StepRecord& rec = trace.steps[static_cast<size_t>(s)];
    double collected = 0.0;
    for (int i = 0; i < trace.n_agents(); ++i) {
      if (!rec.alive[static_cast<size_t>(i)] || !trace.is_explorer[static_cast<size_t>(i)]) {
        continue;
      }
      int c = rec.cell[static_cast<size_t>(i)];
      if (c >= 0 && !visited[static_cast<size_t>(c)]) {
        visited[static_cast<size_t>(c)] = true;
        collected += trace.cell_poc[static_cast<size_t>(c)];
      }
    }
    per_step[static_cast<size_t>(s)] = collected;
  }
  return per_step;
}

// Detection probability lookup: 1 - (1 - pod)^v for visit counts v.
class DetectTable {
public:
  explicit DetectTable(double pod) : q_(1.0 - pod) { table_.push_back(1.0); }

  double operator()(std::uint32_t visits) {
    while (table_.size() <= visits) {
      table_.push_back(table_.back() * q_);
    }
    return 1.0 - table_[visits];
  }

private:
  double q_;
  std::vector<double> table_;  // q^v
};

struct KnowledgeAggregates {
  std::vector<std::vector<double>> eak;  // [step][agent]
  std::vector<double> kmin_mean;         // [step]
};

// Replays the ledger from visits and exchange events, step by step.
KnowledgeAggregates replay_knowledge(const MissionTrace& trace, double pod) {
  int n_agents = trace.n_agents();
  int n_cells = static_cast<int>(trace.cell_poc.size());
  KnowledgeLedger ledger(n_agents, n_cells);
  DetectTable detect(pod);
  KnowledgeAggregates agg;
  agg.eak.resize(static_cast<size_t>(trace.n_steps()));
  agg.kmin_mean.resize(static_cast<size_t>(trace.n_steps()));
  double inv_vc = trace.n_valid_cells > 0 ? 1.0 / trace.n_valid_cells : 0.0;
  for (int s = 0; s < trace.n_steps(); ++s) {
    const StepRecord& rec = trace.steps[static_cast<size_t>(s)];
    for (int i = 0; i < n_agents; ++i) {
      if (rec.alive[static_cast<size_t>(i)] && trace.is_explorer[static_cast<size_t>(i)]) {
        int c = rec.cell[static_cast<size_t>(i)];
        if (c >= 0) ledger.record_visit(i, c);
      }
    }
    apply_step_exchanges(ledger, rec.exchanges);

    auto& eak_s = agg.eak[static_cast<size_t>(s)];
    eak_s.assign(static_cast<size_t>(n_agents), 0.0);
    double kmin_sum = 0.0;
    for (int c = 0; c < n_cells; ++c) {
      std::uint32_t vmin = 0;
      bool first = true;
      for (int i = 0; i < n_agents; ++i) {
        std::uint32_t v = ledger.believed_visits(i, c);
        eak_s[static_cast<size_t>(i)] += detect(v);
        if (first || v < vmin) {
          vmin = v;
          first = false;
        }
      }
      kmin_sum += detect(vmin);
    }
    for (int i = 0; i < n_agents; ++i) eak_s[static_cast<size_t>(i)] *= inv_vc;
    agg.kmin_mean[static_cast<size_t>(s)] = kmin_sum * inv_vc;
  }
  return agg;
}

}  // namespace

double metric_E(const MissionTrace& trace, double eps) {
  std::vector<double> per_step = first_visit_poc(trace);
  double total = 0.0;
  for (int s = 0; s < trace.n_steps(); ++s) {
    total += std::exp(-eps * s) * per_step[static_cast<size_t>(s)];
  }
  return total;
}

double metric_TPOC(const MissionTrace& trace) {
  std::vector<double> per_step = first_visit_poc(trace);
  double total = 0.0;
  for (double v : per_step) total += v;
  return total;
}

double metric_EP(const MissionTrace& trace, const GridWorld& grid) {
  std::vector<bool> visited(static_cast<size_t>(grid.cell_count()), false);
  for (const StepRecord& rec : trace.steps) {
    for (int i = 0; i < trace.n_agents(); ++i) {
      if (rec.alive[static_cast<size_t>(i)] && trace.is_explorer[static_cast<size_t>(i)] &&
          rec.cell[static_cast<size_t>(i)] >= 0) {
        visited[static_cast<size_t>(rec.cell[static_cast<size_t>(i)])] = true;
      }
    }
  }
  int count = 0;
  for (int c = 0; c < grid.cell_count(); ++c) {
    if (visited[static_cast<size_t>(c)] && grid.valid_mask()[static_cast<size_t>(c)]) {
      ++count;
    }
  }
  int vc = grid.valid_cell_count();
  return vc > 0 ? static_cast<double>(count) / vc : 0.0;
}

std::vector<double> reports_per_agent(const MissionTrace& trace) {
  std::vector<double> reports(static_cast<size_t>(trace.n_agents()), 0.0);
  for (const StepRecord& rec : trace.steps) {
    std::vector<bool> reported(static_cast<size_t>(trace.n_agents()), false);
    for (const LinkSample& link : rec.links) {
      if (link.csi >= 0.0) {
        reported[static_cast<size_t>(link.agent_i)] = true;
        reported[static_cast<size_t>(link.agent_j)] = true;
      }
    }
    for (int i = 0; i < trace.n_agents(); ++i) {
      if (reported[static_cast<size_t>(i)]) reports[static_cast<size_t>(i)] += 1.0;
    }
  }
  return reports;
}

double metric_ETR(const MissionTrace& trace) {
  std::vector<double> reports = reports_per_agent(trace);
  double total = 0.0;
  for (double r : reports) total += r;
  return total;
}

double metric_EART(const MissionTrace& trace) {
  std::vector<double> reports = reports_per_agent(trace);
  double sum = 0.0;
  int explorers = 0;
  for (int i = 0; i < trace.n_agents(); ++i) {
    if (!trace.is_explorer[static_cast<size_t>(i)]) continue;
    ++explorers;
    double life = static_cast<double>(trace.lifetime[static_cast<size_t>(i)]);
    double r = reports[static_cast<size_t>(i)];
    sum += r > 0.0 ? life / r : life;
  }
  return explorers > 0 ? sum / explorers : 0.0;
}

EtakResult metric_ETAK(const MissionTrace& trace, double pod, KnowledgeSeries* series) {
  KnowledgeAggregates agg = replay_knowledge(trace, pod);
  EtakResult result;
  int n_agents = trace.n_agents();
  int n_steps = trace.n_steps();
  if (n_agents == 0 || n_steps == 0) return result;
  for (int s = 0; s < n_steps; ++s) {
    for (int i = 0; i < n_agents; ++i) {
      result.time_sum += agg.eak[static_cast<size_t>(s)][static_cast<size_t>(i)];
    }
  }
  result.time_sum /= n_agents;
  result.time_mean = result.time_sum / n_steps;
  for (int i = 0; i < n_agents; ++i) {
    result.final_mean += agg.eak.back()[static_cast<size_t>(i)];
  }
  result.final_mean /= n_agents;
  if (series) {
    series->eak = std::move(agg.eak);
    series->kmin_mean = std::move(agg.kmin_mean);
  }
  return result;
}

EtakResult metric_EIK(const MissionTrace& trace, double pod) {
  KnowledgeAggregates agg = replay_knowledge(trace, pod);
  EtakResult result;
  int n_steps = trace.n_steps();
  if (n_steps == 0) return result;
  for (double v : agg.kmin_mean) result.time_sum += v;
  result.time_mean = result.time_sum / n_steps;
  result.final_mean = agg.kmin_mean.back();
  return result;
}

MetricReport compute_metrics(const MissionTrace& trace, const GridWorld& grid, double pod,
                             double eps, KnowledgeSeries* series) {
  MetricReport report;
  report.E = metric_E(trace, eps);
  report.TPOC = metric_TPOC(trace);
  report.EP = metric_EP(trace, grid);
  report.reports_per_agent = reports_per_agent(trace);
  report.ETR = 0.0;
  for (double r : report.reports_per_agent) report.ETR += r;
  report.EART = metric_EART(trace);
  double rate_sum = 0.0;
  int explorers = 0;
  for (int i = 0; i < trace.n_agents(); ++i) {
    if (!trace.is_explorer[static_cast<size_t>(i)]) continue;
    ++explorers;
    double life = static_cast<double>(trace.lifetime[static_cast<size_t>(i)]);
    rate_sum += life > 0.0 ? report.reports_per_agent[static_cast<size_t>(i)] / life : 0.0;
  }
  report.eart_rate = explorers > 0 ? rate_sum / explorers : 0.0;

  KnowledgeSeries local;
  EtakResult etak = metric_ETAK(trace, pod, series ? series : &local);
  const KnowledgeSeries& ks = series ? *series : local;
  report.ETAK = etak.time_mean;
  report.ETAK_sum = etak.time_sum;
  report.ETAK_final = etak.final_mean;
  double eik_sum = 0.0;
  for (double v : ks.kmin_mean) eik_sum += v;
  report.EIK_sum = eik_sum;
  report.EIK = trace.n_steps() > 0 ? eik_sum / trace.n_steps() : 0.0;
  report.EIK_final = ks.kmin_mean.empty() ? 0.0 : ks.kmin_mean.back();
  report.lifetime = trace.lifetime;
  report.pod = pod;
  report.eps = eps;
  return report;
}

std::string metric_report_json(const MetricReport& report, const std::string& eak_csv_name,
                               const std::string& eik_csv_name) {
  nlohmann::json j;
  j["E"] = report.E;
  j["TPOC"] = report.TPOC;
  j["EP"] = report.EP;
  j["ETR"] = report.ETR;
  j["EART"] = report.EART;
  j["eart_rate"] = report.eart_rate;
  j["ETAK"] = report.ETAK;
  j["ETAK_sum"] = report.ETAK_sum;
  j["ETAK_final"] = report.ETAK_final;
  j["EIK"] = report.EIK;
  j["EIK_sum"] = report.EIK_sum;
  j["EIK_final"] = report.EIK_final;
  j["reports_per_agent"] = report.reports_per_agent;
  j["lifetime"] = report.lifetime;
  j["pod"] = report.pod;
  j["eps"] = report.eps;
  j["series_files"] = {{"eak", eak_csv_name}, {"eik", eik_csv_name}};
  return j.dump(2) + "\n";
}

void write_connectivity_csv(const MissionTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write connectivity csv: " + path);
  out << "step,agent_i,agent_j,distance_m,erp_dbm,csi\n";
  for (const StepRecord& rec : trace.steps) {
    for (const LinkSample& link : rec.links) {
      out << link.step << ',' << link.agent_i << ',' << link.agent_j << ','
          << fmt(link.distance_m) << ',' << fmt(link.erp_dbm) << ',' << fmt(link.csi) << '\n';
    }
  }
}

void write_vom_csv(const MissionTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write vom csv: " + path);
  out << "step,agent_id,vom,vom_etd,vom_r,csi,exchanged_with\n";
  for (int s = 0; s < trace.n_steps(); ++s) {
    const StepRecord& rec = trace.steps[static_cast<size_t>(s)];
    for (int i = 0; i < trace.n_agents(); ++i) {
      if (!rec.alive[static_cast<size_t>(i)]) continue;
      out << s << ',' << i << ',' << fmt(rec.vom[static_cast<size_t>(i)]) << ','
          << fmt(rec.vom_etd[static_cast<size_t>(i)]) << ','
          << fmt(rec.vom_r[static_cast<size_t>(i)]) << ','
          << fmt(rec.csi_best[static_cast<size_t>(i)]) << ',';
      bool first = true;
      for (const auto& [a, b] : rec.exchanges) {
        int peer = a == i ? b : (b == i ? a : -1);
        if (peer < 0) continue;
        if (!first) out << ';';
        out << peer;
        first = false;
      }
      out << '\n';
    }
  }
}

void write_eak_series_csv(const KnowledgeSeries& series, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write eak series csv: " + path);
  out << "step,agent_id,eak\n";
  for (size_t s = 0; s < series.eak.size(); ++s) {
    for (size_t i = 0; i < series.eak[s].size(); ++i) {
      out << s << ',' << i << ',' << fmt(series.eak[s][i]) << '\n';
    }
  }
}

void write_eik_series_csv(const KnowledgeSeries& series, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write eik series csv: " + path);
  out << "step,eik\n";
  for (size_t s = 0; s < series.kmin_mean.size(); ++s) {
    out << s << ',' << fmt(series.kmin_mean[s]) << '\n';
  }
}

}  // namespace nartplan
