#ifndef NARTPLAN_COOP_HPP
#define NARTPLAN_COOP_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "nartplan/radio.hpp"

namespace nartplan {

/// Value-of-movement clock for one agent (one per peer class in role-based
/// mode). tau is the target interval between meetings, t_sys the curvature
/// constant of the reward ramp.
struct VomClock {
  double tau = 1.0;
  double t_sys = 1.0;
  int last_exchange_step = 0;
};

/// Time-growing desire for communication: ramps from roughly -1 right after
/// an exchange up to 1 once tau steps have passed, clamped to [-1, 1].
double vom_value(const VomClock& clock, int step);

/// Cooperation reward/penalty of Eq-style sign logic: positive when the
/// desire to communicate and the link availability agree in sign.
double cooperation_term(double vom, double csi);

/// Weighted combination of the explorer-facing and relay-facing cooperation
/// terms.
double cooperation_term_role_based(double c_explorers, double c_relays, double w1, double w2);

/// Pairs (i < j) whose link clears the exchange threshold at this step.
std::vector<std::pair<int, int>> detect_exchanges(const CsiMatrix& matrix,
                                                  double min_csi = 0.0);

/// Per-agent belief of every agent's per-cell visit counts. counts[i][n][c]
/// is what agent i believes about agent n's visits to cell c; the self slot
/// is exact by construction.
class KnowledgeLedger {
public:
  KnowledgeLedger() = default;
  KnowledgeLedger(int n_agents, int n_cells)
      : n_agents_(n_agents), n_cells_(n_cells),
        counts_(static_cast<size_t>(n_agents) * n_agents * n_cells, 0) {}

  int agent_count() const { return n_agents_; }
  int cell_count() const { return n_cells_; }

  std::uint32_t count(int i, int n, int c) const { return counts_[idx(i, n, c)]; }
  void set_count(int i, int n, int c, std::uint32_t v) { counts_[idx(i, n, c)] = v; }

  /// Records one visit of agent i to cell c (its own slot).
  void record_visit(int i, int c) { ++counts_[idx(i, i, c)]; }

  /// Bidirectional data exchange: rows i and j both become the elementwise
  /// maximum of their pre-merge values.
  void merge(int i, int j);

  /// Total visits of cell c across the team, as believed by agent i.
  std::uint32_t believed_visits(int i, int c) const;

  bool rows_equal(int i, int j) const;

private:
  size_t idx(int i, int n, int c) const {
    return (static_cast<size_t>(i) * n_agents_ + n) * n_cells_ + c;
  }

  int n_agents_ = 0;
  int n_cells_ = 0;
  std::vector<std::uint32_t> counts_;
};

/// Applies one step's worth of exchanges against pre-merge snapshots, so the
/// outcome is independent of pair order and knowledge hops at most one link
/// per step.
void apply_step_exchanges(KnowledgeLedger& ledger,
                          const std::vector<std::pair<int, int>>& exchanges);

}  // namespace nartplan

#endif
