#include "nartplan/coop.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nartplan {

double vom_value(const VomClock& clock, int step) {
  double elapsed = static_cast<double>(step - clock.last_exchange_step);
  if (elapsed > clock.tau) {
    return 1.0;
  }
  double raw = (2.0 * std::exp(elapsed / clock.t_sys) - 1.0) /
                   (std::exp(clock.tau / clock.t_sys) - 1.0) -
               1.0;
  return std::clamp(raw, -1.0, 1.0);
}

double cooperation_term(double vom, double csi) { return vom * csi; }

double cooperation_term_role_based(double c_explorers, double c_relays, double w1, double w2) {
  return w1 * c_explorers + w2 * c_relays;
}

std::vector<std::pair<int, int>> detect_exchanges(const CsiMatrix& matrix, double min_csi) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < matrix.size(); ++i) {
    for (int j = i + 1; j < matrix.size(); ++j) {
      if (matrix.present(i, j) && matrix.csi(i, j) >= min_csi) {
        out.emplace_back(i, j);
      }
    }
  }
  return out;
}

void KnowledgeLedger::merge(int i, int j) {
  if (i == j) {
    throw std::invalid_argument("ledger merge needs two distinct agents");
  }
  size_t row = static_cast<size_t>(n_agents_) * n_cells_;
  auto* ri = counts_.data() + static_cast<size_t>(i) * row;
  auto* rj = counts_.data() + static_cast<size_t>(j) * row;
  for (size_t k = 0; k < row; ++k) {
    std::uint32_t m = std::max(ri[k], rj[k]);
    ri[k] = m;
    rj[k] = m;
  }
}

std::uint32_t KnowledgeLedger::believed_visits(int i, int c) const {
  std::uint32_t total = 0;
  for (int n = 0; n < n_agents_; ++n) {
    total += count(i, n, c);
  }
  return total;
}

bool KnowledgeLedger::rows_equal(int i, int j) const {
  size_t row = static_cast<size_t>(n_agents_) * n_cells_;
  return std::equal(counts_.begin() + static_cast<std::ptrdiff_t>(i * row),
                    counts_.begin() + static_cast<std::ptrdiff_t>((i + 1) * row),
                    counts_.begin() + static_cast<std::ptrdiff_t>(j * row));
}

void apply_step_exchanges(KnowledgeLedger& ledger,
                          const std::vector<std::pair<int, int>>& exchanges) {
  if (exchanges.empty()) return;
  int n_agents = ledger.agent_count();
  int n_cells = ledger.cell_count();
  std::vector<bool> involved(static_cast<size_t>(n_agents), false);
  for (const auto& [i, j] : exchanges) {
    involved[static_cast<size_t>(i)] = true;
    involved[static_cast<size_t>(j)] = true;
  }
  // Pre-merge row snapshots of every participant.
  size_t row = static_cast<size_t>(n_agents) * n_cells;
  std::vector<std::vector<std::uint32_t>> snapshot(static_cast<size_t>(n_agents));
  for (int a = 0; a < n_agents; ++a) {
    if (!involved[static_cast<size_t>(a)]) continue;
    auto& snap = snapshot[static_cast<size_t>(a)];
    snap.resize(row);
    size_t k = 0;
    for (int n = 0; n < n_agents; ++n) {
      for (int c = 0; c < n_cells; ++c) {
        snap[k++] = ledger.count(a, n, c);
      }
    }
  }
  auto merge_from_snapshot = [&](int dst, int src) {
    const auto& snap = snapshot[static_cast<size_t>(src)];
    size_t k = 0;
    for (int n = 0; n < n_agents; ++n) {
      for (int c = 0; c < n_cells; ++c, ++k) {
        if (snap[k] > ledger.count(dst, n, c)) {
          ledger.set_count(dst, n, c, snap[k]);
        }
      }
    }
  };
  for (const auto& [i, j] : exchanges) {
    merge_from_snapshot(i, j);
    merge_from_snapshot(j, i);
  }
}

}  // namespace nartplan
