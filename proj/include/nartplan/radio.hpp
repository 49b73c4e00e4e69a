#ifndef NARTPLAN_RADIO_HPP
#define NARTPLAN_RADIO_HPP

#include <vector>

#include "nartplan/fleet.hpp"

namespace nartplan {

/// Radio technology and propagation parameters. Defaults follow an
/// IEEE 802.11g link: 100 mW transmit power, -73 dBm sensitivity, isotropic
/// unity-gain antennas, free-space path loss.
struct RadioConfig {
  double frequency_hz = 2.4e9;
  double tx_power_dbm = 20.0;
  double gain_tx = 1.0;
  double gain_rx = 1.0;
  double sensitivity_dbm = -73.0;
  double path_loss_exponent = 2.0;
  double smoothing_k = 0.4;
  double smoothing_eps = 1e-6;

  void validate() const;
};

constexpr double kSpeedOfLight = 3.0e8;

/// Distances below this are clamped; altitude stacking keeps real agents
/// apart, the floor only keeps the model total.
constexpr double kMinLinkDistance = 0.1;

/// Estimated received power [dBm] from the log-distance form of the Friis
/// model; exactly free-space Friis at path_loss_exponent = 2.
double received_power(const RadioConfig& config, double distance_m);

/// Sigmoid-smoothed margin of received power over sensitivity, in (-1, 1).
/// Positive means the link can carry a data exchange.
double csi_smooth(const RadioConfig& config, double erp_dbm);

struct LinkSample {
  int step = 0;
  int agent_i = 0;
  int agent_j = 0;
  double distance_m = 0.0;
  double erp_dbm = 0.0;
  double csi = 0.0;
};

/// Symmetric per-step link matrix. Entries exist only between agents alive
/// at the step; the diagonal is absent.
class CsiMatrix {
public:
  CsiMatrix() = default;
  explicit CsiMatrix(int n_agents)
      : n_(n_agents), present_(static_cast<size_t>(n_agents) * n_agents, 0),
        csi_(static_cast<size_t>(n_agents) * n_agents, 0.0) {}

  int size() const { return n_; }
  bool present(int i, int j) const { return present_[idx(i, j)] != 0; }
  double csi(int i, int j) const { return csi_[idx(i, j)]; }

  void set(int i, int j, double value) {
    present_[idx(i, j)] = present_[idx(j, i)] = 1;
    csi_[idx(i, j)] = csi_[idx(j, i)] = value;
  }

private:
  size_t idx(int i, int j) const { return static_cast<size_t>(i) * n_ + j; }

  int n_ = 0;
  std::vector<std::uint8_t> present_;
  std::vector<double> csi_;
};

/// Pairwise csi over all alive agent pairs; emits one LinkSample per pair
/// into `samples` when non-null.
CsiMatrix pairwise_csi(const std::vector<Point3>& positions, const std::vector<bool>& alive,
                       const RadioConfig& config, int step = 0,
                       std::vector<LinkSample>* samples = nullptr);

/// Individual communication index of agent i: the best link it has at the
/// step. -1 when no alive peer exists.
double agent_csi(const CsiMatrix& matrix, int agent);

}  // namespace nartplan

#endif
