#include "nartplan/radio.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nartplan {

void RadioConfig::validate() const {
  if (!(frequency_hz > 0.0)) {
    throw std::invalid_argument("radio frequency must be positive");
  }
  if (!(path_loss_exponent >= 1.0)) {
    throw std::invalid_argument("path loss exponent must be >= 1");
  }
  if (!(smoothing_k > 0.0)) {
    throw std::invalid_argument("csi smoothing k must be positive");
  }
  if (!(gain_tx > 0.0) || !(gain_rx > 0.0)) {
    throw std::invalid_argument("antenna gains must be positive");
  }
}

double received_power(const RadioConfig& config, double distance_m) {
  if (!(distance_m > 0.0)) {
    throw std::invalid_argument("received_power: distance must be positive");
  }
  double d = std::max(distance_m, kMinLinkDistance);
  double loss = 10.0 * config.path_loss_exponent *
                std::log10(4.0 * std::numbers::pi * d * config.frequency_hz / kSpeedOfLight);
  return config.tx_power_dbm + 10.0 * std::log10(config.gain_tx) +
         10.0 * std::log10(config.gain_rx) - loss;
}

double csi_smooth(const RadioConfig& config, double erp_dbm) {
  double x = config.smoothing_k * (erp_dbm - (config.sensitivity_dbm - config.smoothing_eps));
  return x / (1.0 + std::abs(x));
}

CsiMatrix pairwise_csi(const std::vector<Point3>& positions, const std::vector<bool>& alive,
                       const RadioConfig& config, int step,
                       std::vector<LinkSample>* samples) {
  int n = static_cast<int>(positions.size());
  CsiMatrix matrix(n);
  for (int i = 0; i < n; ++i) {
    if (!alive[static_cast<size_t>(i)]) continue;
    for (int j = i + 1; j < n; ++j) {
      if (!alive[static_cast<size_t>(j)]) continue;
      double dx = positions[i].x - positions[j].x;
      double dy = positions[i].y - positions[j].y;
      double dz = positions[i].z - positions[j].z;
      double dist = std::max(std::sqrt(dx * dx + dy * dy + dz * dz), kMinLinkDistance);
      double erp = received_power(config, dist);
      double csi = csi_smooth(config, erp);
      matrix.set(i, j, csi);
      if (samples) {
        samples->push_back(LinkSample{step, i, j, dist, erp, csi});
      }
    }
  }
  return matrix;
}

double agent_csi(const CsiMatrix& matrix, int agent) {
  bool any = false;
  double best = -1.0;
  for (int j = 0; j < matrix.size(); ++j) {
    if (j == agent || !matrix.present(agent, j)) continue;
    double v = matrix.csi(agent, j);
    if (!any || v > best) {
      best = v;
      any = true;
    }
  }
  return any ? best : -1.0;
}

}  // namespace nartplan
