#include "aoinoma/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace aoinoma {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("ChannelConfig: " + what);
}

}  // namespace

void ChannelConfig::validate() const {
  require(num_devices >= 1, "num_devices must be >= 1");
  require(num_antennas >= 1, "num_antennas must be >= 1");
  require(pathloss_exponent > 0.0, "pathloss_exponent must be > 0");
  require(correlation >= 0.0 && correlation <= 1.0,
          "correlation must lie in [0, 1]");
  require(noise_variance > 0.0, "noise_variance must be > 0");
  require(bandwidth_hz > 0.0, "bandwidth_hz must be > 0");
  if (!distances_m.empty()) {
    require(static_cast<int>(distances_m.size()) == num_devices,
            "distances_m must have one entry per device");
    for (double d : distances_m)
      require(d > 0.0, "distances_m entries must be > 0");
  }
}

double large_scale_gain(double reference_gain_db, double distance_m,
                        double exponent) {
  return std::pow(10.0, reference_gain_db / 10.0) /
         std::pow(distance_m, exponent);
}

std::complex<double> gauss_markov_step(std::complex<double> prev, double rho,
                                       double gain, std::complex<double> z) {
  return rho * prev + std::sqrt(1.0 - rho * rho) * std::sqrt(gain) * z;
}

ChannelState init_channels(const ChannelConfig& cfg, Rng& rng) {
  cfg.validate();
  if (cfg.distances_m.empty())
    throw std::invalid_argument(
        "init_channels: distances_m must be populated");
  const int m = cfg.num_devices;
  const int k = cfg.num_antennas;
  ChannelState state;
  state.gain.resize(m);
  for (int j = 0; j < m; ++j)
    state.gain(j) = large_scale_gain(cfg.reference_gain_db,
                                     cfg.distances_m[j],
                                     cfg.pathloss_exponent);
  state.h.resize(k, m);
  for (int j = 0; j < m; ++j) {
    const double amp = std::sqrt(state.gain(j));
    for (int i = 0; i < k; ++i)
      state.h(i, j) = amp * standard_complex_normal(rng);
  }
  return state;
}

ChannelState evolve_channels(const ChannelState& state,
                             const ChannelConfig& cfg, Rng& rng) {
  ChannelState next;
  next.gain = state.gain;
  next.h.resize(state.h.rows(), state.h.cols());
  for (Eigen::Index j = 0; j < state.h.cols(); ++j)
    for (Eigen::Index i = 0; i < state.h.rows(); ++i)
      next.h(i, j) = gauss_markov_step(state.h(i, j), cfg.correlation,
                                       state.gain(j),
                                       standard_complex_normal(rng));
  return next;
}

Eigen::VectorXd received_powers(const Eigen::VectorXd& power_w,
                                const ChannelState& state) {
  if (power_w.size() != state.h.cols())
    throw std::invalid_argument(
        "received_powers: power vector length does not match device count");
  Eigen::VectorXd out(power_w.size());
  for (Eigen::Index j = 0; j < power_w.size(); ++j)
    out(j) = power_w(j) * state.h.col(j).squaredNorm();
  return out;
}

std::vector<int> sic_order(const Eigen::VectorXd& received_w) {
  std::vector<int> order(received_w.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return received_w(a) > received_w(b);
  });
  return order;
}

Eigen::VectorXd sinr_all(const Eigen::VectorXd& received_w,
                         double noise_variance) {
  const Eigen::Index m = received_w.size();
  Eigen::VectorXd out(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    double interference = 0.0;
    for (Eigen::Index k = 0; k < m; ++k)
      if (received_w(k) < received_w(j)) interference += received_w(k);
    out(j) = received_w(j) / (interference + noise_variance);
  }
  return out;
}

double rate_bps(double sinr, double bandwidth_hz) {
  return bandwidth_hz * std::log2(1.0 + sinr);
}

Eigen::VectorXd rates_bps(const Eigen::VectorXd& sinr, double bandwidth_hz) {
  Eigen::VectorXd out(sinr.size());
  for (Eigen::Index j = 0; j < sinr.size(); ++j)
    out(j) = rate_bps(sinr(j), bandwidth_hz);
  return out;
}

}  // namespace aoinoma
