#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "aoinoma/random.hpp"

namespace aoinoma {

/// Uplink radio model: M single-antenna devices, K receive antennas at the
/// base station, Rayleigh block fading with first-order Gauss-Markov
/// evolution between slots, and NOMA reception with successive interference
/// cancellation in descending received-power order.
struct ChannelConfig {
  int num_devices = 2;
  int num_antennas = 4;
  /// Device-to-BS distances in meters. Leave empty to have the environment
  /// draw them uniformly from its configured range at construction.
  std::vector<double> distances_m;
  double reference_gain_db = -30.0;  ///< path gain at 1 m
  double pathloss_exponent = 2.0;
  double correlation = 0.95;      ///< slot-to-slot fading correlation rho
  double noise_variance = 1e-8;   ///< receiver noise power sigma_R^2 [W]
  double bandwidth_hz = 18e3;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Fading state for one slot: h is K x M (column m = device m's vector
/// channel), gain holds the large-scale power gains g_m.
struct ChannelState {
  Eigen::MatrixXcd h;
  Eigen::VectorXd gain;
};

/// Large-scale power gain g = 10^(ref_db/10) / d^exponent.
double large_scale_gain(double reference_gain_db, double distance_m,
                        double exponent);

/// One Gauss-Markov update of a single fading coefficient:
/// h' = rho * h + sqrt(1 - rho^2) * sqrt(gain) * z.
std::complex<double> gauss_markov_step(std::complex<double> prev, double rho,
                                       double gain, std::complex<double> z);

/// Draws the initial block-fading state h_m(0) = sqrt(g_m) * z_m.
/// Requires cfg.distances_m to be populated.
ChannelState init_channels(const ChannelConfig& cfg, Rng& rng);

/// Advances every coefficient by one slot.
ChannelState evolve_channels(const ChannelState& state,
                             const ChannelConfig& cfg, Rng& rng);

/// Per-device received powers p_m * ||h_m||^2.
Eigen::VectorXd received_powers(const Eigen::VectorXd& power_w,
                                const ChannelState& state);

/// Device indices in SIC decoding order: descending received power,
/// ties broken by ascending device index.
std::vector<int> sic_order(const Eigen::VectorXd& received_w);

/// Post-SIC SINR for every device. Device m sees interference only from
/// devices with strictly smaller received power (decoded after m).
Eigen::VectorXd sinr_all(const Eigen::VectorXd& received_w,
                         double noise_variance);

/// Shannon rate W * log2(1 + sinr) in bit/s.
double rate_bps(double sinr, double bandwidth_hz);

Eigen::VectorXd rates_bps(const Eigen::VectorXd& sinr, double bandwidth_hz);

}  // namespace aoinoma
