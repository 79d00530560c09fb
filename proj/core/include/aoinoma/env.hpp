#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "aoinoma/channel.hpp"
#include "aoinoma/random.hpp"

namespace aoinoma {

/// Slotted uplink status-update system. Every slot each device is handed a
/// transmit power, the BS attempts SIC decoding, and devices that delivered
/// a packet apply the closed-form optimal sampling rule. The per-slot reward
/// is the negative weighted sum of base-station age and consumed energy.
struct EnvConfig {
  double slot_seconds = 0.1;   ///< tau
  double packet_bits = 1000.0; ///< status-update packet size Q
  double sample_cost_j = 0.5;  ///< energy per fresh sample C_s
  double max_power_w = 2.0;    ///< transmit power cap P_max
  double aoi_weight = 0.5;     ///< gamma_a
  double energy_weight = 0.5;  ///< gamma_e
  int horizon = 500;           ///< slots per episode T
  double distance_min_m = 50.0;
  double distance_max_m = 100.0;
  /// Observe log(1 + sinr) instead of raw sinr. Off by default; raw values
  /// match the reference setup, the log is available for conditioning.
  bool log_sinr_obs = false;
  ChannelConfig channel;

  void validate() const;
};

struct SystemState {
  Eigen::VectorXd device_aoi;        ///< phi, age at the device
  Eigen::VectorXd bs_aoi;            ///< Phi, age at the base station
  std::vector<std::uint8_t> last_success;  ///< u of the previous slot
  Eigen::VectorXd last_sinr;
  int slot = 0;
  ChannelState channels;
};

struct TransmissionOutcome {
  /// u_m = 1 iff the full packet fits in the slot: rate * tau >= Q.
  std::vector<std::uint8_t> delivered;
  /// Time the radio was on: Q / rate on success (<= tau), tau on failure.
  Eigen::VectorXd airtime_s;
};

TransmissionOutcome transmission_outcomes(const Eigen::VectorXd& rates_bps,
                                          double slot_seconds,
                                          double packet_bits);

/// Coefficient multiplying s_m in the per-slot cost. Sampling is optimal
/// exactly when this is negative.
double sample_coefficient(bool delivered, double device_aoi_prev,
                          const EnvConfig& cfg);

/// Closed-form optimal sampling decisions: sample iff the device delivered
/// this slot and the sampling cost is outweighed by the age reduction.
std::vector<std::uint8_t> optimal_samples(
    const std::vector<std::uint8_t>& delivered,
    const Eigen::VectorXd& device_aoi_prev, const EnvConfig& cfg);

struct AoiUpdate {
  Eigen::VectorXd device_aoi;
  Eigen::VectorXd bs_aoi;
};

/// Age recursions. A sampling device resets its local age to zero, others
/// age by tau. The BS age of a delivering device becomes the device age of
/// this slot plus the delivery delay; otherwise it ages by tau.
AoiUpdate update_aoi(const Eigen::VectorXd& device_aoi_prev,
                     const Eigen::VectorXd& bs_aoi_prev,
                     const std::vector<std::uint8_t>& sampled,
                     const std::vector<std::uint8_t>& delivered,
                     const Eigen::VectorXd& airtime_s, double slot_seconds);

/// Per-device energy: sampling cost plus transmit power times airtime.
Eigen::VectorXd energy_consumed(const std::vector<std::uint8_t>& sampled,
                                const Eigen::VectorXd& power_w,
                                const Eigen::VectorXd& airtime_s,
                                const EnvConfig& cfg);

/// r = -sum_m (gamma_a * Phi_m + gamma_e * eps_m).
double slot_reward(const Eigen::VectorXd& bs_aoi,
                   const Eigen::VectorXd& energy_j, const EnvConfig& cfg);

/// sum_t beta^(t-1) r_t.
double discounted_return(std::span<const double> rewards, double beta);

struct SlotOutcome {
  Eigen::VectorXd power_w;  ///< executed (clamped) allocation
  bool clamped = false;
  Eigen::VectorXd sinr;
  Eigen::VectorXd rate_bps;
  std::vector<std::uint8_t> delivered;
  Eigen::VectorXd airtime_s;
  std::vector<std::uint8_t> sampled;
  Eigen::VectorXd device_aoi;
  Eigen::VectorXd bs_aoi;
  Eigen::VectorXd energy_j;
  double reward = 0.0;
};

/// Evaluates one slot against a frozen state without advancing it. Shared
/// by Env::step and the genetic baseline's fitness.
SlotOutcome simulate_slot(const SystemState& state,
                          const Eigen::VectorXd& power_w,
                          const EnvConfig& cfg);

/// Observation fed to the agent: [u_m, sinr_m, Phi_m] per device,
/// device-major, from the most recent slot.
Eigen::VectorXd make_observation(const SystemState& state,
                                 const EnvConfig& cfg);

/// Uniform device distances on [distance_min_m, distance_max_m]. The Env
/// constructor draws these same values when the config leaves them empty,
/// so pinning them up front keeps train and test on one system.
std::vector<double> draw_distances(const EnvConfig& cfg, Rng& rng);

class Env {
 public:
  /// Draws device distances (if not fixed in the config) from the seeded
  /// stream, then resets. One instance is single-owner; clone per thread.
  Env(EnvConfig cfg, std::uint64_t seed);

  /// Starts a new episode: ages zeroed, fresh fading block, initial sinr
  /// measured at 1 W per device. Returns the initial observation.
  Eigen::VectorXd reset();

  struct StepResult {
    Eigen::VectorXd observation;
    SlotOutcome outcome;
  };

  /// Runs one slot with the given allocation and advances the fading.
  /// Throws std::logic_error once the episode horizon is reached.
  StepResult step(const Eigen::VectorXd& power_w);

  bool done() const { return state_.slot >= cfg_.horizon; }
  int observation_size() const { return 3 * cfg_.channel.num_devices; }
  int num_devices() const { return cfg_.channel.num_devices; }
  const SystemState& state() const { return state_; }
  const EnvConfig& config() const { return cfg_; }

 private:
  EnvConfig cfg_;
  SystemState state_;
  Rng rng_;
};

struct EpisodeStats {
  double cum_reward = 0.0;
  double mean_aoi = 0.0;     ///< (1/T) sum_t sum_m Phi
  double mean_energy = 0.0;  ///< (1/T) sum_t sum_m eps
  double discounted_return = 0.0;
};

struct EvalSummary {
  std::vector<EpisodeStats> episodes;
  double mean_slot_reward = 0.0;  ///< average reward over every slot run
  double mean_aoi = 0.0;
  double mean_energy = 0.0;
  double mean_return = 0.0;
};

/// Allocation callback: sees the latest observation plus the frozen system
/// state, returns the power vector for the coming slot.
using PowerPolicy = std::function<Eigen::VectorXd(
    const Eigen::VectorXd& obs, const SystemState&, const EnvConfig&)>;

/// Rolls complete episodes and aggregates the per-episode statistics.
EvalSummary run_policy(Env& env, const PowerPolicy& policy, int episodes,
                       double beta);

}  // namespace aoinoma
