#include "aoinoma/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace aoinoma {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("EnvConfig: " + what);
}

}  // namespace

void EnvConfig::validate() const {
  require(slot_seconds > 0.0, "slot_seconds must be > 0");
  require(packet_bits > 0.0, "packet_bits must be > 0");
  require(sample_cost_j >= 0.0, "sample_cost_j must be >= 0");
  require(max_power_w > 0.0, "max_power_w must be > 0");
  require(aoi_weight >= 0.0, "aoi_weight must be >= 0");
  require(energy_weight >= 0.0, "energy_weight must be >= 0");
  require(horizon >= 1, "horizon must be >= 1");
  require(distance_min_m > 0.0, "distance_min_m must be > 0");
  require(distance_max_m >= distance_min_m,
          "distance_max_m must be >= distance_min_m");
  channel.validate();
}

TransmissionOutcome transmission_outcomes(const Eigen::VectorXd& rates_bps,
                                          double slot_seconds,
                                          double packet_bits) {
  const Eigen::Index m = rates_bps.size();
  TransmissionOutcome out;
  out.delivered.assign(static_cast<std::size_t>(m), 0);
  out.airtime_s.resize(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    if (rates_bps(j) * slot_seconds >= packet_bits) {
      out.delivered[static_cast<std::size_t>(j)] = 1;
      out.airtime_s(j) = packet_bits / rates_bps(j);
    } else {
      out.airtime_s(j) = slot_seconds;
    }
  }
  return out;
}

double sample_coefficient(bool delivered, double device_aoi_prev,
                          const EnvConfig& cfg) {
  const double age_drop =
      delivered ? device_aoi_prev + cfg.slot_seconds : 0.0;
  return cfg.energy_weight * cfg.sample_cost_j - cfg.aoi_weight * age_drop;
}

std::vector<std::uint8_t> optimal_samples(
    const std::vector<std::uint8_t>& delivered,
    const Eigen::VectorXd& device_aoi_prev, const EnvConfig& cfg) {
  std::vector<std::uint8_t> out(delivered.size(), 0);
  for (std::size_t j = 0; j < delivered.size(); ++j)
    if (sample_coefficient(delivered[j] != 0,
                           device_aoi_prev(static_cast<Eigen::Index>(j)),
                           cfg) < 0.0)
      out[j] = 1;
  return out;
}

AoiUpdate update_aoi(const Eigen::VectorXd& device_aoi_prev,
                     const Eigen::VectorXd& bs_aoi_prev,
                     const std::vector<std::uint8_t>& sampled,
                     const std::vector<std::uint8_t>& delivered,
                     const Eigen::VectorXd& airtime_s, double slot_seconds) {
  const Eigen::Index m = device_aoi_prev.size();
  AoiUpdate out;
  out.device_aoi.resize(m);
  out.bs_aoi.resize(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const auto idx = static_cast<std::size_t>(j);
    out.device_aoi(j) =
        sampled[idx] ? 0.0 : device_aoi_prev(j) + slot_seconds;
    out.bs_aoi(j) = delivered[idx] ? out.device_aoi(j) + airtime_s(j)
                                   : bs_aoi_prev(j) + slot_seconds;
  }
  return out;
}

Eigen::VectorXd energy_consumed(const std::vector<std::uint8_t>& sampled,
                                const Eigen::VectorXd& power_w,
                                const Eigen::VectorXd& airtime_s,
                                const EnvConfig& cfg) {
  const Eigen::Index m = power_w.size();
  Eigen::VectorXd out(m);
  for (Eigen::Index j = 0; j < m; ++j)
    out(j) = (sampled[static_cast<std::size_t>(j)] ? cfg.sample_cost_j : 0.0) +
             power_w(j) * airtime_s(j);
  return out;
}

double slot_reward(const Eigen::VectorXd& bs_aoi,
                   const Eigen::VectorXd& energy_j, const EnvConfig& cfg) {
  double cost = 0.0;
  for (Eigen::Index j = 0; j < bs_aoi.size(); ++j)
    cost += cfg.aoi_weight * bs_aoi(j) + cfg.energy_weight * energy_j(j);
  return -cost;
}

double discounted_return(std::span<const double> rewards, double beta) {
  double total = 0.0;
  double factor = 1.0;
  for (double r : rewards) {
    total += factor * r;
    factor *= beta;
  }
  return total;
}

SlotOutcome simulate_slot(const SystemState& state,
                          const Eigen::VectorXd& power_w,
                          const EnvConfig& cfg) {
  const Eigen::Index m = state.channels.h.cols();
  if (power_w.size() != m)
    throw std::invalid_argument(
        "simulate_slot: power vector length does not match device count");

  SlotOutcome out;
  out.power_w = power_w.cwiseMax(0.0).cwiseMin(cfg.max_power_w);
  out.clamped = (out.power_w.array() != power_w.array()).any();

  const Eigen::VectorXd received = received_powers(out.power_w, state.channels);
  out.sinr = sinr_all(received, cfg.channel.noise_variance);
  out.rate_bps = rates_bps(out.sinr, cfg.channel.bandwidth_hz);

  TransmissionOutcome tx = transmission_outcomes(out.rate_bps,
                                                 cfg.slot_seconds,
                                                 cfg.packet_bits);
  out.delivered = std::move(tx.delivered);
  out.airtime_s = std::move(tx.airtime_s);
  out.sampled = optimal_samples(out.delivered, state.device_aoi, cfg);

  AoiUpdate aoi = update_aoi(state.device_aoi, state.bs_aoi, out.sampled,
                             out.delivered, out.airtime_s, cfg.slot_seconds);
  out.device_aoi = std::move(aoi.device_aoi);
  out.bs_aoi = std::move(aoi.bs_aoi);
  out.energy_j = energy_consumed(out.sampled, out.power_w, out.airtime_s, cfg);
  out.reward = slot_reward(out.bs_aoi, out.energy_j, cfg);
  return out;
}

Eigen::VectorXd make_observation(const SystemState& state,
                                 const EnvConfig& cfg) {
  const Eigen::Index m = state.bs_aoi.size();
  Eigen::VectorXd obs(3 * m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const double sinr = state.last_sinr(j);
    obs(3 * j + 0) = state.last_success[static_cast<std::size_t>(j)] ? 1.0 : 0.0;
    obs(3 * j + 1) = cfg.log_sinr_obs ? std::log1p(sinr) : sinr;
    obs(3 * j + 2) = state.bs_aoi(j);
  }
  return obs;
}

std::vector<double> draw_distances(const EnvConfig& cfg, Rng& rng) {
  std::vector<double> out(static_cast<std::size_t>(cfg.channel.num_devices));
  for (double& d : out)
    d = uniform_real(rng, cfg.distance_min_m, cfg.distance_max_m);
  return out;
}

Env::Env(EnvConfig cfg, std::uint64_t seed)
    : cfg_(std::move(cfg)), rng_(seed) {
  cfg_.validate();
  if (cfg_.channel.distances_m.empty())
    cfg_.channel.distances_m = draw_distances(cfg_, rng_);
  reset();
}

Eigen::VectorXd Env::reset() {
  const int m = cfg_.channel.num_devices;
  state_.device_aoi = Eigen::VectorXd::Zero(m);
  state_.bs_aoi = Eigen::VectorXd::Zero(m);
  state_.last_success.assign(static_cast<std::size_t>(m), 0);
  state_.slot = 0;
  state_.channels = init_channels(cfg_.channel, rng_);
  const Eigen::VectorXd probe = Eigen::VectorXd::Ones(m);
  state_.last_sinr = sinr_all(received_powers(probe, state_.channels),
                              cfg_.channel.noise_variance);
  return make_observation(state_, cfg_);
}

Env::StepResult Env::step(const Eigen::VectorXd& power_w) {
  if (done())
    throw std::logic_error("Env::step called past the episode horizon");
  StepResult result;
  result.outcome = simulate_slot(state_, power_w, cfg_);
  state_.device_aoi = result.outcome.device_aoi;
  state_.bs_aoi = result.outcome.bs_aoi;
  state_.last_success = result.outcome.delivered;
  state_.last_sinr = result.outcome.sinr;
  state_.slot += 1;
  state_.channels = evolve_channels(state_.channels, cfg_.channel, rng_);
  result.observation = make_observation(state_, cfg_);
  return result;
}

EvalSummary run_policy(Env& env, const PowerPolicy& policy, int episodes,
                       double beta) {
  EvalSummary summary;
  summary.episodes.reserve(static_cast<std::size_t>(episodes));
  const int horizon = env.config().horizon;
  std::vector<double> rewards(static_cast<std::size_t>(horizon));
  for (int e = 0; e < episodes; ++e) {
    Eigen::VectorXd obs = env.reset();
    EpisodeStats stats;
    for (int t = 0; t < horizon; ++t) {
      const Eigen::VectorXd power = policy(obs, env.state(), env.config());
      Env::StepResult r = env.step(power);
      rewards[static_cast<std::size_t>(t)] = r.outcome.reward;
      stats.cum_reward += r.outcome.reward;
      stats.mean_aoi += r.outcome.bs_aoi.sum();
      stats.mean_energy += r.outcome.energy_j.sum();
      obs = std::move(r.observation);
    }
    stats.mean_aoi /= horizon;
    stats.mean_energy /= horizon;
    stats.discounted_return = discounted_return(rewards, beta);
    summary.episodes.push_back(stats);
  }
  const auto n = static_cast<double>(summary.episodes.size());
  if (n > 0) {
    for (const EpisodeStats& s : summary.episodes) {
      summary.mean_slot_reward += s.cum_reward / horizon;
      summary.mean_aoi += s.mean_aoi;
      summary.mean_energy += s.mean_energy;
      summary.mean_return += s.discounted_return;
    }
    summary.mean_slot_reward /= n;
    summary.mean_aoi /= n;
    summary.mean_energy /= n;
    summary.mean_return /= n;
  }
  return summary;
}

}  // namespace aoinoma
