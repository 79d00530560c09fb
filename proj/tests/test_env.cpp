#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "aoinoma/env.hpp"
#include "oracles.hpp"

using namespace aoinoma;

namespace {

EnvConfig small_env(int devices) {
  EnvConfig cfg;
  cfg.channel.num_devices = devices;
  cfg.channel.distances_m.assign(static_cast<std::size_t>(devices), 60.0);
  cfg.horizon = 40;
  return cfg;
}

}  // namespace

TEST_CASE("transmission_outcomes splits on rate * tau vs packet size") {
  Eigen::VectorXd rates(4);
  rates << 20000.0, 10000.0, 9999.0, 0.0;
  const TransmissionOutcome tx = transmission_outcomes(rates, 0.1, 1000.0);
  CHECK(tx.delivered == std::vector<std::uint8_t>{1, 1, 0, 0});
  CHECK(tx.airtime_s(0) == doctest::Approx(0.05).epsilon(1e-12));
  // boundary rate * tau == Q counts as delivered with delay tau
  CHECK(tx.airtime_s(1) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(tx.airtime_s(2) == 0.1);
  CHECK(tx.airtime_s(3) == 0.1);
}

TEST_CASE("delivery airtime never exceeds the slot") {
  Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    Eigen::VectorXd rates(1);
    rates << uniform_real(rng, 0.0, 1e6);
    const TransmissionOutcome tx = transmission_outcomes(rates, 0.1, 1000.0);
    if (tx.delivered[0]) CHECK(tx.airtime_s(0) <= 0.1);
    CHECK(tx.delivered[0] == (rates(0) * 0.1 >= 1000.0 ? 1 : 0));
  }
}

TEST_CASE("sample_coefficient on frozen instances") {
  const EnvConfig cfg;  // gamma_a = gamma_e = 0.5, C_s = 0.5, tau = 0.1
  CHECK(sample_coefficient(false, 0.7, cfg) ==
        doctest::Approx(0.25).epsilon(1e-12));
  CHECK(sample_coefficient(true, 0.5, cfg) ==
        doctest::Approx(-0.05).epsilon(1e-12));
  // break-even age: 0.5 * 0.5 == 0.5 * (0.4 + 0.1), strict rule says skip
  CHECK(sample_coefficient(true, 0.4, cfg) == doctest::Approx(0.0));
  const std::vector<std::uint8_t> delivered{1};
  Eigen::VectorXd age(1);
  age << 0.4;
  CHECK(optimal_samples(delivered, age, cfg) ==
        std::vector<std::uint8_t>{0});
  age << 0.4000001;
  CHECK(optimal_samples(delivered, age, cfg) ==
        std::vector<std::uint8_t>{1});
}

TEST_CASE("devices that did not deliver never sample") {
  const EnvConfig cfg;
  Rng rng(9);
  for (int i = 0; i < 500; ++i) {
    Eigen::VectorXd age(1);
    age << uniform_real(rng, 0.0, 100.0);
    CHECK(optimal_samples({0}, age, cfg) == std::vector<std::uint8_t>{0});
  }
}

TEST_CASE("optimal_samples minimizes the slot cost over the hypercube") {
  EnvConfig cfg = small_env(3);
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    cfg.aoi_weight = uniform_real(rng, 0.0, 1.0);
    cfg.energy_weight = uniform_real(rng, 0.0, 1.0);
    const int m = 3;
    std::vector<std::uint8_t> delivered(m);
    Eigen::VectorXd age(m), bs_age(m), power(m), airtime(m);
    for (int j = 0; j < m; ++j) {
      delivered[j] = rng() % 2;
      age(j) = uniform_real(rng, 0.0, 5.0);
      bs_age(j) = uniform_real(rng, 0.0, 5.0);
      power(j) = uniform_real(rng, 0.0, 2.0);
      airtime(j) = delivered[j] ? uniform_real(rng, 0.0, 0.1) : 0.1;
    }
    const std::vector<std::uint8_t> chosen =
        optimal_samples(delivered, age, cfg);
    const double chosen_cost = oracles::slot_cost_for_samples(
        chosen, delivered, age, bs_age, power, airtime, cfg);
    const double best = oracles::exhaustive_min_slot_cost(
        delivered, age, bs_age, power, airtime, cfg);
    CHECK(chosen_cost <= best + 1e-12 * std::abs(best));
  }
}

TEST_CASE("update_aoi recursions on frozen instances") {
  Eigen::VectorXd age(1), bs_age(1), airtime(1);
  age << 0.5;
  bs_age << 1.0;
  airtime << 0.05;

  AoiUpdate up = update_aoi(age, bs_age, {1}, {1}, airtime, 0.1);
  CHECK(up.device_aoi(0) == 0.0);
  CHECK(up.bs_aoi(0) == doctest::Approx(0.05).epsilon(1e-12));

  up = update_aoi(age, bs_age, {0}, {1}, airtime, 0.1);
  CHECK(up.device_aoi(0) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(up.bs_aoi(0) == doctest::Approx(0.65).epsilon(1e-12));

  airtime << 0.1;
  up = update_aoi(age, bs_age, {0}, {0}, airtime, 0.1);
  CHECK(up.device_aoi(0) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(up.bs_aoi(0) == doctest::Approx(1.1).epsilon(1e-12));

  up = update_aoi(age, bs_age, {1}, {0}, airtime, 0.1);
  CHECK(up.device_aoi(0) == 0.0);
  CHECK(up.bs_aoi(0) == doctest::Approx(1.1).epsilon(1e-12));
}

TEST_CASE("energy charges the sample cost plus transmit airtime") {
  const EnvConfig cfg;
  Eigen::VectorXd power(2), airtime(2);
  power << 1.0, 2.0;
  airtime << 0.05, 0.1;
  const Eigen::VectorXd e = energy_consumed({1, 0}, power, airtime, cfg);
  CHECK(e(0) == doctest::Approx(0.55).epsilon(1e-12));
  CHECK(e(1) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("slot_reward is the negative weighted cost sum") {
  const EnvConfig cfg;
  Eigen::VectorXd bs_aoi(1), energy(1);
  bs_aoi << 1.0;
  energy << 0.1;
  CHECK(slot_reward(bs_aoi, energy, cfg) ==
        doctest::Approx(-0.55).epsilon(1e-12));

  Eigen::VectorXd bs2(2), en2(2);
  bs2 << 1.0, 2.0;
  en2 << 0.1, 0.3;
  CHECK(slot_reward(bs2, en2, cfg) ==
        doctest::Approx(-(0.5 * 3.0 + 0.5 * 0.4)).epsilon(1e-12));
}

TEST_CASE("discounted_return applies beta^(t-1)") {
  const std::vector<double> rewards{1.0, 1.0, 1.0};
  CHECK(discounted_return(rewards, 0.5) ==
        doctest::Approx(1.75).epsilon(1e-15));
  CHECK(discounted_return(rewards, 1.0) == doctest::Approx(3.0));
  CHECK(discounted_return({}, 0.9) == 0.0);
}

TEST_CASE("slot cost decomposes into s * C1 + C2 exactly") {
  EnvConfig cfg;
  Rng rng(31);
  for (int trial = 0; trial < 2000; ++trial) {
    cfg.aoi_weight = uniform_real(rng, 0.0, 2.0);
    cfg.energy_weight = uniform_real(rng, 0.0, 2.0);
    cfg.sample_cost_j = uniform_real(rng, 0.0, 1.0);
    const bool delivered = rng() % 2;
    const double age = uniform_real(rng, 0.0, 10.0);
    const double bs_age = uniform_real(rng, 0.0, 10.0);
    const double power = uniform_real(rng, 0.0, 2.0);
    const double delay = uniform_real(rng, 0.0, 0.1);
    for (bool sampled : {false, true}) {
      Eigen::VectorXd age_v(1), bs_v(1), p_v(1), air_v(1);
      age_v << age;
      bs_v << bs_age;
      p_v << power;
      air_v << (delivered ? delay : cfg.slot_seconds);
      const double via_env = oracles::slot_cost_for_samples(
          {static_cast<std::uint8_t>(sampled)},
          {static_cast<std::uint8_t>(delivered)}, age_v, bs_v, p_v, air_v,
          cfg);
      const double via_decomposition = oracles::decomposed_slot_cost(
          sampled, delivered, age, bs_age, power, delay, cfg);
      CHECK(oracles::relative_error(via_env, via_decomposition) <= 1e-12);
      // C1 must also match the library's own coefficient
      const double c1 = sample_coefficient(delivered, age, cfg);
      const double c2 = oracles::decomposed_slot_cost(false, delivered, age,
                                                      bs_age, power, delay,
                                                      cfg);
      CHECK(oracles::relative_error(via_env, (sampled ? c1 : 0.0) + c2) <=
            1e-12);
    }
  }
}

TEST_CASE("reset zeroes ages and probes sinr at one watt") {
  const EnvConfig cfg = small_env(2);
  Env env(cfg, 3);
  const Eigen::VectorXd obs = env.reset();
  REQUIRE(obs.size() == 6);
  const Eigen::VectorXd probe_sinr =
      sinr_all(received_powers(Eigen::VectorXd::Ones(2), env.state().channels),
               cfg.channel.noise_variance);
  for (int m = 0; m < 2; ++m) {
    CHECK(obs(3 * m + 0) == 0.0);
    CHECK(obs(3 * m + 1) == probe_sinr(m));
    CHECK(obs(3 * m + 2) == 0.0);
  }
  CHECK(env.state().slot == 0);
  CHECK_FALSE(env.done());
}

TEST_CASE("step reports the slot it just ran in the observation") {
  const EnvConfig cfg = small_env(2);
  Env env(cfg, 3);
  env.reset();
  Eigen::VectorXd power(2);
  power << 1.5, 0.5;
  const Env::StepResult r = env.step(power);
  REQUIRE(r.observation.size() == 6);
  for (int m = 0; m < 2; ++m) {
    CHECK(r.observation(3 * m + 0) == (r.outcome.delivered[m] ? 1.0 : 0.0));
    CHECK(r.observation(3 * m + 1) == r.outcome.sinr(m));
    CHECK(r.observation(3 * m + 2) == r.outcome.bs_aoi(m));
  }
  CHECK(env.state().slot == 1);
  CHECK(r.outcome.power_w == power);
  CHECK_FALSE(r.outcome.clamped);
}

TEST_CASE("out of range powers are clamped and flagged") {
  const EnvConfig cfg = small_env(2);
  Env env(cfg, 3);
  env.reset();
  Eigen::VectorXd power(2);
  power << -1.0, 5.0;
  const Env::StepResult r = env.step(power);
  CHECK(r.outcome.clamped);
  CHECK(r.outcome.power_w(0) == 0.0);
  CHECK(r.outcome.power_w(1) == 2.0);
  CHECK(std::isfinite(r.outcome.reward));
}

TEST_CASE("episodes end at the horizon") {
  EnvConfig cfg = small_env(1);
  cfg.horizon = 3;
  Env env(cfg, 1);
  env.reset();
  const Eigen::VectorXd p = Eigen::VectorXd::Ones(1);
  for (int t = 0; t < 3; ++t) env.step(p);
  CHECK(env.done());
  CHECK_THROWS_AS((void)env.step(p), std::logic_error);
  env.reset();
  CHECK_FALSE(env.done());
}

TEST_CASE("log_sinr_obs switches the observation scale") {
  EnvConfig cfg = small_env(1);
  Env raw(cfg, 5);
  cfg.log_sinr_obs = true;
  Env logged(cfg, 5);
  const Eigen::VectorXd o_raw = raw.reset();
  const Eigen::VectorXd o_log = logged.reset();
  CHECK(o_log(1) == doctest::Approx(std::log1p(o_raw(1))).epsilon(1e-12));
}

TEST_CASE("same seed reproduces the full trajectory bit for bit") {
  const EnvConfig cfg = small_env(3);
  Env a(cfg, 77);
  Env b(cfg, 77);
  a.reset();
  b.reset();
  Rng rng(5);
  for (int t = 0; t < 30; ++t) {
    Eigen::VectorXd p(3);
    for (int j = 0; j < 3; ++j) p(j) = uniform_real(rng, 0.0, 2.0);
    const Env::StepResult ra = a.step(p);
    const Env::StepResult rb = b.step(p);
    CHECK(ra.outcome.reward == rb.outcome.reward);
    CHECK(ra.observation == rb.observation);
  }
}

TEST_CASE("draw_distances matches what the constructor draws") {
  EnvConfig cfg;
  cfg.channel.num_devices = 4;
  cfg.horizon = 5;
  Rng rng(123);
  const std::vector<double> expected = draw_distances(cfg, rng);
  Env env(cfg, 123);
  CHECK(env.config().channel.distances_m == expected);
  for (double d : expected) {
    CHECK(d >= cfg.distance_min_m);
    CHECK(d <= cfg.distance_max_m);
  }
}

TEST_CASE("run_policy aggregates per-episode statistics") {
  EnvConfig cfg = small_env(2);
  cfg.horizon = 10;
  Env env(cfg, 2);
  int calls = 0;
  PowerPolicy policy = [&calls](const Eigen::VectorXd&, const SystemState&,
                                const EnvConfig& c) {
    ++calls;
    return Eigen::VectorXd::Ones(c.channel.num_devices);
  };
  const EvalSummary summary = run_policy(env, policy, 3, 0.99);
  CHECK(calls == 30);
  REQUIRE(summary.episodes.size() == 3);
  double acc = 0.0;
  for (const EpisodeStats& s : summary.episodes) {
    CHECK(s.cum_reward < 0.0);
    CHECK(s.mean_aoi > 0.0);
    CHECK(s.mean_energy > 0.0);
    acc += s.cum_reward / cfg.horizon;
  }
  CHECK(summary.mean_slot_reward == doctest::Approx(acc / 3).epsilon(1e-12));
}

TEST_CASE("EnvConfig validation names the offending field") {
  EnvConfig cfg;
  cfg.slot_seconds = 0.0;
  CHECK_THROWS_WITH_AS(cfg.validate(),
                       "EnvConfig: slot_seconds must be > 0",
                       std::invalid_argument);
  cfg.slot_seconds = 0.1;
  cfg.packet_bits = -5.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.packet_bits = 1000.0;
  cfg.distance_max_m = 10.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
