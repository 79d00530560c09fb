#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "aoinoma/channel.hpp"
#include "aoinoma/env.hpp"
#include "aoinoma/random.hpp"

using namespace aoinoma;

namespace {

EnvConfig config_for(int devices) {
  EnvConfig cfg;
  cfg.channel.num_devices = devices;
  return cfg;
}

void BM_EnvStep(benchmark::State& state) {
  const int devices = static_cast<int>(state.range(0));
  Env env(config_for(devices), 1);
  const Eigen::VectorXd power = Eigen::VectorXd::Constant(devices, 1.0);
  for (auto _ : state) {
    if (env.done()) env.reset();
    benchmark::DoNotOptimize(env.step(power));
  }
}
BENCHMARK(BM_EnvStep)->Arg(2)->Arg(4)->Arg(8);

void BM_SimulateSlot(benchmark::State& state) {
  const int devices = static_cast<int>(state.range(0));
  const EnvConfig cfg = config_for(devices);
  Env env(cfg, 2);
  const Eigen::VectorXd power = Eigen::VectorXd::Constant(devices, 1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(simulate_slot(env.state(), power, cfg));
}
BENCHMARK(BM_SimulateSlot)->Arg(2)->Arg(4)->Arg(8);

void BM_SinrAll(benchmark::State& state) {
  Rng rng(3);
  const int m = static_cast<int>(state.range(0));
  Eigen::VectorXd received(m);
  for (int j = 0; j < m; ++j) received(j) = uniform_real(rng, 0.0, 1e-5);
  for (auto _ : state)
    benchmark::DoNotOptimize(sinr_all(received, 1e-8));
}
BENCHMARK(BM_SinrAll)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_EvolveChannels(benchmark::State& state) {
  const int devices = static_cast<int>(state.range(0));
  ChannelConfig cfg;
  cfg.num_devices = devices;
  cfg.distances_m.assign(static_cast<std::size_t>(devices), 75.0);
  Rng rng(4);
  ChannelState channels = init_channels(cfg, rng);
  for (auto _ : state) {
    channels = evolve_channels(channels, cfg, rng);
    benchmark::DoNotOptimize(channels);
  }
}
BENCHMARK(BM_EvolveChannels)->Arg(2)->Arg(8);

void BM_EpisodeRollout(benchmark::State& state) {
  Env env(config_for(2), 5);
  const PowerPolicy policy = [](const Eigen::VectorXd&, const SystemState&,
                                const EnvConfig& cfg) {
    return Eigen::VectorXd::Constant(cfg.channel.num_devices, 1.0)
        .eval();
  };
  for (auto _ : state)
    benchmark::DoNotOptimize(run_policy(env, policy, 1, 0.99));
  state.SetItemsProcessed(state.iterations() * env.config().horizon);
}
BENCHMARK(BM_EpisodeRollout);

}  // namespace

BENCHMARK_MAIN();
