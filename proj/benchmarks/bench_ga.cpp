#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "aoinoma/baselines.hpp"
#include "aoinoma/env.hpp"
#include "aoinoma/random.hpp"

using namespace aoinoma;

namespace {

EnvConfig config_for(int devices) {
  EnvConfig cfg;
  cfg.channel.num_devices = devices;
  return cfg;
}

void BM_GaFitness(benchmark::State& state) {
  const int devices = static_cast<int>(state.range(0));
  const EnvConfig cfg = config_for(devices);
  Env env(cfg, 1);
  Rng rng(2);
  const Eigen::VectorXd power = random_allocation(devices, 2.0, rng);
  for (auto _ : state)
    benchmark::DoNotOptimize(ga_fitness(power, env.state(), cfg));
}
BENCHMARK(BM_GaFitness)->Arg(2)->Arg(4);

void BM_GaAllocate(benchmark::State& state) {
  const int devices = static_cast<int>(state.range(0));
  const EnvConfig cfg = config_for(devices);
  Env env(cfg, 3);
  Rng rng(4);
  const GaConfig ga;
  for (auto _ : state)
    benchmark::DoNotOptimize(ga_allocate(env.state(), cfg, ga, rng));
  state.SetItemsProcessed(state.iterations() * ga.population *
                          (ga.generations + 1));
}
BENCHMARK(BM_GaAllocate)->Arg(2)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
