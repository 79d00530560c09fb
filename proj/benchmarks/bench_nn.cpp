#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "aoinoma/ddpg.hpp"
#include "aoinoma/nn.hpp"
#include "aoinoma/random.hpp"

using namespace aoinoma;

namespace {

Agent production_agent(int devices, Rng& rng) {
  AgentConfig cfg;
  return make_agent(3 * devices, devices, cfg, rng);
}

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i)
    m.data()[i] = standard_normal(rng);
  return m;
}

void BM_ActorForwardSingle(benchmark::State& state) {
  Rng rng(1);
  const Agent agent = production_agent(2, rng);
  const Eigen::VectorXd obs = random_matrix(6, 1, rng);
  for (auto _ : state)
    benchmark::DoNotOptimize(agent.actor.forward(obs));
}
BENCHMARK(BM_ActorForwardSingle);

void BM_ActorForwardBatch(benchmark::State& state) {
  Rng rng(2);
  const Agent agent = production_agent(2, rng);
  const Eigen::MatrixXd obs = random_matrix(6, state.range(0), rng);
  for (auto _ : state)
    benchmark::DoNotOptimize(agent.actor.forward_batch(obs));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ActorForwardBatch)->Arg(16)->Arg(64)->Arg(256);

void BM_CriticUpdate(benchmark::State& state) {
  Rng rng(3);
  Agent agent = production_agent(2, rng);
  AdamState opt = AdamState::like(agent.critic);
  const int n = static_cast<int>(state.range(0));
  Batch batch;
  batch.obs = random_matrix(6, n, rng);
  batch.power = random_matrix(2, n, rng).cwiseAbs();
  batch.next_obs = random_matrix(6, n, rng);
  batch.reward = random_matrix(n, 1, rng);
  for (auto _ : state) {
    const Eigen::VectorXd targets = critic_targets(
        batch, agent.target_actor, agent.target_critic, 0.99, 2.0);
    benchmark::DoNotOptimize(
        critic_update(agent.critic, opt, batch, targets, 1e-4));
  }
}
BENCHMARK(BM_CriticUpdate)->Arg(64);

void BM_ActorUpdate(benchmark::State& state) {
  Rng rng(4);
  Agent agent = production_agent(2, rng);
  AdamState opt = AdamState::like(agent.actor);
  const Eigen::MatrixXd obs =
      random_matrix(6, static_cast<int>(state.range(0)), rng);
  for (auto _ : state) {
    actor_update(agent.actor, opt, agent.critic, obs, 1e-3, 2.0);
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_ActorUpdate)->Arg(64);

void BM_SoftUpdate(benchmark::State& state) {
  Rng rng(5);
  Agent agent = production_agent(2, rng);
  for (auto _ : state) {
    soft_update(agent.actor, agent.target_actor, 0.001);
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_SoftUpdate);

}  // namespace

BENCHMARK_MAIN();
