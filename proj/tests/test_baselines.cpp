#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "aoinoma/baselines.hpp"
#include "oracles.hpp"

using namespace aoinoma;

namespace {

EnvConfig tiny_env(int devices) {
  EnvConfig cfg;
  cfg.channel.num_devices = devices;
  cfg.channel.distances_m.assign(static_cast<std::size_t>(devices), 60.0);
  cfg.horizon = 25;
  return cfg;
}

SystemState state_after(Env& env, int slots, Rng& rng) {
  env.reset();
  for (int t = 0; t < slots; ++t) {
    Eigen::VectorXd p(env.num_devices());
    for (int j = 0; j < p.size(); ++j) p(j) = uniform_real(rng, 0.0, 2.0);
    env.step(p);
  }
  return env.state();
}

}  // namespace

TEST_CASE("random_allocation stays inside the power box") {
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const Eigen::VectorXd p = random_allocation(4, 2.0, rng);
    REQUIRE(p.size() == 4);
    CHECK(p.minCoeff() >= 0.0);
    CHECK(p.maxCoeff() <= 2.0);
  }
  Rng a(9), b(9);
  CHECK(random_allocation(3, 2.0, a) == random_allocation(3, 2.0, b));
}

TEST_CASE("crossover swaps exactly one gene between the parents") {
  Rng rng(2);
  Eigen::VectorXd a(4), b(4);
  a << 0.1, 0.2, 0.3, 0.4;
  b << 1.1, 1.2, 1.3, 1.4;
  for (int trial = 0; trial < 100; ++trial) {
    const GaPair out = ga_crossover(a, b, rng);
    int swapped = -1;
    for (int j = 0; j < 4; ++j) {
      if (out.a(j) != a(j)) {
        CHECK(swapped == -1);
        swapped = j;
      }
    }
    REQUIRE(swapped >= 0);
    CHECK(out.a(swapped) == b(swapped));
    CHECK(out.b(swapped) == a(swapped));
    for (int j = 0; j < 4; ++j)
      if (j != swapped) {
        CHECK(out.a(j) == a(j));
        CHECK(out.b(j) == b(j));
      }
  }
}

TEST_CASE("mutation redraws exactly one gene inside the box") {
  Rng rng(3);
  Eigen::VectorXd a(4);
  a << 0.1, 0.2, 0.3, 0.4;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::VectorXd out = ga_mutate(a, 2.0, rng);
    int changed = 0;
    for (int j = 0; j < 4; ++j)
      if (out(j) != a(j)) {
        ++changed;
        CHECK(out(j) >= 0.0);
        CHECK(out(j) <= 2.0);
      }
    CHECK(changed <= 1);
  }
}

TEST_CASE("ga_fitness equals the reward the environment would pay") {
  const EnvConfig cfg = tiny_env(3);
  Env env(cfg, 4);
  Rng rng(5);
  state_after(env, 7, rng);
  const SystemState frozen = env.state();
  Eigen::VectorXd p(3);
  p << 0.4, 1.3, 1.9;
  const double fitness = ga_fitness(p, frozen, cfg);
  const Env::StepResult r = env.step(p);
  CHECK(fitness == r.outcome.reward);
}

TEST_CASE("ga_allocate is elitist, budgeted and in-range") {
  const EnvConfig cfg = tiny_env(2);
  Env env(cfg, 6);
  Rng rng(7);
  GaConfig ga;
  ga.population = 10;
  ga.generations = 20;
  for (int slot = 0; slot < 20; ++slot) {
    const SystemState frozen = state_after(env, slot % 5, rng);
    const GaResult result = ga_allocate(frozen, cfg, ga, rng);
    REQUIRE(result.best_per_generation.size() ==
            static_cast<std::size_t>(ga.generations) + 1);
    for (std::size_t g = 1; g < result.best_per_generation.size(); ++g)
      CHECK(result.best_per_generation[g] >=
            result.best_per_generation[g - 1]);
    CHECK(result.best_fitness == result.best_per_generation.back());
    CHECK(result.fitness_evaluations <=
          static_cast<long>(ga.population) * (ga.generations + 1));
    CHECK(result.best.minCoeff() >= 0.0);
    CHECK(result.best.maxCoeff() <= cfg.max_power_w);
    CHECK(result.best_fitness ==
          doctest::Approx(ga_fitness(result.best, frozen, cfg))
              .epsilon(1e-12));
  }
}

TEST_CASE("ga_allocate is deterministic for a fixed rng state") {
  const EnvConfig cfg = tiny_env(2);
  Env env(cfg, 8);
  Rng rng(9);
  const SystemState frozen = state_after(env, 3, rng);
  Rng a(42), b(42);
  const GaConfig ga;
  const GaResult ra = ga_allocate(frozen, cfg, ga, a);
  const GaResult rb = ga_allocate(frozen, cfg, ga, b);
  CHECK(ra.best == rb.best);
  CHECK(ra.best_fitness == rb.best_fitness);
  CHECK(ra.fitness_evaluations == rb.fitness_evaluations);
}

TEST_CASE("the genetic search beats a single random draw on average") {
  const EnvConfig cfg = tiny_env(2);
  Env env(cfg, 10);
  Rng rng(11);
  GaConfig ga;
  ga.generations = 15;
  double ga_total = 0.0, random_total = 0.0;
  const int trials = 30;
  for (int i = 0; i < trials; ++i) {
    const SystemState frozen = state_after(env, i % 4, rng);
    ga_total += ga_allocate(frozen, cfg, ga, rng).best_fitness;
    random_total +=
        ga_fitness(random_allocation(2, cfg.max_power_w, rng), frozen, cfg);
  }
  CHECK(ga_total / trials > random_total / trials);
}

TEST_CASE("baseline evaluators are deterministic per seed") {
  const EnvConfig cfg = tiny_env(2);
  const EvalSummary r1 = evaluate_random(cfg, 0.99, 3, 13);
  const EvalSummary r2 = evaluate_random(cfg, 0.99, 3, 13);
  REQUIRE(r1.episodes.size() == 3);
  CHECK(r1.mean_slot_reward == r2.mean_slot_reward);
  CHECK(r1.mean_aoi == r2.mean_aoi);

  GaConfig ga;
  ga.population = 6;
  ga.generations = 4;
  const EvalSummary g1 = evaluate_ga(cfg, ga, 0.99, 2, 13);
  const EvalSummary g2 = evaluate_ga(cfg, ga, 0.99, 2, 13);
  CHECK(g1.mean_slot_reward == g2.mean_slot_reward);
  CHECK(g1.mean_slot_reward > r1.mean_slot_reward);
}

TEST_CASE("GaConfig validation names the offending field") {
  GaConfig ga;
  ga.population = 1;
  CHECK_THROWS_WITH_AS(ga.validate(), "GaConfig: population must be >= 2",
                       std::invalid_argument);
  ga.population = 10;
  ga.crossover_prob = 1.5;
  CHECK_THROWS_AS(ga.validate(), std::invalid_argument);
}
