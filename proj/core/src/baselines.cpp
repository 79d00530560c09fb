#include "aoinoma/baselines.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

namespace aoinoma {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("GaConfig: " + what);
}

int pick_index(Rng& rng, Eigen::Index size) {
  std::uniform_int_distribution<int> dist(0, static_cast<int>(size) - 1);
  return dist(rng);
}

bool flip(Rng& rng, double prob) {
  return uniform_real(rng, 0.0, 1.0) < prob;
}

}  // namespace

void GaConfig::validate() const {
  require(population >= 2, "population must be >= 2");
  require(generations >= 0, "generations must be >= 0");
  require(crossover_prob >= 0.0 && crossover_prob <= 1.0,
          "crossover_prob must lie in [0, 1]");
  require(mutation_prob >= 0.0 && mutation_prob <= 1.0,
          "mutation_prob must lie in [0, 1]");
}

Eigen::VectorXd random_allocation(int num_devices, double max_power,
                                  Rng& rng) {
  Eigen::VectorXd p(num_devices);
  for (int i = 0; i < num_devices; ++i)
    p(i) = uniform_real(rng, 0.0, max_power);
  return p;
}

double ga_fitness(const Eigen::VectorXd& power_w, const SystemState& state,
                  const EnvConfig& cfg) {
  return simulate_slot(state, power_w, cfg).reward;
}

GaPair ga_crossover(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                    Rng& rng) {
  GaPair out{a, b};
  const int k = pick_index(rng, a.size());
  std::swap(out.a(k), out.b(k));
  return out;
}

Eigen::VectorXd ga_mutate(const Eigen::VectorXd& a, double max_power,
                          Rng& rng) {
  Eigen::VectorXd out = a;
  const int k = pick_index(rng, a.size());
  out(k) = uniform_real(rng, 0.0, max_power);
  return out;
}

GaResult ga_allocate(const SystemState& state, const EnvConfig& cfg,
                     const GaConfig& ga, Rng& rng) {
  ga.validate();
  const int m = static_cast<int>(state.channels.h.cols());
  const int pop_size = ga.population;
  const int survivors = std::max(1, pop_size / 2);

  std::vector<Eigen::VectorXd> pop;
  std::vector<double> fitness;
  pop.reserve(pop_size);
  fitness.reserve(pop_size);
  GaResult result;
  for (int i = 0; i < pop_size; ++i) {
    pop.push_back(random_allocation(m, cfg.max_power_w, rng));
    fitness.push_back(ga_fitness(pop.back(), state, cfg));
    result.fitness_evaluations += 1;
  }
  result.best_per_generation.push_back(
      *std::max_element(fitness.begin(), fitness.end()));

  std::vector<int> order(pop_size);
  for (int gen = 0; gen < ga.generations; ++gen) {
    order.resize(pop.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return fitness[a] > fitness[b]; });

    std::vector<Eigen::VectorXd> next;
    std::vector<double> next_fitness;
    next.reserve(pop_size);
    next_fitness.reserve(pop_size);
    for (int i = 0; i < survivors; ++i) {
      next.push_back(pop[order[i]]);
      next_fitness.push_back(fitness[order[i]]);
    }

    std::vector<int> pairing(survivors);
    std::iota(pairing.begin(), pairing.end(), 0);
    std::vector<Eigen::VectorXd> children;
    children.reserve(pop_size - survivors);
    while (static_cast<int>(children.size()) < pop_size - survivors) {
      std::shuffle(pairing.begin(), pairing.end(), rng);
      for (int i = 0;
           i < survivors &&
           static_cast<int>(children.size()) < pop_size - survivors;
           i += 2) {
        if (i + 1 < survivors) {
          GaPair pair{next[pairing[i]], next[pairing[i + 1]]};
          if (flip(rng, ga.crossover_prob))
            pair = ga_crossover(pair.a, pair.b, rng);
          children.push_back(std::move(pair.a));
          if (static_cast<int>(children.size()) < pop_size - survivors)
            children.push_back(std::move(pair.b));
        } else {
          children.push_back(next[pairing[i]]);
        }
      }
    }
    for (Eigen::VectorXd& child : children) {
      if (flip(rng, ga.mutation_prob))
        child = ga_mutate(child, cfg.max_power_w, rng);
      next_fitness.push_back(ga_fitness(child, state, cfg));
      result.fitness_evaluations += 1;
      next.push_back(std::move(child));
    }

    pop = std::move(next);
    fitness = std::move(next_fitness);
    result.best_per_generation.push_back(
        *std::max_element(fitness.begin(), fitness.end()));
  }

  const auto best_it = std::max_element(fitness.begin(), fitness.end());
  result.best_fitness = *best_it;
  result.best = pop[static_cast<std::size_t>(
      std::distance(fitness.begin(), best_it))];
  return result;
}

EvalSummary evaluate_random(const EnvConfig& cfg, double beta, int episodes,
                            std::uint64_t seed) {
  Env env(cfg, seed);
  Rng policy_rng = derive_rng(seed, 2);
  PowerPolicy policy = [&policy_rng](const Eigen::VectorXd&,
                                     const SystemState& state,
                                     const EnvConfig& cfg_inner) {
    return random_allocation(static_cast<int>(state.channels.h.cols()),
                             cfg_inner.max_power_w, policy_rng);
  };
  return run_policy(env, policy, episodes, beta);
}

EvalSummary evaluate_ga(const EnvConfig& cfg, const GaConfig& ga, double beta,
                        int episodes, std::uint64_t seed) {
  Env env(cfg, seed);
  Rng policy_rng = derive_rng(seed, 3);
  PowerPolicy policy = [&policy_rng, &ga](const Eigen::VectorXd&,
                                          const SystemState& state,
                                          const EnvConfig& cfg_inner) {
    return ga_allocate(state, cfg_inner, ga, policy_rng).best;
  };
  return run_policy(env, policy, episodes, beta);
}

}  // namespace aoinoma
