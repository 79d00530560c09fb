#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "aoinoma/env.hpp"
#include "aoinoma/random.hpp"

namespace aoinoma {

/// Per-slot genetic search over power allocations. Fitness is the slot
/// reward the candidate would earn against the frozen current state, so the
/// search is myopic and channel-aware.
struct GaConfig {
  int population = 10;          ///< B
  int generations = 50;         ///< N_GA
  double crossover_prob = 0.8;  ///< F_c
  double mutation_prob = 0.5;   ///< F_m

  void validate() const;
};

/// Uniform draw from [0, max_power] per device.
Eigen::VectorXd random_allocation(int num_devices, double max_power, Rng& rng);

/// Reward the allocation would earn this slot; the state is not advanced.
double ga_fitness(const Eigen::VectorXd& power_w, const SystemState& state,
                  const EnvConfig& cfg);

struct GaPair {
  Eigen::VectorXd a;
  Eigen::VectorXd b;
};

/// Swaps one uniformly chosen gene between copies of the parents.
GaPair ga_crossover(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                    Rng& rng);

/// Redraws one uniformly chosen gene uniformly on [0, max_power].
Eigen::VectorXd ga_mutate(const Eigen::VectorXd& a, double max_power,
                          Rng& rng);

struct GaResult {
  Eigen::VectorXd best;
  double best_fitness = 0.0;
  /// Population best after the initial evaluation and after every
  /// generation; elitist selection makes this non-decreasing.
  std::vector<double> best_per_generation;
  long fitness_evaluations = 0;
};

/// Elitist truncation GA: keep the fitter half, refill from randomly paired
/// survivors via crossover and mutation. Survivor fitness is memoized, so
/// at most population * (generations + 1) evaluations occur.
GaResult ga_allocate(const SystemState& state, const EnvConfig& cfg,
                     const GaConfig& ga, Rng& rng);

EvalSummary evaluate_random(const EnvConfig& cfg, double beta, int episodes,
                            std::uint64_t seed);

EvalSummary evaluate_ga(const EnvConfig& cfg, const GaConfig& ga, double beta,
                        int episodes, std::uint64_t seed);

}  // namespace aoinoma
