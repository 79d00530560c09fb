#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "aoinoma/env.hpp"
#include "aoinoma/nn.hpp"
#include "aoinoma/random.hpp"

namespace aoinoma {

struct AgentConfig {
  int hidden1 = 400;
  int hidden2 = 300;
  double actor_lr = 1e-3;
  double critic_lr = 1e-4;
  double discount = 0.99;          ///< beta
  double soft_update_rate = 0.001; ///< kappa
  int batch_size = 64;             ///< I
  int buffer_capacity = 250000;    ///< |R|
  int episodes = 800;              ///< E
  double ou_decay = 0.15;          ///< theta
  double ou_sigma = 0.004;

  void validate() const;
};

struct Transition {
  Eigen::VectorXd obs;
  Eigen::VectorXd power;
  double reward = 0.0;
  Eigen::VectorXd next_obs;
};

/// Column-per-sample minibatch.
struct Batch {
  Eigen::MatrixXd obs;
  Eigen::MatrixXd power;
  Eigen::VectorXd reward;
  Eigen::MatrixXd next_obs;
};

/// Fixed-capacity FIFO of transitions; sampling is uniform with
/// replacement. Index 0 is the oldest stored transition.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(Transition t);
  std::size_t size() const { return data_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Transition& at(std::size_t logical_index) const;

  /// Fills out with `count` transitions drawn uniformly with replacement.
  /// Requires a non-empty buffer and count >= 1.
  void sample(std::size_t count, Rng& rng, Batch& out) const;

 private:
  std::vector<Transition> data_;
  std::size_t capacity_;
  std::size_t next_ = 0;  ///< slot the next push overwrites once full
};

/// Ornstein-Uhlenbeck exploration noise, one value per device.
struct OuState {
  Eigen::VectorXd value;
};

OuState ou_zero(int size);

/// x' = x + decay * (0 - x) + sigma * N(0, I).
OuState ou_next(const OuState& state, double decay, double sigma, Rng& rng);

/// Maps the actor's tanh output to a power vector in [0, max_power].
Eigen::VectorXd power_from_actor_output(const Eigen::VectorXd& y,
                                        double max_power);

/// Deterministic greedy action mu(obs) scaled into the feasible box.
Eigen::VectorXd actor_action(const Network& actor, const Eigen::VectorXd& obs,
                             double max_power);

struct Agent {
  Network actor;
  Network critic;
  Network target_actor;
  Network target_critic;
};

/// Fresh actor/critic pair (obs -> powers, [obs; powers] -> value) with
/// targets initialized as exact copies.
Agent make_agent(int obs_size, int action_size, const AgentConfig& cfg,
                 Rng& rng);

/// y_i = r_i + discount * Q'(o'_i, mu'(o'_i)). No terminal cutoff: episodes
/// end by horizon, not by entering an absorbing state.
Eigen::VectorXd critic_targets(const Batch& batch, const Network& target_actor,
                               const Network& target_critic, double discount,
                               double max_power);

/// Mean squared Bellman error of the critic on the batch.
double critic_loss(const Network& critic, const Batch& batch,
                   const Eigen::VectorXd& targets);

/// One Adam descent step on the MSE toward `targets`. Returns the loss
/// before the update.
double critic_update(Network& critic, AdamState& opt, const Batch& batch,
                     const Eigen::VectorXd& targets, double lr);

/// One Adam ascent step on the batch-mean critic value of the actor's own
/// actions, chaining d Q / d power through the critic's input gradient.
void actor_update(Network& actor, AdamState& opt, const Network& critic,
                  const Eigen::MatrixXd& obs, double lr, double max_power);

struct EpisodeLog {
  int episode = 0;
  double cum_reward = 0.0;
  double mean_aoi = 0.0;
  double mean_energy = 0.0;
};

struct TrainResult {
  Agent agent;
  std::vector<EpisodeLog> log;
};

/// Full training run: per slot act with OU-perturbed actor, store the
/// executed transition, and once the buffer exceeds one minibatch update
/// critic, actor, and both targets. Deterministic for a fixed seed.
TrainResult train(const EnvConfig& env_cfg, const AgentConfig& agent_cfg,
                  std::uint64_t seed);

/// Greedy rollouts of a trained actor (no exploration noise).
EvalSummary evaluate(const Network& actor, const EnvConfig& env_cfg,
                     double beta, int episodes, std::uint64_t seed);

}  // namespace aoinoma
