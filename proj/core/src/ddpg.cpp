#include "aoinoma/ddpg.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace aoinoma {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("AgentConfig: " + what);
}

Eigen::MatrixXd powers_from_actor_batch(const Eigen::MatrixXd& y,
                                        double max_power) {
  return ((y.array() + 1.0) * (0.5 * max_power)).matrix();
}

Eigen::MatrixXd stack_critic_input(const Eigen::MatrixXd& obs,
                                   const Eigen::MatrixXd& power) {
  Eigen::MatrixXd x(obs.rows() + power.rows(), obs.cols());
  x.topRows(obs.rows()) = obs;
  x.bottomRows(power.rows()) = power;
  return x;
}

}  // namespace

void AgentConfig::validate() const {
  require(hidden1 >= 1 && hidden2 >= 1, "hidden sizes must be >= 1");
  require(actor_lr > 0.0, "actor_lr must be > 0");
  require(critic_lr > 0.0, "critic_lr must be > 0");
  require(discount > 0.0 && discount <= 1.0, "discount must lie in (0, 1]");
  require(soft_update_rate > 0.0 && soft_update_rate <= 1.0,
          "soft_update_rate must lie in (0, 1]");
  require(batch_size >= 1, "batch_size must be >= 1");
  require(buffer_capacity >= batch_size,
          "buffer_capacity must be >= batch_size");
  require(episodes >= 1, "episodes must be >= 1");
  require(ou_decay >= 0.0 && ou_decay <= 1.0, "ou_decay must lie in [0, 1]");
  require(ou_sigma >= 0.0, "ou_sigma must be >= 0");
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ < 1)
    throw std::invalid_argument("ReplayBuffer: capacity must be >= 1");
}

void ReplayBuffer::push(Transition t) {
  if (data_.size() < capacity_) {
    data_.push_back(std::move(t));
  } else {
    data_[next_] = std::move(t);
    next_ = (next_ + 1) % capacity_;
  }
}

const Transition& ReplayBuffer::at(std::size_t logical_index) const {
  if (logical_index >= data_.size())
    throw std::out_of_range("ReplayBuffer::at: index past size");
  if (data_.size() < capacity_) return data_[logical_index];
  return data_[(next_ + logical_index) % capacity_];
}

void ReplayBuffer::sample(std::size_t count, Rng& rng, Batch& out) const {
  if (data_.empty() || count == 0)
    throw std::logic_error("ReplayBuffer::sample: nothing to sample");
  const Eigen::Index obs_dim = data_.front().obs.size();
  const Eigen::Index act_dim = data_.front().power.size();
  const auto n = static_cast<Eigen::Index>(count);
  out.obs.resize(obs_dim, n);
  out.power.resize(act_dim, n);
  out.next_obs.resize(obs_dim, n);
  out.reward.resize(n);
  std::uniform_int_distribution<std::size_t> pick(0, data_.size() - 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Transition& t = data_[pick(rng)];
    out.obs.col(i) = t.obs;
    out.power.col(i) = t.power;
    out.next_obs.col(i) = t.next_obs;
    out.reward(i) = t.reward;
  }
}

OuState ou_zero(int size) {
  return OuState{Eigen::VectorXd::Zero(size)};
}

OuState ou_next(const OuState& state, double decay, double sigma, Rng& rng) {
  OuState next;
  next.value.resize(state.value.size());
  for (Eigen::Index i = 0; i < state.value.size(); ++i)
    next.value(i) =
        state.value(i) - decay * state.value(i) + sigma * standard_normal(rng);
  return next;
}

Eigen::VectorXd power_from_actor_output(const Eigen::VectorXd& y,
                                        double max_power) {
  return ((y.array() + 1.0) * (0.5 * max_power)).matrix();
}

Eigen::VectorXd actor_action(const Network& actor, const Eigen::VectorXd& obs,
                             double max_power) {
  return power_from_actor_output(actor.forward(obs), max_power);
}

Agent make_agent(int obs_size, int action_size, const AgentConfig& cfg,
                 Rng& rng) {
  cfg.validate();
  const int actor_sizes[] = {obs_size, cfg.hidden1, cfg.hidden2, action_size};
  const Activation actor_acts[] = {Activation::Relu, Activation::Relu,
                                   Activation::Tanh};
  const int critic_sizes[] = {obs_size + action_size, cfg.hidden1, cfg.hidden2,
                              1};
  const Activation critic_acts[] = {Activation::Relu, Activation::Relu,
                                    Activation::Linear};
  Agent agent;
  agent.actor = Network::random(actor_sizes, actor_acts, rng);
  agent.critic = Network::random(critic_sizes, critic_acts, rng);
  agent.target_actor = agent.actor;
  agent.target_critic = agent.critic;
  return agent;
}

Eigen::VectorXd critic_targets(const Batch& batch, const Network& target_actor,
                               const Network& target_critic, double discount,
                               double max_power) {
  const Eigen::MatrixXd next_y = target_actor.forward_batch(batch.next_obs);
  const Eigen::MatrixXd next_power =
      powers_from_actor_batch(next_y, max_power);
  const Eigen::MatrixXd next_q = target_critic.forward_batch(
      stack_critic_input(batch.next_obs, next_power));
  return batch.reward + discount * next_q.row(0).transpose();
}

double critic_loss(const Network& critic, const Batch& batch,
                   const Eigen::VectorXd& targets) {
  const Eigen::MatrixXd q =
      critic.forward_batch(stack_critic_input(batch.obs, batch.power));
  return (q.row(0).transpose() - targets).squaredNorm() /
         static_cast<double>(targets.size());
}

double critic_update(Network& critic, AdamState& opt, const Batch& batch,
                     const Eigen::VectorXd& targets, double lr) {
  ForwardCache cache;
  const Eigen::MatrixXd q = critic.forward_batch(
      stack_critic_input(batch.obs, batch.power), &cache);
  const Eigen::VectorXd residual = q.row(0).transpose() - targets;
  const double loss =
      residual.squaredNorm() / static_cast<double>(targets.size());
  Eigen::MatrixXd dy(1, targets.size());
  dy.row(0) =
      (2.0 / static_cast<double>(targets.size())) * residual.transpose();
  Gradients grads;
  critic.backward(cache, dy, grads);
  adam_step(critic, grads, opt, lr);
  return loss;
}

void actor_update(Network& actor, AdamState& opt, const Network& critic,
                  const Eigen::MatrixXd& obs, double lr, double max_power) {
  const auto n = static_cast<double>(obs.cols());
  ForwardCache actor_cache;
  const Eigen::MatrixXd y = actor.forward_batch(obs, &actor_cache);
  const Eigen::MatrixXd power = powers_from_actor_batch(y, max_power);

  ForwardCache critic_cache;
  critic.forward_batch(stack_critic_input(obs, power), &critic_cache);
  Eigen::MatrixXd dq_dinput;
  critic.backward_input(critic_cache,
                        Eigen::MatrixXd::Constant(1, obs.cols(), 1.0 / n),
                        dq_dinput);

  // Ascent on mean Q: chain through p = (y + 1) * P_max / 2, then negate
  // for the descent-form optimizer.
  Eigen::MatrixXd dy =
      dq_dinput.bottomRows(power.rows()) * (-0.5 * max_power);
  Gradients grads;
  actor.backward(actor_cache, dy, grads);
  adam_step(actor, grads, opt, lr);
}

TrainResult train(const EnvConfig& env_cfg, const AgentConfig& agent_cfg,
                  std::uint64_t seed) {
  env_cfg.validate();
  agent_cfg.validate();

  Env env(env_cfg, seed);
  Rng agent_rng = derive_rng(seed, 1);
  const int m = env.num_devices();
  TrainResult result;
  result.agent = make_agent(env.observation_size(), m, agent_cfg, agent_rng);
  Agent& agent = result.agent;

  AdamState actor_opt = AdamState::like(agent.actor);
  AdamState critic_opt = AdamState::like(agent.critic);
  ReplayBuffer buffer(static_cast<std::size_t>(agent_cfg.buffer_capacity));
  Batch batch;

  const double max_power = env_cfg.max_power_w;
  result.log.reserve(static_cast<std::size_t>(agent_cfg.episodes));
  for (int e = 0; e < agent_cfg.episodes; ++e) {
    Eigen::VectorXd obs = env.reset();
    OuState noise = ou_zero(m);
    EpisodeLog log;
    log.episode = e + 1;
    for (int t = 0; t < env_cfg.horizon; ++t) {
      noise = ou_next(noise, agent_cfg.ou_decay, agent_cfg.ou_sigma,
                      agent_rng);
      const Eigen::VectorXd greedy =
          actor_action(agent.actor, obs, max_power);
      const Eigen::VectorXd power =
          (greedy + noise.value).cwiseMax(0.0).cwiseMin(max_power);
      Env::StepResult r = env.step(power);

      buffer.push(Transition{obs, power, r.outcome.reward, r.observation});
      log.cum_reward += r.outcome.reward;
      log.mean_aoi += r.outcome.bs_aoi.sum();
      log.mean_energy += r.outcome.energy_j.sum();
      obs = std::move(r.observation);

      if (buffer.size() > static_cast<std::size_t>(agent_cfg.batch_size)) {
        buffer.sample(static_cast<std::size_t>(agent_cfg.batch_size),
                      agent_rng, batch);
        const Eigen::VectorXd targets =
            critic_targets(batch, agent.target_actor, agent.target_critic,
                           agent_cfg.discount, max_power);
        critic_update(agent.critic, critic_opt, batch, targets,
                      agent_cfg.critic_lr);
        actor_update(agent.actor, actor_opt, agent.critic, batch.obs,
                     agent_cfg.actor_lr, max_power);
        soft_update(agent.actor, agent.target_actor,
                    agent_cfg.soft_update_rate);
        soft_update(agent.critic, agent.target_critic,
                    agent_cfg.soft_update_rate);
      }
    }
    log.mean_aoi /= env_cfg.horizon;
    log.mean_energy /= env_cfg.horizon;
    result.log.push_back(log);
  }
  return result;
}

EvalSummary evaluate(const Network& actor, const EnvConfig& env_cfg,
                     double beta, int episodes, std::uint64_t seed) {
  Env env(env_cfg, seed);
  const double max_power = env_cfg.max_power_w;
  PowerPolicy policy = [&actor, max_power](const Eigen::VectorXd& obs,
                                           const SystemState&,
                                           const EnvConfig&) {
    return actor_action(actor, obs, max_power);
  };
  return run_policy(env, policy, episodes, beta);
}

}  // namespace aoinoma
