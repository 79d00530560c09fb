#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "aoinoma/random.hpp"

namespace aoinoma {

enum class Activation { Relu, Tanh, Linear };

struct Layer {
  Eigen::MatrixXd w;  ///< out x in
  Eigen::VectorXd b;
  Activation act = Activation::Linear;
};

struct Network;

/// Intermediate values of one batched forward pass, consumed by backward.
/// Tied to the exact parameter revision that produced it; reusing a cache
/// after the network changed is rejected.
struct ForwardCache {
  std::vector<Eigen::MatrixXd> x;  ///< x[0] input .. x[L] output
  std::vector<Eigen::MatrixXd> z;  ///< pre-activations per layer
  const Network* net = nullptr;
  std::uint64_t revision = 0;
};

/// Parameter gradients, same shapes as the network. Overwritten, not
/// accumulated, by backward.
struct Gradients {
  std::vector<Eigen::MatrixXd> dw;
  std::vector<Eigen::VectorXd> db;
};

/// Fully connected net. Plain data plus a revision counter bumped by every
/// parameter mutation so stale forward caches are detectable.
struct Network {
  std::vector<Layer> layers;
  std::uint64_t revision = 0;

  /// Fan-in uniform init (U[-1/sqrt(in), 1/sqrt(in)], zero bias) for hidden
  /// layers; the final layer's weights and biases start near zero
  /// (U[-final_limit, final_limit]) so initial outputs are small.
  static Network random(std::span<const int> sizes,
                        std::span<const Activation> acts, Rng& rng,
                        double final_limit = 3e-3);

  int input_size() const { return static_cast<int>(layers.front().w.cols()); }
  int output_size() const { return static_cast<int>(layers.back().w.rows()); }

  /// Pure single-sample forward.
  Eigen::VectorXd forward(const Eigen::VectorXd& x) const;

  /// Columns are samples. Pass a cache to enable backward.
  Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& x,
                                ForwardCache* cache = nullptr) const;

  /// Exact reverse-mode gradients. dy is dLoss/dOutput (out x batch);
  /// any loss scaling (e.g. 1/batch) belongs in dy. Optionally also
  /// produces dLoss/dInput.
  void backward(const ForwardCache& cache, const Eigen::MatrixXd& dy,
                Gradients& grads, Eigen::MatrixXd* dx = nullptr) const;

  /// Input gradient only; skips the parameter gradients.
  void backward_input(const ForwardCache& cache, const Eigen::MatrixXd& dy,
                      Eigen::MatrixXd& dx) const;
};

struct AdamState {
  std::vector<Eigen::MatrixXd> mw, vw;
  std::vector<Eigen::VectorXd> mb, vb;
  long step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  static AdamState like(const Network& net);
};

/// One Adam descent step along grads.
void adam_step(Network& net, const Gradients& grads, AdamState& state,
               double lr);

/// target = kappa * primary + (1 - kappa) * target, elementwise.
void soft_update(const Network& primary, Network& target, double kappa);

/// Text serialization: header line "aoi-noma-ckpt v1 <role> <sizes...>",
/// then per layer the weights (row-major) and biases at full double
/// precision. Roles: actor, critic, target-actor, target-critic; the role
/// fixes the activations (relu hidden, tanh output for actor roles, linear
/// for critic roles).
void write_network(std::ostream& out, const Network& net,
                   const std::string& role);

/// Throws std::runtime_error on bad magic/version, role mismatch, or a
/// truncated/malformed stream.
Network read_network(std::istream& in, const std::string& expected_role);

}  // namespace aoinoma
