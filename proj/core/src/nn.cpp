#include "aoinoma/nn.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace aoinoma {

namespace {

void apply_activation(Activation act, const Eigen::MatrixXd& z,
                      Eigen::MatrixXd& out) {
  switch (act) {
    case Activation::Relu:
      out = z.cwiseMax(0.0);
      break;
    case Activation::Tanh:
      out = z.array().tanh().matrix();
      break;
    case Activation::Linear:
      out = z;
      break;
  }
}

// dz = dy .* act'(z), using the stored post-activation x where cheaper.
void activation_backward(Activation act, const Eigen::MatrixXd& z,
                         const Eigen::MatrixXd& x, const Eigen::MatrixXd& dy,
                         Eigen::MatrixXd& dz) {
  switch (act) {
    case Activation::Relu:
      dz = (z.array() > 0.0).select(dy, 0.0);
      break;
    case Activation::Tanh:
      dz = (dy.array() * (1.0 - x.array().square())).matrix();
      break;
    case Activation::Linear:
      dz = dy;
      break;
  }
}

void check_cache(const Network& net, const ForwardCache& cache) {
  if (cache.net != &net || cache.revision != net.revision)
    throw std::logic_error(
        "nn backward: forward cache is stale or belongs to another network");
  if (cache.x.size() != net.layers.size() + 1 ||
      cache.z.size() != net.layers.size())
    throw std::logic_error("nn backward: malformed forward cache");
}

const char kMagic[] = "aoi-noma-ckpt";
const char kVersion[] = "v1";

bool actor_like_role(const std::string& role) {
  return role == "actor" || role == "target-actor";
}

bool critic_like_role(const std::string& role) {
  return role == "critic" || role == "target-critic";
}

}  // namespace

Network Network::random(std::span<const int> sizes,
                        std::span<const Activation> acts, Rng& rng,
                        double final_limit) {
  if (sizes.size() < 2)
    throw std::invalid_argument("Network::random: need at least two sizes");
  if (acts.size() != sizes.size() - 1)
    throw std::invalid_argument(
        "Network::random: one activation per layer required");
  Network net;
  net.layers.resize(acts.size());
  for (std::size_t l = 0; l < acts.size(); ++l) {
    const int in = sizes[l];
    const int out = sizes[l + 1];
    if (in < 1 || out < 1)
      throw std::invalid_argument("Network::random: sizes must be >= 1");
    Layer& layer = net.layers[l];
    layer.act = acts[l];
    layer.w.resize(out, in);
    layer.b = Eigen::VectorXd::Zero(out);
    const bool final_layer = (l + 1 == acts.size());
    const double limit =
        final_layer ? final_limit : 1.0 / std::sqrt(static_cast<double>(in));
    for (int r = 0; r < out; ++r)
      for (int c = 0; c < in; ++c)
        layer.w(r, c) = uniform_real(rng, -limit, limit);
    if (final_layer)
      for (int r = 0; r < out; ++r)
        layer.b(r) = uniform_real(rng, -limit, limit);
  }
  return net;
}

Eigen::VectorXd Network::forward(const Eigen::VectorXd& x) const {
  return forward_batch(x, nullptr).col(0);
}

Eigen::MatrixXd Network::forward_batch(const Eigen::MatrixXd& x,
                                       ForwardCache* cache) const {
  if (x.rows() != input_size())
    throw std::invalid_argument("nn forward: input row count mismatch");
  if (cache) {
    cache->net = this;
    cache->revision = revision;
    cache->x.resize(layers.size() + 1);
    cache->z.resize(layers.size());
    cache->x[0] = x;
  }
  Eigen::MatrixXd cur = x;
  Eigen::MatrixXd z;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const Layer& layer = layers[l];
    z.noalias() = layer.w * cur;
    z.colwise() += layer.b;
    apply_activation(layer.act, z, cur);
    if (cache) {
      cache->z[l] = z;
      cache->x[l + 1] = cur;
    }
  }
  return cur;
}

void Network::backward(const ForwardCache& cache, const Eigen::MatrixXd& dy,
                       Gradients& grads, Eigen::MatrixXd* dx) const {
  check_cache(*this, cache);
  const std::size_t n_layers = layers.size();
  grads.dw.resize(n_layers);
  grads.db.resize(n_layers);
  Eigen::MatrixXd grad = dy;
  Eigen::MatrixXd dz;
  for (std::size_t l = n_layers; l-- > 0;) {
    activation_backward(layers[l].act, cache.z[l], cache.x[l + 1], grad, dz);
    grads.dw[l].noalias() = dz * cache.x[l].transpose();
    grads.db[l] = dz.rowwise().sum();
    if (l > 0 || dx) grad.noalias() = layers[l].w.transpose() * dz;
  }
  if (dx) *dx = grad;
}

void Network::backward_input(const ForwardCache& cache,
                             const Eigen::MatrixXd& dy,
                             Eigen::MatrixXd& dx) const {
  check_cache(*this, cache);
  Eigen::MatrixXd grad = dy;
  Eigen::MatrixXd dz;
  for (std::size_t l = layers.size(); l-- > 0;) {
    activation_backward(layers[l].act, cache.z[l], cache.x[l + 1], grad, dz);
    grad.noalias() = layers[l].w.transpose() * dz;
  }
  dx = grad;
}

AdamState AdamState::like(const Network& net) {
  AdamState s;
  s.mw.reserve(net.layers.size());
  for (const Layer& layer : net.layers) {
    s.mw.push_back(Eigen::MatrixXd::Zero(layer.w.rows(), layer.w.cols()));
    s.vw.push_back(Eigen::MatrixXd::Zero(layer.w.rows(), layer.w.cols()));
    s.mb.push_back(Eigen::VectorXd::Zero(layer.b.size()));
    s.vb.push_back(Eigen::VectorXd::Zero(layer.b.size()));
  }
  return s;
}

void adam_step(Network& net, const Gradients& grads, AdamState& state,
               double lr) {
  if (grads.dw.size() != net.layers.size() ||
      state.mw.size() != net.layers.size())
    throw std::invalid_argument("adam_step: shape mismatch");
  state.step += 1;
  const double correction1 =
      1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double correction2 =
      1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    auto update = [&](auto& param, const auto& grad, auto& m, auto& v) {
      m = state.beta1 * m + (1.0 - state.beta1) * grad;
      v = (state.beta2 * v).array() +
          (1.0 - state.beta2) * grad.array().square();
      const auto m_hat = m.array() / correction1;
      const auto v_hat = v.array() / correction2;
      param.array() -= lr * m_hat / (v_hat.sqrt() + state.epsilon);
    };
    update(net.layers[l].w, grads.dw[l], state.mw[l], state.vw[l]);
    update(net.layers[l].b, grads.db[l], state.mb[l], state.vb[l]);
  }
  net.revision += 1;
}

void soft_update(const Network& primary, Network& target, double kappa) {
  if (primary.layers.size() != target.layers.size())
    throw std::invalid_argument("soft_update: layer count mismatch");
  for (std::size_t l = 0; l < primary.layers.size(); ++l) {
    target.layers[l].w =
        kappa * primary.layers[l].w + (1.0 - kappa) * target.layers[l].w;
    target.layers[l].b =
        kappa * primary.layers[l].b + (1.0 - kappa) * target.layers[l].b;
  }
  target.revision += 1;
}

void write_network(std::ostream& out, const Network& net,
                   const std::string& role) {
  if (!actor_like_role(role) && !critic_like_role(role))
    throw std::invalid_argument("write_network: unknown role " + role);
  out << kMagic << ' ' << kVersion << ' ' << role;
  out << ' ' << net.input_size();
  for (const Layer& layer : net.layers) out << ' ' << layer.w.rows();
  out << '\n';
  char buf[64];
  auto emit = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf;
  };
  for (const Layer& layer : net.layers) {
    for (Eigen::Index r = 0; r < layer.w.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.w.cols(); ++c) {
        if (c) out << ' ';
        emit(layer.w(r, c));
      }
      out << '\n';
    }
    for (Eigen::Index r = 0; r < layer.b.size(); ++r) {
      if (r) out << ' ';
      emit(layer.b(r));
    }
    out << '\n';
  }
}

Network read_network(std::istream& in, const std::string& expected_role) {
  std::string header;
  while (std::getline(in, header) && header.empty()) {
  }
  std::istringstream hs(header);
  std::string magic, version, role;
  hs >> magic >> version >> role;
  if (magic != kMagic || version != kVersion)
    throw std::runtime_error("read_network: not a " + std::string(kMagic) +
                             " " + kVersion + " stream");
  if (role != expected_role)
    throw std::runtime_error("read_network: expected role " + expected_role +
                             ", found " + role);
  std::vector<int> sizes;
  int n = 0;
  while (hs >> n) {
    if (n < 1) throw std::runtime_error("read_network: bad layer size");
    sizes.push_back(n);
  }
  if (sizes.size() < 2)
    throw std::runtime_error("read_network: header lists too few sizes");

  Network net;
  net.layers.resize(sizes.size() - 1);
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    Layer& layer = net.layers[l];
    const bool final_layer = (l + 1 == net.layers.size());
    layer.act = final_layer ? (actor_like_role(role) ? Activation::Tanh
                                                     : Activation::Linear)
                            : Activation::Relu;
    layer.w.resize(sizes[l + 1], sizes[l]);
    layer.b.resize(sizes[l + 1]);
    for (Eigen::Index r = 0; r < layer.w.rows(); ++r)
      for (Eigen::Index c = 0; c < layer.w.cols(); ++c)
        if (!(in >> layer.w(r, c)))
          throw std::runtime_error("read_network: truncated weights");
    for (Eigen::Index r = 0; r < layer.b.size(); ++r)
      if (!(in >> layer.b(r)))
        throw std::runtime_error("read_network: truncated biases");
  }
  return net;
}

}  // namespace aoinoma
