#include "aoinoma/config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "aoinoma/format.hpp"

namespace aoinoma {

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin])))
    ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1])))
    --end;
  return s.substr(begin, end - begin);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

struct ParseContext {
  const std::string& name;
  int line = 0;

  [[noreturn]] void fail(const std::string& message) const {
    throw std::runtime_error(name + ":" + std::to_string(line) + ": " +
                             message);
  }

  double parse_double(const std::string& key, const std::string& v) const {
    errno = 0;
    char* end = nullptr;
    const double out = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE)
      fail("value of '" + key + "' is not a number: '" + v + "'");
    return out;
  }

  long long parse_int(const std::string& key, const std::string& v) const {
    errno = 0;
    char* end = nullptr;
    const long long out = std::strtoll(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE)
      fail("value of '" + key + "' is not an integer: '" + v + "'");
    return out;
  }

  std::uint64_t parse_u64(const std::string& key, const std::string& v) const {
    errno = 0;
    char* end = nullptr;
    const unsigned long long out = std::strtoull(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE ||
        v.front() == '-')
      fail("value of '" + key + "' is not an unsigned integer: '" + v + "'");
    return out;
  }

  bool parse_bool(const std::string& key, const std::string& v) const {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    fail("value of '" + key + "' is not a boolean: '" + v + "'");
  }
};

bool apply_top_level(RunConfig& cfg, const std::string& key,
                     const std::string& value, const ParseContext& ctx) {
  if (key == "seeds") {
    cfg.seeds.clear();
    for (const std::string& tok : split_ws(value))
      cfg.seeds.push_back(ctx.parse_u64(key, tok));
    return true;
  }
  if (key == "policies") {
    cfg.policies = split_ws(value);
    return true;
  }
  if (key == "out_dir") {
    cfg.out_dir = value;
    return true;
  }
  if (key == "test_episodes") {
    cfg.test_episodes = static_cast<int>(ctx.parse_int(key, value));
    return true;
  }
  return false;
}

bool apply_env(RunConfig& cfg, const std::string& key,
               const std::string& value, const ParseContext& ctx) {
  EnvConfig& env = cfg.env;
  ChannelConfig& ch = env.channel;
  if (key == "slot_seconds") env.slot_seconds = ctx.parse_double(key, value);
  else if (key == "packet_bits") env.packet_bits = ctx.parse_double(key, value);
  else if (key == "sample_cost_j")
    env.sample_cost_j = ctx.parse_double(key, value);
  else if (key == "max_power_w") env.max_power_w = ctx.parse_double(key, value);
  else if (key == "aoi_weight") env.aoi_weight = ctx.parse_double(key, value);
  else if (key == "energy_weight")
    env.energy_weight = ctx.parse_double(key, value);
  else if (key == "horizon")
    env.horizon = static_cast<int>(ctx.parse_int(key, value));
  else if (key == "distance_min_m")
    env.distance_min_m = ctx.parse_double(key, value);
  else if (key == "distance_max_m")
    env.distance_max_m = ctx.parse_double(key, value);
  else if (key == "log_sinr_obs") env.log_sinr_obs = ctx.parse_bool(key, value);
  else if (key == "devices")
    ch.num_devices = static_cast<int>(ctx.parse_int(key, value));
  else if (key == "antennas")
    ch.num_antennas = static_cast<int>(ctx.parse_int(key, value));
  else if (key == "distances_m") {
    ch.distances_m.clear();
    for (const std::string& tok : split_ws(value))
      ch.distances_m.push_back(ctx.parse_double(key, tok));
  } else if (key == "reference_gain_db")
    ch.reference_gain_db = ctx.parse_double(key, value);
  else if (key == "pathloss_exponent")
    ch.pathloss_exponent = ctx.parse_double(key, value);
  else if (key == "correlation") ch.correlation = ctx.parse_double(key, value);
  else if (key == "noise_variance")
    ch.noise_variance = ctx.parse_double(key, value);
  else if (key == "bandwidth_hz")
    ch.bandwidth_hz = ctx.parse_double(key, value);
  else return false;
  return true;
}

bool apply_agent(RunConfig& cfg, const std::string& key,
                 const std::string& value, const ParseContext& ctx) {
  AgentConfig& a = cfg.agent;
  if (key == "hidden1") a.hidden1 = static_cast<int>(ctx.parse_int(key, value));
  else if (key == "hidden2")
    a.hidden2 = static_cast<int>(ctx.parse_int(key, value));
  else if (key == "actor_lr") a.actor_lr = ctx.parse_double(key, value);
  else if (key == "critic_lr") a.critic_lr = ctx.parse_double(key, value);
  else if (key == "discount") a.discount = ctx.parse_double(key, value);
  else if (key == "soft_update_rate")
    a.soft_update_rate = ctx.parse_double(key, value);
  else if (key == "batch_size")
    a.batch_size = static_cast<int>(ctx.parse_int(key, value));
  else if (key == "buffer_capacity")
    a.buffer_capacity = static_cast<int>(ctx.parse_int(key, value));
  else if (key == "episodes")
    a.episodes = static_cast<int>(ctx.parse_int(key, value));
  else if (key == "ou_decay") a.ou_decay = ctx.parse_double(key, value);
  else if (key == "ou_sigma") a.ou_sigma = ctx.parse_double(key, value);
  else return false;
  return true;
}

bool apply_ga(RunConfig& cfg, const std::string& key, const std::string& value,
              const ParseContext& ctx) {
  GaConfig& g = cfg.ga;
  if (key == "population")
    g.population = static_cast<int>(ctx.parse_int(key, value));
  else if (key == "generations")
    g.generations = static_cast<int>(ctx.parse_int(key, value));
  else if (key == "crossover_prob")
    g.crossover_prob = ctx.parse_double(key, value);
  else if (key == "mutation_prob")
    g.mutation_prob = ctx.parse_double(key, value);
  else return false;
  return true;
}

bool apply_sweep(RunConfig& cfg, const std::string& key,
                 const std::string& value, const ParseContext& ctx) {
  if (key == "devices") {
    cfg.sweep_devices.clear();
    for (const std::string& tok : split_ws(value))
      cfg.sweep_devices.push_back(static_cast<int>(ctx.parse_int(key, tok)));
    return true;
  }
  if (key == "packet_bits") {
    cfg.sweep_packet_bits.clear();
    for (const std::string& tok : split_ws(value))
      cfg.sweep_packet_bits.push_back(ctx.parse_double(key, tok));
    return true;
  }
  return false;
}

}  // namespace

void RunConfig::validate() const {
  env.validate();
  agent.validate();
  ga.validate();
  if (seeds.empty())
    throw std::invalid_argument("RunConfig: seeds must not be empty");
  if (policies.empty())
    throw std::invalid_argument("RunConfig: policies must not be empty");
  for (const std::string& p : policies)
    if (p != "ddpg" && p != "ga" && p != "random")
      throw std::invalid_argument("RunConfig: unknown policy '" + p + "'");
  if (out_dir.empty())
    throw std::invalid_argument("RunConfig: out_dir must not be empty");
  if (test_episodes < 1)
    throw std::invalid_argument("RunConfig: test_episodes must be >= 1");
  for (int d : sweep_devices)
    if (d < 1)
      throw std::invalid_argument("RunConfig: sweep devices must be >= 1");
  for (double q : sweep_packet_bits)
    if (q <= 0.0)
      throw std::invalid_argument("RunConfig: sweep packet_bits must be > 0");
}

RunConfig parse_config(std::istream& in, const std::string& name) {
  RunConfig cfg;
  ParseContext ctx{name};
  std::string section;
  std::string raw;
  while (std::getline(in, raw)) {
    ctx.line += 1;
    std::string line = raw;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') ctx.fail("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "env" && section != "agent" && section != "ga" &&
          section != "sweep")
        ctx.fail("unknown section [" + section + "]");
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      ctx.fail("expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) ctx.fail("missing key before '='");

    bool known = false;
    if (section.empty()) known = apply_top_level(cfg, key, value, ctx);
    else if (section == "env") known = apply_env(cfg, key, value, ctx);
    else if (section == "agent") known = apply_agent(cfg, key, value, ctx);
    else if (section == "ga") known = apply_ga(cfg, key, value, ctx);
    else if (section == "sweep") known = apply_sweep(cfg, key, value, ctx);
    if (!known)
      ctx.fail("unknown key '" + key + "'" +
               (section.empty() ? std::string(" at top level")
                                : " in section [" + section + "]"));
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return parse_config(in, path);
}

void save_config(std::ostream& out, const RunConfig& cfg) {
  auto join_u64 = [](const std::vector<std::uint64_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
      s += (i ? " " : "") + std::to_string(v[i]);
    return s;
  };
  auto join_int = [](const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
      s += (i ? " " : "") + std::to_string(v[i]);
    return s;
  };
  auto join_double = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
      s += (i ? " " : "") + format_double(v[i]);
    return s;
  };
  auto join_str = [](const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + v[i];
    return s;
  };

  out << "seeds = " << join_u64(cfg.seeds) << '\n';
  out << "policies = " << join_str(cfg.policies) << '\n';
  out << "out_dir = " << cfg.out_dir << '\n';
  out << "test_episodes = " << cfg.test_episodes << '\n';
  out << '\n';
  out << "[env]\n";
  out << "slot_seconds = " << format_double(cfg.env.slot_seconds) << '\n';
  out << "packet_bits = " << format_double(cfg.env.packet_bits) << '\n';
  out << "sample_cost_j = " << format_double(cfg.env.sample_cost_j) << '\n';
  out << "max_power_w = " << format_double(cfg.env.max_power_w) << '\n';
  out << "aoi_weight = " << format_double(cfg.env.aoi_weight) << '\n';
  out << "energy_weight = " << format_double(cfg.env.energy_weight) << '\n';
  out << "horizon = " << cfg.env.horizon << '\n';
  out << "distance_min_m = " << format_double(cfg.env.distance_min_m) << '\n';
  out << "distance_max_m = " << format_double(cfg.env.distance_max_m) << '\n';
  out << "log_sinr_obs = " << (cfg.env.log_sinr_obs ? "true" : "false")
      << '\n';
  out << "devices = " << cfg.env.channel.num_devices << '\n';
  out << "antennas = " << cfg.env.channel.num_antennas << '\n';
  out << "distances_m = " << join_double(cfg.env.channel.distances_m) << '\n';
  out << "reference_gain_db = "
      << format_double(cfg.env.channel.reference_gain_db) << '\n';
  out << "pathloss_exponent = "
      << format_double(cfg.env.channel.pathloss_exponent) << '\n';
  out << "correlation = " << format_double(cfg.env.channel.correlation)
      << '\n';
  out << "noise_variance = " << format_double(cfg.env.channel.noise_variance)
      << '\n';
  out << "bandwidth_hz = " << format_double(cfg.env.channel.bandwidth_hz)
      << '\n';
  out << '\n';
  out << "[agent]\n";
  out << "hidden1 = " << cfg.agent.hidden1 << '\n';
  out << "hidden2 = " << cfg.agent.hidden2 << '\n';
  out << "actor_lr = " << format_double(cfg.agent.actor_lr) << '\n';
  out << "critic_lr = " << format_double(cfg.agent.critic_lr) << '\n';
  out << "discount = " << format_double(cfg.agent.discount) << '\n';
  out << "soft_update_rate = " << format_double(cfg.agent.soft_update_rate)
      << '\n';
  out << "batch_size = " << cfg.agent.batch_size << '\n';
  out << "buffer_capacity = " << cfg.agent.buffer_capacity << '\n';
  out << "episodes = " << cfg.agent.episodes << '\n';
  out << "ou_decay = " << format_double(cfg.agent.ou_decay) << '\n';
  out << "ou_sigma = " << format_double(cfg.agent.ou_sigma) << '\n';
  out << '\n';
  out << "[ga]\n";
  out << "population = " << cfg.ga.population << '\n';
  out << "generations = " << cfg.ga.generations << '\n';
  out << "crossover_prob = " << format_double(cfg.ga.crossover_prob) << '\n';
  out << "mutation_prob = " << format_double(cfg.ga.mutation_prob) << '\n';
  out << '\n';
  out << "[sweep]\n";
  out << "devices = " << join_int(cfg.sweep_devices) << '\n';
  out << "packet_bits = " << join_double(cfg.sweep_packet_bits) << '\n';
}

void save_config_file(const std::string& path, const RunConfig& cfg) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config file: " + path);
  save_config(out, cfg);
}

}  // namespace aoinoma
