#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "aoinoma/baselines.hpp"
#include "aoinoma/ddpg.hpp"
#include "aoinoma/env.hpp"

namespace aoinoma {

/// Everything one batch run needs. An empty config file yields these
/// defaults unchanged.
struct RunConfig {
  EnvConfig env;
  AgentConfig agent;
  GaConfig ga;
  std::vector<std::uint64_t> seeds{1};
  std::vector<std::string> policies{"ddpg", "ga", "random"};
  std::vector<int> sweep_devices{2, 3, 4, 5, 6};
  std::vector<double> sweep_packet_bits{500, 750, 1000, 1250, 1500};
  std::string out_dir = "out";
  int test_episodes = 20;

  void validate() const;
};

/// Parses the `key = value` format: `#` comments, blank lines, [env],
/// [agent], [ga] and [sweep] sections, whitespace-separated list values.
/// Unknown keys, malformed lines and unparsable values raise
/// std::runtime_error naming `name` and the line number.
RunConfig parse_config(std::istream& in, const std::string& name);

RunConfig load_config(const std::string& path);

/// Writes every key with its current value; parse_config(save_config(c))
/// reproduces c exactly.
void save_config(std::ostream& out, const RunConfig& cfg);

void save_config_file(const std::string& path, const RunConfig& cfg);

}  // namespace aoinoma
