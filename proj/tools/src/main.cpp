#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aoinoma/config.hpp"
#include "aoinoma/experiment.hpp"
#include "aoinoma/format.hpp"

namespace {

struct CliOverrides {
  std::string config_path;
  std::string out_dir;
  std::vector<std::uint64_t> seeds;
  int episodes = 0;
  int devices = 0;
  double packet_bits = 0.0;
};

void add_common_options(CLI::App* cmd, CliOverrides& opt) {
  cmd->add_option("--config", opt.config_path,
                  "config file (key = value); defaults used when omitted")
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", opt.out_dir, "output directory");
  cmd->add_option("--seed", opt.seeds,
                  "seed(s) to run; overrides the config's list");
  cmd->add_option("--episodes", opt.episodes, "training episodes")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--devices", opt.devices, "device count M")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--packet-bits", opt.packet_bits, "packet size Q in bits")
      ->check(CLI::PositiveNumber);
}

aoinoma::RunConfig resolve_config(const CliOverrides& opt) {
  aoinoma::RunConfig cfg;
  if (!opt.config_path.empty()) cfg = aoinoma::load_config(opt.config_path);
  if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
  if (!opt.seeds.empty()) cfg.seeds = opt.seeds;
  if (opt.episodes > 0) cfg.agent.episodes = opt.episodes;
  if (opt.devices > 0) cfg.env.channel.num_devices = opt.devices;
  if (opt.packet_bits > 0.0) cfg.env.packet_bits = opt.packet_bits;
  return cfg;
}

void print_rows(const std::vector<aoinoma::ResultRow>& rows,
                const std::string& out_dir) {
  for (const aoinoma::ResultRow& r : rows)
    std::printf("%-6s M=%d Q=%g seed=%llu  reward=%.4f aoi=%.4f energy=%.4f\n",
                r.policy.c_str(), r.devices, r.packet_bits,
                static_cast<unsigned long long>(r.seed), r.mean_reward,
                r.mean_aoi, r.mean_energy);
  std::printf("wrote %s/results.csv (%zu rows)\n", out_dir.c_str(),
              rows.size());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MIMO-NOMA AoI/energy uplink: DDPG power allocation with "
               "GA and random baselines"};
  app.require_subcommand(1);

  CliOverrides opt;
  std::string baseline_policy = "random";

  CLI::App* train =
      app.add_subcommand("train", "train a DDPG agent per seed, then test");
  add_common_options(train, opt);
  CLI::App* test =
      app.add_subcommand("test", "evaluate saved checkpoints per seed");
  add_common_options(test, opt);
  CLI::App* baseline =
      app.add_subcommand("baseline", "evaluate a non-learning policy");
  add_common_options(baseline, opt);
  baseline->add_option("--policy", baseline_policy, "ga or random")
      ->check(CLI::IsMember({"ga", "random"}));
  CLI::App* sweep = app.add_subcommand(
      "sweep", "run every configured policy over the sweep axes");
  add_common_options(sweep, opt);

  CLI11_PARSE(app, argc, argv);

  try {
    const aoinoma::RunConfig cfg = resolve_config(opt);
    aoinoma::RunMode mode = aoinoma::RunMode::Train;
    if (test->parsed()) mode = aoinoma::RunMode::Test;
    else if (baseline->parsed())
      mode = baseline_policy == "ga" ? aoinoma::RunMode::BaselineGa
                                     : aoinoma::RunMode::BaselineRandom;
    else if (sweep->parsed()) mode = aoinoma::RunMode::Sweep;

    const std::vector<aoinoma::ResultRow> rows =
        aoinoma::run_experiment(mode, cfg);
    print_rows(rows, cfg.out_dir);
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
