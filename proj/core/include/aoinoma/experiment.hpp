#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aoinoma/config.hpp"
#include "aoinoma/ddpg.hpp"

namespace aoinoma {

enum class RunMode { Train, Test, BaselineRandom, BaselineGa, Sweep };

struct ResultRow {
  std::string policy;
  int devices = 0;
  double packet_bits = 0.0;
  std::uint64_t seed = 0;
  double mean_reward = 0.0;
  double mean_aoi = 0.0;
  double mean_energy = 0.0;
};

/// Worker threads for a batch run: AOI_NOMA_THREADS when set (must be a
/// positive integer), otherwise the hardware concurrency.
int thread_budget();

std::string checkpoint_filename(int devices, double packet_bits,
                                std::uint64_t seed);
std::string train_log_filename(int devices, double packet_bits,
                               std::uint64_t seed);

/// One file holding actor, critic, target-actor and target-critic.
void save_checkpoint(const std::string& path, const Agent& agent);
Agent load_checkpoint(const std::string& path);

std::string train_log_csv(const std::vector<EpisodeLog>& log);
std::string results_csv(const std::vector<ResultRow>& rows);
std::string results_per_device_csv(const std::vector<ResultRow>& rows);

/// Stable output order: policy, devices, packet bits, seed.
void sort_rows(std::vector<ResultRow>& rows);

/// Runs one batch mode end to end: trains or loads policies, evaluates
/// them, and writes results.csv, results_per_device.csv, per-run training
/// logs, checkpoints, the resolved config and SVG plots under cfg.out_dir.
/// Returns the rows in deterministic order. Identical config and seeds
/// give byte-identical artifacts.
std::vector<ResultRow> run_experiment(RunMode mode, const RunConfig& cfg);

}  // namespace aoinoma
