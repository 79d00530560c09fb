#include "aoinoma/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "aoinoma/baselines.hpp"
#include "aoinoma/format.hpp"
#include "aoinoma/svg.hpp"

namespace fs = std::filesystem;

namespace aoinoma {

namespace {

std::string compact_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::string policy_color(const std::string& policy) {
  if (policy == "ddpg") return "#1f77b4";
  if (policy == "ga") return "#ff7f0e";
  if (policy == "random") return "#2ca02c";
  return "#7f7f7f";
}

const char* kSeedPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                              "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

void run_parallel(std::vector<std::function<void()>>& tasks, int threads) {
  if (tasks.empty()) return;
  const int workers =
      std::max(1, std::min<int>(threads, static_cast<int>(tasks.size())));
  std::vector<std::exception_ptr> errors(tasks.size());
  if (workers == 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      try {
        tasks[i]();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= tasks.size()) return;
        try {
          tasks[i]();
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
}

struct RunPoint {
  std::string policy;
  int devices = 0;
  double packet_bits = 0.0;
  std::uint64_t seed = 0;

  auto key() const { return std::tie(policy, devices, packet_bits, seed); }
  bool operator<(const RunPoint& o) const { return key() < o.key(); }
};

EnvConfig env_at_point(const RunConfig& cfg, const RunPoint& pt) {
  EnvConfig env = cfg.env;
  env.channel.num_devices = pt.devices;
  env.packet_bits = pt.packet_bits;
  if (env.channel.distances_m.empty()) {
    Rng rng(pt.seed);
    env.channel.distances_m = draw_distances(env, rng);
  }
  return env;
}

}  // namespace

int thread_budget() {
  if (const char* raw = std::getenv("AOI_NOMA_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(raw, &end, 10);
    if (!*raw || *end || v < 1)
      throw std::runtime_error(
          "AOI_NOMA_THREADS must be a positive integer, got '" +
          std::string(raw) + "'");
    return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

std::string checkpoint_filename(int devices, double packet_bits,
                                std::uint64_t seed) {
  return "ckpt_M" + std::to_string(devices) + "_Q" +
         compact_double(packet_bits) + "_seed" + std::to_string(seed) +
         ".txt";
}

std::string train_log_filename(int devices, double packet_bits,
                               std::uint64_t seed) {
  return "train_log_M" + std::to_string(devices) + "_Q" +
         compact_double(packet_bits) + "_seed" + std::to_string(seed) +
         ".csv";
}

void save_checkpoint(const std::string& path, const Agent& agent) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
  write_network(out, agent.actor, "actor");
  write_network(out, agent.critic, "critic");
  write_network(out, agent.target_actor, "target-actor");
  write_network(out, agent.target_critic, "target-critic");
}

Agent load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  Agent agent;
  agent.actor = read_network(in, "actor");
  agent.critic = read_network(in, "critic");
  agent.target_actor = read_network(in, "target-actor");
  agent.target_critic = read_network(in, "target-critic");
  return agent;
}

std::string train_log_csv(const std::vector<EpisodeLog>& log) {
  std::string out = "episode,cum_reward,mean_aoi,mean_energy\n";
  for (const EpisodeLog& e : log) {
    out += std::to_string(e.episode);
    out += ',' + format_double(e.cum_reward);
    out += ',' + format_double(e.mean_aoi);
    out += ',' + format_double(e.mean_energy);
    out += '\n';
  }
  return out;
}

std::string results_csv(const std::vector<ResultRow>& rows) {
  std::string out = "policy,M,Q,seed,mean_reward,mean_aoi,mean_energy\n";
  for (const ResultRow& r : rows) {
    out += r.policy;
    out += ',' + std::to_string(r.devices);
    out += ',' + format_double(r.packet_bits);
    out += ',' + std::to_string(r.seed);
    out += ',' + format_double(r.mean_reward);
    out += ',' + format_double(r.mean_aoi);
    out += ',' + format_double(r.mean_energy);
    out += '\n';
  }
  return out;
}

std::string results_per_device_csv(const std::vector<ResultRow>& rows) {
  std::string out =
      "policy,M,Q,seed,mean_aoi_per_device,mean_energy_per_device\n";
  for (const ResultRow& r : rows) {
    out += r.policy;
    out += ',' + std::to_string(r.devices);
    out += ',' + format_double(r.packet_bits);
    out += ',' + std::to_string(r.seed);
    out += ',' + format_double(r.mean_aoi / r.devices);
    out += ',' + format_double(r.mean_energy / r.devices);
    out += '\n';
  }
  return out;
}

void sort_rows(std::vector<ResultRow>& rows) {
  std::sort(rows.begin(), rows.end(),
            [](const ResultRow& a, const ResultRow& b) {
              return std::tie(a.policy, a.devices, a.packet_bits, a.seed) <
                     std::tie(b.policy, b.devices, b.packet_bits, b.seed);
            });
}

std::vector<ResultRow> run_experiment(RunMode mode, const RunConfig& cfg) {
  cfg.validate();
  fs::create_directories(cfg.out_dir);
  const fs::path out_dir(cfg.out_dir);
  {
    std::ostringstream resolved;
    save_config(resolved, cfg);
    write_text_file((out_dir / "config.txt").string(), resolved.str());
  }

  std::set<RunPoint> points;
  const int base_devices = cfg.env.channel.num_devices;
  const double base_packet = cfg.env.packet_bits;
  switch (mode) {
    case RunMode::Train:
    case RunMode::Test:
      for (std::uint64_t seed : cfg.seeds)
        points.insert({"ddpg", base_devices, base_packet, seed});
      break;
    case RunMode::BaselineRandom:
      for (std::uint64_t seed : cfg.seeds)
        points.insert({"random", base_devices, base_packet, seed});
      break;
    case RunMode::BaselineGa:
      for (std::uint64_t seed : cfg.seeds)
        points.insert({"ga", base_devices, base_packet, seed});
      break;
    case RunMode::Sweep: {
      if (cfg.sweep_devices.empty() && cfg.sweep_packet_bits.empty())
        throw std::runtime_error(
            "sweep mode needs at least one non-empty sweep axis");
      for (const std::string& policy : cfg.policies) {
        for (std::uint64_t seed : cfg.seeds) {
          for (int m : cfg.sweep_devices)
            points.insert({policy, m, base_packet, seed});
          for (double q : cfg.sweep_packet_bits)
            points.insert({policy, base_devices, q, seed});
        }
      }
      break;
    }
  }

  const std::vector<RunPoint> point_list(points.begin(), points.end());
  std::vector<ResultRow> rows(point_list.size());
  std::vector<std::function<void()>> tasks;
  tasks.reserve(point_list.size());
  // Per-point training curves, keyed and later emitted in point order.
  std::vector<std::vector<EpisodeLog>> curves(point_list.size());

  for (std::size_t i = 0; i < point_list.size(); ++i) {
    tasks.push_back([&, i] {
      const RunPoint& pt = point_list[i];
      const EnvConfig env = env_at_point(cfg, pt);
      env.validate();
      const double beta = cfg.agent.discount;
      const std::uint64_t eval_seed = derive_seed(pt.seed, 7);
      EvalSummary summary;
      if (pt.policy == "ddpg") {
        const fs::path ckpt =
            out_dir /
            checkpoint_filename(pt.devices, pt.packet_bits, pt.seed);
        Agent agent;
        if (fs::exists(ckpt)) {
          agent = load_checkpoint(ckpt.string());
        } else {
          if (mode == RunMode::Test)
            throw std::runtime_error("checkpoint not found: " +
                                     ckpt.string());
          TrainResult trained = train(env, cfg.agent, pt.seed);
          agent = std::move(trained.agent);
          curves[i] = std::move(trained.log);
          write_text_file(
              (out_dir / train_log_filename(pt.devices, pt.packet_bits,
                                            pt.seed))
                  .string(),
              train_log_csv(curves[i]));
          save_checkpoint(ckpt.string(), agent);
        }
        summary = evaluate(agent.actor, env, beta, cfg.test_episodes,
                           eval_seed);
      } else if (pt.policy == "ga") {
        summary = evaluate_ga(env, cfg.ga, beta, cfg.test_episodes,
                              eval_seed);
      } else {
        summary = evaluate_random(env, beta, cfg.test_episodes, eval_seed);
      }
      rows[i] = ResultRow{pt.policy,           pt.devices,
                          pt.packet_bits,      pt.seed,
                          summary.mean_slot_reward, summary.mean_aoi,
                          summary.mean_energy};
    });
  }

  run_parallel(tasks, thread_budget());

  sort_rows(rows);
  write_text_file((out_dir / "results.csv").string(), results_csv(rows));
  write_text_file((out_dir / "results_per_device.csv").string(),
                  results_per_device_csv(rows));

  auto mean_metric = [&rows](const std::string& policy, int devices,
                             double packet_bits, int which) {
    double total = 0.0;
    int count = 0;
    for (const ResultRow& r : rows) {
      if (r.policy != policy || r.devices != devices ||
          r.packet_bits != packet_bits)
        continue;
      total += (which == 0 ? r.mean_reward
                           : which == 1 ? r.mean_aoi : r.mean_energy);
      count += 1;
    }
    return count ? total / count : 0.0;
  };

  if (mode == RunMode::Sweep) {
    const char* metric_names[] = {"reward", "aoi", "energy"};
    const char* metric_labels[] = {"mean reward per slot", "mean AoI [s]",
                                   "mean energy [J]"};
    for (int which = 0; which < 3; ++which) {
      if (!cfg.sweep_devices.empty()) {
        std::vector<int> axis = cfg.sweep_devices;
        std::sort(axis.begin(), axis.end());
        axis.erase(std::unique(axis.begin(), axis.end()), axis.end());
        std::vector<PlotSeries> series;
        for (const std::string& policy : cfg.policies) {
          PlotSeries s{policy, policy_color(policy), {}, {}};
          for (int m : axis) {
            s.x.push_back(m);
            s.y.push_back(mean_metric(policy, m, base_packet, which));
          }
          series.push_back(std::move(s));
        }
        write_text_file(
            (out_dir / (std::string(metric_names[which]) + "_vs_devices.svg"))
                .string(),
            line_plot_svg(std::string(metric_labels[which]) +
                              " vs device count",
                          "devices", metric_labels[which], series));
      }
      if (!cfg.sweep_packet_bits.empty()) {
        std::vector<double> axis = cfg.sweep_packet_bits;
        std::sort(axis.begin(), axis.end());
        axis.erase(std::unique(axis.begin(), axis.end()), axis.end());
        std::vector<PlotSeries> series;
        for (const std::string& policy : cfg.policies) {
          PlotSeries s{policy, policy_color(policy), {}, {}};
          for (double q : axis) {
            s.x.push_back(q);
            s.y.push_back(mean_metric(policy, base_devices, q, which));
          }
          series.push_back(std::move(s));
        }
        write_text_file((out_dir / (std::string(metric_names[which]) +
                                    "_vs_packet_bits.svg"))
                            .string(),
                        line_plot_svg(std::string(metric_labels[which]) +
                                          " vs packet size",
                                      "packet bits", metric_labels[which],
                                      series));
      }
    }
  }

  if (mode == RunMode::Train) {
    std::vector<PlotSeries> series;
    int color = 0;
    for (std::size_t i = 0; i < point_list.size(); ++i) {
      if (curves[i].empty()) continue;
      PlotSeries s;
      s.label = "seed " + std::to_string(point_list[i].seed);
      s.color = kSeedPalette[color++ % (sizeof(kSeedPalette) /
                                        sizeof(kSeedPalette[0]))];
      for (const EpisodeLog& e : curves[i]) {
        s.x.push_back(e.episode);
        s.y.push_back(e.cum_reward);
      }
      series.push_back(std::move(s));
    }
    if (!series.empty())
      write_text_file(
          (out_dir / ("train_curve_M" + std::to_string(base_devices) + "_Q" +
                      compact_double(base_packet) + ".svg"))
              .string(),
          line_plot_svg("training reward", "episode", "episode reward",
                        series));
  }

  return rows;
}

}  // namespace aoinoma
