// SPDX-License-Identifier: Apache-2.0
//
// wet-sim run|compare|sweep --config <path> [--out <path>] [--seed <u64>] [--trials <n>]
// Exit codes: 0 success, 1 config error, 2 runtime error, 3 I/O error.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "wetsim/config.hpp"
#include "wetsim/errors.hpp"
#include "wetsim/report.hpp"
#include "wetsim/simulator.hpp"

namespace {

struct Options {
  std::string config_path;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
};

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--config", opt.config_path, "experiment config file")->required();
  cmd->add_option("--out", opt.out, "CSV output path (overrides run.output_path)");
  cmd->add_option("--seed", opt.seed, "base seed (overrides run.base_seed)");
  cmd->add_option("--trials", opt.trials, "Monte Carlo trials (overrides run.trials)");
}

wetsim::ExperimentConfig load(const Options& opt) {
  wetsim::ExperimentConfig cfg = wetsim::parse_config_file(opt.config_path);
  if (!opt.out.empty()) {
    cfg.output_path = opt.out;
  }
  if (opt.seed) {
    cfg.base_seed = *opt.seed;
  }
  if (opt.trials) {
    cfg.trials = *opt.trials;
  }
  cfg.validate();
  return cfg;
}

void emit(const wetsim::ExperimentConfig& cfg, const std::string& csv) {
  if (cfg.output_path.empty()) {
    std::cout << csv;
    std::cout.flush();
    if (!std::cout) {
      throw wetsim::IoError("failed writing to standard output");
    }
    return;
  }
  std::ofstream out(cfg.output_path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw wetsim::IoError("cannot open '" + cfg.output_path + "' for writing");
  }
  out << csv;
  out.flush();
  if (!out) {
    throw wetsim::IoError("failed writing '" + cfg.output_path + "'");
  }
}

int cmd_run(const Options& opt) {
  const auto cfg = load(opt);
  const auto result = wetsim::monte_carlo(cfg, true);
  std::ostringstream csv;
  wetsim::write_run_csv(csv, cfg, result);
  emit(cfg, csv.str());
  std::fprintf(stderr, "%s: %zu trials, median power ratio %.4f, median q_total_rate %.6g W\n",
               std::string(wetsim::algorithm_name(cfg.schedule.algorithm)).c_str(), cfg.trials,
               result.power_ratio.median, result.q_total_rate.median);
  return 0;
}

int cmd_compare(const Options& opt) {
  const auto cfg = load(opt);
  if (cfg.compare_algorithms.size() < 2) {
    throw wetsim::ConfigError("compare.algorithms needs at least two algorithms");
  }
  wetsim::AlgorithmResults results;
  for (auto a : cfg.compare_algorithms) {
    auto c = cfg;
    c.schedule.algorithm = a;
    c.validate();
    results.emplace_back(a, wetsim::monte_carlo(c, true));
  }
  std::ostringstream csv;
  wetsim::write_compare_csv(csv, cfg, results);
  emit(cfg, csv.str());
  std::size_t rank = 1;
  for (std::size_t i : wetsim::rank_by_power_ratio(results)) {
    std::fprintf(stderr, "%zu. %-14s median power ratio %.4f\n", rank++,
                 std::string(wetsim::algorithm_name(results[i].first)).c_str(),
                 results[i].second.power_ratio.median);
  }
  return 0;
}

int cmd_sweep(const Options& opt) {
  const auto cfg = load(opt);
  const auto rows = wetsim::sweep_learning_budget(cfg, cfg.compare_algorithms, cfg.sweep_grid);
  std::ostringstream csv;
  wetsim::write_sweep_csv(csv, cfg, rows, cfg.compare_algorithms);
  emit(cfg, csv.str());
  for (auto a : cfg.compare_algorithms) {
    if (wetsim::is_learned(a)) {
      std::fprintf(stderr, "%-14s best n_learn %zu\n", std::string(wetsim::algorithm_name(a)).c_str(),
                   wetsim::sweep_argmax(rows, a));
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"One-bit feedback channel learning for MIMO wireless energy transfer"};
  app.footer("\n" + wetsim::config_help());
  app.require_subcommand(1);
  Options opt;
  auto* run = app.add_subcommand("run", "simulate one algorithm and write per-interval traces");
  auto* compare = app.add_subcommand("compare", "run several algorithms on paired channel draws");
  auto* sweep = app.add_subcommand("sweep", "harvested power versus learning budget");
  for (auto* cmd : {run, compare, sweep}) {
    add_common(cmd, opt);
    cmd->footer("\n" + wetsim::config_help());
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) {
      return cmd_run(opt);
    }
    if (compare->parsed()) {
      return cmd_compare(opt);
    }
    return cmd_sweep(opt);
  } catch (const wetsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const wetsim::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
