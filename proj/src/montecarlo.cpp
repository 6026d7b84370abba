// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>

#include "wetsim/errors.hpp"
#include "wetsim/simulator.hpp"

namespace wetsim {

void ExperimentConfig::validate() const {
  try {
    scenario.validate();
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
  schedule.validate();
  try {
    algo.accpm.validate();
    algo.baselines.cjt.validate();
    algo.baselines.gradient_sign.validate();
    algo.baselines.dist_bf.validate();
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
  if (trials < 1) {
    throw ConfigError("run.trials must be at least 1");
  }
  for (std::size_t n : sweep_grid) {
    if (n > schedule.n_total) {
      throw ConfigError("sweep.grid value " + std::to_string(n) + " exceeds schedule.n_total");
    }
  }
}

std::mt19937_64 channel_rng(std::uint64_t base_seed, std::size_t index) {
  return std::mt19937_64(base_seed + index);
}

std::mt19937_64 algorithm_rng(std::uint64_t base_seed, std::size_t index) {
  const std::uint64_t s = base_seed + index;
  std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32), 0x9e3779b9u};
  return std::mt19937_64(seq);
}

Summary summarize(std::vector<double> values) {
  Summary s;
  if (values.empty()) {
    return s;
  }
  std::sort(values.begin(), values.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  s.median = quantile(0.5);
  s.p25 = quantile(0.25);
  s.p75 = quantile(0.75);
  double total = 0.0;
  for (double v : values) {
    total += v;
  }
  s.mean = total / static_cast<double>(values.size());
  return s;
}

std::size_t worker_count() {
  if (const char* env = std::getenv("WET_SIM_THREADS"); env != nullptr) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) {
      return static_cast<std::size_t>(v);
    }
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

MonteCarloResult monte_carlo(const ExperimentConfig& cfg, bool record_trace) {
  cfg.validate();
  MonteCarloResult out;
  out.trials.resize(cfg.trials);
  std::vector<std::exception_ptr> errors(cfg.trials);
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < cfg.trials; i = next.fetch_add(1)) {
      try {
        auto crng = channel_rng(cfg.base_seed, i);
        const ChannelRealization ch = gen_channel(cfg.scenario, crng);
        auto arng = algorithm_rng(cfg.base_seed, i);
        out.trials[i] = run_block(ch, cfg.scenario.power_watts, cfg.scenario.efficiency, cfg.schedule, cfg.algo,
                                  arng, record_trace);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t n_workers = std::min(worker_count(), cfg.trials);
  if (n_workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_workers; ++t) {
      pool.emplace_back(work);
    }
    for (auto& t : pool) {
      t.join();
    }
  }
  for (const auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }

  std::vector<double> ratios;
  std::vector<double> rates;
  std::vector<double> errs;
  for (const auto& t : out.trials) {
    ratios.push_back(t.power_ratio);
    rates.push_back(t.q_total_rate);
    errs.insert(errs.end(), t.matrix_errors.begin(), t.matrix_errors.end());
  }
  out.power_ratio = summarize(ratios);
  out.q_total_rate = summarize(rates);
  out.matrix_error = summarize(errs);
  return out;
}

std::vector<std::size_t> default_sweep_grid(std::size_t n_total) {
  std::vector<std::size_t> grid;
  for (std::size_t n = 2; n <= n_total; n += 2) {
    grid.push_back(n);
  }
  return grid;
}

std::vector<SweepRow> sweep_learning_budget(const ExperimentConfig& cfg, const std::vector<Algorithm>& algorithms,
                                            const std::vector<std::size_t>& grid) {
  if (grid.empty()) {
    throw ConfigError("sweep grid is empty");
  }
  std::vector<Algorithm> all = algorithms;
  for (Algorithm ref : {Algorithm::perfect_csi, Algorithm::isotropic}) {
    if (std::find(all.begin(), all.end(), ref) == all.end()) {
      all.push_back(ref);
    }
  }
  std::vector<SweepRow> rows;
  for (Algorithm a : all) {
    for (std::size_t n_l : grid) {
      if (n_l == 0 && is_learned(a)) {
        continue;
      }
      ExperimentConfig c = cfg;
      c.schedule.algorithm = a;
      c.schedule.n_learn = n_l;
      const MonteCarloResult r = monte_carlo(c);
      rows.push_back({a, n_l, r.q_total_rate, r.power_ratio.median});
    }
  }
  return rows;
}

std::size_t sweep_argmax(const std::vector<SweepRow>& rows, Algorithm a) {
  std::size_t best = 0;
  double best_value = -1.0;
  for (const auto& r : rows) {
    if (r.algorithm == a && r.q_total_rate.median > best_value) {
      best_value = r.q_total_rate.median;
      best = r.n_learn;
    }
  }
  return best;
}

}  // namespace wetsim
