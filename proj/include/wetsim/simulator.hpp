// SPDX-License-Identifier: Apache-2.0
//
// Two-phase block simulation: N_L learning intervals followed by N - N_L
// intervals on the learned beam, plus Monte Carlo aggregation.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "wetsim/accpm.hpp"
#include "wetsim/baselines.hpp"
#include "wetsim/channel.hpp"

namespace wetsim {

enum class Algorithm { accpm, cjt, gradient_sign, dist_bf, isotropic, perfect_csi };

std::string_view algorithm_name(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view name);
bool is_learned(Algorithm a);

struct ProtocolSchedule {
  std::size_t n_total = 200;
  std::size_t n_learn = 60;
  double interval_duration = 1.0;
  Algorithm algorithm = Algorithm::accpm;

  /// Throws ConfigError. n_learn = 0 is accepted for the reference
  /// pseudo-algorithms only.
  void validate() const;
};

struct AlgorithmConfig {
  AccpmSettings accpm;
  BaselineSettings baselines;
};

struct TraceRow {
  std::size_t interval;  // 1-based learning interval
  std::size_t user;      // 1-based receiver
  int feedback_bit;      // 0 if the receiver sent none
  double matrix_error;   // ||G~_k - G_k||_F of the current estimate
  double power_ratio;    // of the current beam
  double q_rate;         // efficiency * gamma * tr(G S_n): weighted harvested power this interval
};

struct TrialResult {
  std::vector<TraceRow> trace;
  std::vector<double> matrix_errors;  // per receiver
  CVector beam;
  double power_ratio = 0.0;
  double q_total = 0.0;       // weighted sum-energy over the block, before efficiency
  double q_total_rate = 0.0;  // efficiency * q_total / (N T_s)
  std::vector<HermitianMatrix> covariances;  // learning-phase transmissions
  double wall_seconds = 0.0;
  std::size_t probe_halvings = 0;
  std::size_t partial_cjt = 0;
};

/// v^H G v / lambda_max(G). Throws DomainError for G = 0.
double power_ratio(const HermitianMatrix& g, std::span<const cplx> v);

TrialResult run_block(const ChannelRealization& channel, double power, double efficiency,
                      const ProtocolSchedule& schedule, const AlgorithmConfig& algo, std::mt19937_64& rng,
                      bool record_trace = false);

struct ExperimentConfig {
  RicianConfig scenario;
  ProtocolSchedule schedule;
  AlgorithmConfig algo;
  std::size_t trials = 50;
  std::uint64_t base_seed = 1;
  std::string output_path;
  std::vector<std::size_t> sweep_grid;          // empty: 2, 4, ..., N
  std::vector<Algorithm> compare_algorithms;    // empty: all four learners

  void validate() const;
};

/// Channel and algorithm streams for trial `index`. The channel stream depends
/// only on the seed, so every algorithm sees the same draws.
std::mt19937_64 channel_rng(std::uint64_t base_seed, std::size_t index);
std::mt19937_64 algorithm_rng(std::uint64_t base_seed, std::size_t index);

struct Summary {
  double median = 0.0;
  double mean = 0.0;
  double p25 = 0.0;
  double p75 = 0.0;
};

Summary summarize(std::vector<double> values);

struct MonteCarloResult {
  std::vector<TrialResult> trials;  // ordered by trial index
  Summary power_ratio;
  Summary q_total_rate;
  Summary matrix_error;  // over all receivers of all trials
};

/// Worker count: WET_SIM_THREADS if set, else hardware concurrency.
std::size_t worker_count();

MonteCarloResult monte_carlo(const ExperimentConfig& cfg, bool record_trace = false);

struct SweepRow {
  Algorithm algorithm;
  std::size_t n_learn;
  Summary q_total_rate;
  double power_ratio_median;
};

/// One row per (algorithm, N_L) plus perfect_csi and isotropic reference rows.
/// Learned algorithms are skipped at N_L = 0.
std::vector<SweepRow> sweep_learning_budget(const ExperimentConfig& cfg, const std::vector<Algorithm>& algorithms,
                                            const std::vector<std::size_t>& grid);

/// N_L of the row with the largest median q_total_rate for `a`.
std::size_t sweep_argmax(const std::vector<SweepRow>& rows, Algorithm a);

std::vector<std::size_t> default_sweep_grid(std::size_t n_total);

}  // namespace wetsim
