// SPDX-License-Identifier: Apache-2.0
//
// CSV tables for the run, compare and sweep commands. Output depends only on
// the config and seed (no timings), so identical inputs give identical bytes.

#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "wetsim/simulator.hpp"

namespace wetsim {

/// trial,interval,user,feedback_bit,matrix_error,power_ratio,q_total_rate.
/// Learning-interval rows come first for each trial, then one summary row
/// per receiver with interval = 0 and feedback_bit = 0.
void write_run_csv(std::ostream& os, const ExperimentConfig& cfg, const MonteCarloResult& result);

using AlgorithmResults = std::vector<std::pair<Algorithm, MonteCarloResult>>;

/// Run rows with a leading algorithm column, then a ranking footer by
/// median power ratio.
void write_compare_csv(std::ostream& os, const ExperimentConfig& cfg, const AlgorithmResults& results);

/// Ranking used by the compare footer: indices into `results`, best first.
std::vector<std::size_t> rank_by_power_ratio(const AlgorithmResults& results);

void write_sweep_csv(std::ostream& os, const ExperimentConfig& cfg, const std::vector<SweepRow>& rows,
                     const std::vector<Algorithm>& algorithms);

}  // namespace wetsim
