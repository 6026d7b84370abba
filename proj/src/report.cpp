// SPDX-License-Identifier: Apache-2.0

#include "wetsim/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <string>

#include "wetsim/errors.hpp"

namespace wetsim {

namespace {

std::string num(double v) {
  if (!std::isfinite(v)) {
    throw Error("non-finite value in results table");
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_rows(std::ostream& os, const std::string& prefix, const MonteCarloResult& result) {
  for (std::size_t t = 0; t < result.trials.size(); ++t) {
    const TrialResult& tr = result.trials[t];
    const std::string trial = prefix + std::to_string(t) + ",";
    for (const TraceRow& r : tr.trace) {
      os << trial << r.interval << ',' << r.user << ',' << r.feedback_bit << ',' << num(r.matrix_error) << ','
         << num(r.power_ratio) << ',' << num(r.q_rate) << '\n';
    }
    for (std::size_t k = 0; k < tr.matrix_errors.size(); ++k) {
      os << trial << "0," << k + 1 << ",0," << num(tr.matrix_errors[k]) << ',' << num(tr.power_ratio) << ','
         << num(tr.q_total_rate) << '\n';
    }
  }
}

void write_setup_footer(std::ostream& os, const ExperimentConfig& cfg) {
  os << "# m_t=" << cfg.scenario.m_t << " m_r=" << cfg.scenario.m_r << " k_users=" << cfg.scenario.k_users
     << " n_total=" << cfg.schedule.n_total << " trials=" << cfg.trials << " base_seed=" << cfg.base_seed << '\n';
}

void write_summary_footer(std::ostream& os, const std::string& label, const ExperimentConfig& cfg,
                          const MonteCarloResult& r) {
  os << "# " << label << " n_learn=" << cfg.schedule.n_learn
     << " power_ratio_median=" << num(r.power_ratio.median) << " power_ratio_mean=" << num(r.power_ratio.mean)
     << " matrix_error_median=" << num(r.matrix_error.median)
     << " q_total_rate_median=" << num(r.q_total_rate.median) << " q_total_rate_mean=" << num(r.q_total_rate.mean)
     << '\n';
}

constexpr const char* kRunColumns = "trial,interval,user,feedback_bit,matrix_error,power_ratio,q_total_rate";

}  // namespace

void write_run_csv(std::ostream& os, const ExperimentConfig& cfg, const MonteCarloResult& result) {
  os << kRunColumns << '\n';
  write_rows(os, "", result);
  write_setup_footer(os, cfg);
  write_summary_footer(os, std::string("algorithm=") + std::string(algorithm_name(cfg.schedule.algorithm)), cfg,
                       result);
}

std::vector<std::size_t> rank_by_power_ratio(const AlgorithmResults& results) {
  std::vector<std::size_t> order(results.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return results[a].second.power_ratio.median > results[b].second.power_ratio.median;
  });
  return order;
}

void write_compare_csv(std::ostream& os, const ExperimentConfig& cfg, const AlgorithmResults& results) {
  os << "algorithm," << kRunColumns << '\n';
  for (const auto& [alg, r] : results) {
    write_rows(os, std::string(algorithm_name(alg)) + ",", r);
  }
  write_setup_footer(os, cfg);
  for (const auto& [alg, r] : results) {
    write_summary_footer(os, std::string("algorithm=") + std::string(algorithm_name(alg)), cfg, r);
  }
  std::size_t rank = 1;
  for (std::size_t i : rank_by_power_ratio(results)) {
    os << "# rank " << rank++ << ' ' << algorithm_name(results[i].first)
       << " median_power_ratio=" << num(results[i].second.power_ratio.median) << '\n';
  }
}

void write_sweep_csv(std::ostream& os, const ExperimentConfig& cfg, const std::vector<SweepRow>& rows,
                     const std::vector<Algorithm>& algorithms) {
  os << "algorithm,n_learn,q_total_rate_median,q_total_rate_mean,q_total_rate_p25,q_total_rate_p75,"
        "power_ratio_median\n";
  for (const auto& r : rows) {
    os << algorithm_name(r.algorithm) << ',' << r.n_learn << ',' << num(r.q_total_rate.median) << ','
       << num(r.q_total_rate.mean) << ',' << num(r.q_total_rate.p25) << ',' << num(r.q_total_rate.p75) << ','
       << num(r.power_ratio_median) << '\n';
  }
  write_setup_footer(os, cfg);
  for (Algorithm a : algorithms) {
    if (!is_learned(a)) {
      continue;
    }
    os << "# argmax " << algorithm_name(a) << " n_learn=" << sweep_argmax(rows, a) << '\n';
  }
}

}  // namespace wetsim
