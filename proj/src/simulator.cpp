// SPDX-License-Identifier: Apache-2.0

#include <chrono>
#include <cmath>
#include <string>

#include "wetsim/errors.hpp"
#include "wetsim/simulator.hpp"

namespace wetsim {

namespace {

constexpr std::pair<Algorithm, std::string_view> kNames[] = {
    {Algorithm::accpm, "accpm"},         {Algorithm::cjt, "cjt"},
    {Algorithm::gradient_sign, "gradient_sign"}, {Algorithm::dist_bf, "dist_bf"},
    {Algorithm::isotropic, "isotropic"}, {Algorithm::perfect_csi, "perfect_csi"},
};

}  // namespace

std::string_view algorithm_name(Algorithm a) {
  for (const auto& [alg, name] : kNames) {
    if (alg == a) {
      return name;
    }
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (const auto& [alg, n] : kNames) {
    if (n == name) {
      return alg;
    }
  }
  return std::nullopt;
}

bool is_learned(Algorithm a) { return a != Algorithm::isotropic && a != Algorithm::perfect_csi; }

void ProtocolSchedule::validate() const {
  if (n_total < 1) {
    throw ConfigError("schedule.n_total must be at least 1");
  }
  if (n_learn > n_total) {
    throw ConfigError("schedule.n_learn (" + std::to_string(n_learn) + ") exceeds schedule.n_total (" +
                      std::to_string(n_total) + ")");
  }
  if (n_learn == 0 && is_learned(algorithm)) {
    throw ConfigError("schedule.n_learn = 0 is only valid for perfect_csi and isotropic, not " +
                      std::string(algorithm_name(algorithm)));
  }
  if (!(interval_duration > 0.0) || !std::isfinite(interval_duration)) {
    throw ConfigError("schedule.interval_duration must be positive");
  }
}

double power_ratio(const HermitianMatrix& g, std::span<const cplx> v) {
  const HermEig e = herm_eig(g);
  if (!(e.values[0] > 0.0)) {
    throw DomainError("power ratio of a zero channel");
  }
  return g.quadratic_form(v) / e.values[0];
}

TrialResult run_block(const ChannelRealization& channel, double power, double efficiency,
                      const ProtocolSchedule& schedule, const AlgorithmConfig& algo, std::mt19937_64& rng,
                      bool record_trace) {
  schedule.validate();
  const auto start = std::chrono::steady_clock::now();
  const Composite comp = composite_channel(channel);
  const std::size_t m_t = channel.m_t;
  const std::size_t k_users = channel.users.size();
  const double lambda = herm_eig(comp.g).values[0];
  const double ts = schedule.interval_duration;

  TrialResult res;
  FeedbackOracle oracle(channel, ts);

  IntervalObserver observer;
  if (record_trace) {
    observer = [&](const IntervalView& view) {
      const double ratio = comp.g.quadratic_form(view.beam) / lambda;
      const double rate = efficiency * comp.gamma * trace_product(comp.g, view.covariance);
      for (std::size_t k = 0; k < k_users; ++k) {
        const double err = (view.estimates[k] - channel.users[k].g).frobenius_norm();
        res.trace.push_back({view.interval, k + 1, view.bits[k], err, ratio, rate});
      }
    };
  }

  std::vector<HermitianMatrix> estimates;
  switch (schedule.algorithm) {
    case Algorithm::accpm: {
      const AccpmResult r = accpm_learn(oracle, power, schedule.n_learn, algo.accpm, rng, observer);
      estimates = r.estimates;
      res.beam = r.beam;
      res.probe_halvings = r.probe_halvings;
      break;
    }
    case Algorithm::cjt:
    case Algorithm::gradient_sign:
    case Algorithm::dist_bf: {
      const BaselineKind kind = schedule.algorithm == Algorithm::cjt             ? BaselineKind::cjt
                                : schedule.algorithm == Algorithm::gradient_sign ? BaselineKind::gradient_sign
                                                                                 : BaselineKind::dist_bf;
      const BaselineResult r = baseline_learn(kind, oracle, power, schedule.n_learn, algo.baselines, rng, observer);
      estimates = r.estimates;
      res.beam = r.beam;
      res.partial_cjt = r.partial_cjt;
      break;
    }
    case Algorithm::perfect_csi:
    case Algorithm::isotropic: {
      const bool perfect = schedule.algorithm == Algorithm::perfect_csi;
      const HermitianMatrix s = perfect ? oeb(comp.g, power).s_star
                                        : HermitianMatrix::identity(m_t, power / static_cast<double>(m_t));
      for (std::size_t k = 0; k < k_users; ++k) {
        estimates.push_back(perfect ? channel.users[k].g
                                    : HermitianMatrix::identity(m_t, 1.0 / std::sqrt(static_cast<double>(m_t))));
      }
      std::vector<int> bits(k_users, 0);
      const CVector beam = perfect ? oeb(comp.g, power).beam : CVector{};
      for (std::size_t n = 1; n <= schedule.n_learn; ++n) {
        oracle.transmit(s, {});
        if (observer) {
          const double rate = efficiency * comp.gamma * trace_product(comp.g, s);
          const double ratio = perfect ? 1.0 : comp.g.trace() / (static_cast<double>(m_t) * lambda);
          for (std::size_t k = 0; k < k_users; ++k) {
            const double err = (estimates[k] - channel.users[k].g).frobenius_norm();
            res.trace.push_back({n, k + 1, 0, err, ratio, rate});
          }
        }
      }
      res.beam = beam;
      break;
    }
  }

  res.covariances = oracle.history();
  double learned = 0.0;
  for (const auto& s : res.covariances) {
    learned += ts * comp.gamma * trace_product(comp.g, s);
  }
  const double remaining = static_cast<double>(schedule.n_total - schedule.n_learn) * ts;
  double energy_rate = 0.0;  // gamma * tr(G S_E) per unit time
  if (schedule.algorithm == Algorithm::isotropic) {
    energy_rate = comp.gamma * power * comp.g.trace() / static_cast<double>(m_t);
    res.power_ratio = comp.g.trace() / (static_cast<double>(m_t) * lambda);
  } else {
    energy_rate = comp.gamma * power * comp.g.quadratic_form(res.beam);
    res.power_ratio = comp.g.quadratic_form(res.beam) / lambda;
  }
  res.q_total = learned + remaining * energy_rate;
  res.q_total_rate = efficiency * res.q_total / (static_cast<double>(schedule.n_total) * ts);

  for (std::size_t k = 0; k < k_users; ++k) {
    res.matrix_errors.push_back((estimates[k] - channel.users[k].g).frobenius_norm());
  }
  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

}  // namespace wetsim
