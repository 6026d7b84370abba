// SPDX-License-Identifier: Apache-2.0

#include "wetsim/baselines.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "wetsim/errors.hpp"

namespace wetsim {

void CjtConfig::validate() const {
  if (!(eta > 0.0)) {
    throw PreconditionError("algorithm.cjt_eta must be positive");
  }
  if (sweeps < 1) {
    throw PreconditionError("algorithm.cjt_sweeps must be positive");
  }
}

void GradientSignConfig::validate() const {
  if (!(step > 0.0)) {
    throw PreconditionError("algorithm.gs_step must be positive");
  }
}

void DistBfConfig::validate() const {
  if (!(chi > 0.0 && chi < 2.0 * std::numbers::pi)) {
    throw PreconditionError("algorithm.dbf_chi_over_pi must lie in (0, 2)");
  }
}

std::vector<Slot> slot_plan(std::size_t k_users, std::size_t n_l) {
  if (k_users < 1) {
    throw PreconditionError("slot plan needs at least one receiver");
  }
  const std::size_t base = n_l / k_users;
  std::vector<Slot> slots;
  for (std::size_t k = 0; k < k_users; ++k) {
    const std::size_t count = k + 1 == k_users ? n_l - base * (k_users - 1) : base;
    slots.push_back({k, k * base + 1, count});
  }
  return slots;
}

namespace {

CVector scaled(CVector v, double target_norm) {
  const double n = norm(std::span<const cplx>(v));
  for (auto& z : v) {
    z *= target_norm / n;
  }
  return v;
}

CVector unit(CVector v) { return scaled(std::move(v), 1.0); }

CVector uniform_direction(std::size_t m, double amplitude) { return CVector(m, cplx(amplitude, 0.0)); }

}  // namespace

int cjt_probe_count(double width, double eta) {
  int probes = 0;
  while (width > eta) {
    width *= 0.5;
    ++probes;
  }
  return probes;
}

std::vector<std::pair<std::size_t, std::size_t>> cjt_pairs(std::size_t m_t) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t l = 0; l < m_t; ++l) {
    for (std::size_t m = l + 1; m < m_t; ++m) {
      pairs.emplace_back(l, m);
    }
  }
  return pairs;
}

CjtResult cjt_learn(FeedbackOracle& oracle, std::size_t k, const CjtConfig& cfg, double power, std::size_t budget,
                    const DirectionObserver& observer) {
  const std::size_t m_t = oracle.m_t();
  CjtResult res;
  res.v = CMatrix::identity(m_t);
  CMatrix work = res.v;
  const double amp = std::sqrt(power);
  const std::size_t receiver[1] = {k};

  auto send = [&](const CVector& w) -> std::optional<int> {
    if (res.intervals_used >= budget) {
      return std::nullopt;
    }
    const HermitianMatrix s = HermitianMatrix::outer(w);
    const int bit = oracle.transmit(s, receiver)[0];
    ++res.intervals_used;
    if (observer) {
      observer(s, bit, res.v.column(0));
    }
    return bit;
  };

  // Maximizer of e(x) = C + R cos(omega (x - x0)) over one period [lo, hi].
  // Each probe q = 2 mid - p mirrors the previous transmission p about the
  // bracket midpoint, so one bit gives the sign of sin(omega (mid - x0)).
  auto line_search = [&](auto&& beam_at, double lo, double hi, double omega) -> std::optional<double> {
    const double quarter = std::numbers::pi / (2.0 * omega);
    double p = 0.5 * (lo + hi) - quarter;
    if (!send(beam_at(p))) {
      return std::nullopt;
    }
    int probes = 0;
    while (hi - lo > cfg.eta) {
      const double mid = 0.5 * (lo + hi);
      double q = 2.0 * mid - p;
      double s = std::sin(omega * (q - p) / 2.0);
      if (std::abs(s) < 0.1) {
        p = mid - quarter;
        if (!send(beam_at(p))) {
          return std::nullopt;
        }
        q = mid + quarter;
        s = 1.0;
      }
      const auto bit = send(beam_at(q));
      if (!bit) {
        return std::nullopt;
      }
      ++probes;
      const bool x0_below_mid = *bit == -1 ? s < 0.0 : s > 0.0;
      (x0_below_mid ? hi : lo) = mid;
      p = q;
    }
    res.line_search_probes.push_back(probes);
    return 0.5 * (lo + hi);
  };

  for (int sweep = 0; sweep < cfg.sweeps; ++sweep) {
    for (const auto& [l, m] : cjt_pairs(m_t)) {
      const CVector ul = work.column(l);
      const CVector um = work.column(m);
      auto beam = [&](double theta, double phi) {
        CVector w(m_t);
        const cplx rot = std::polar(std::sin(theta), phi);
        for (std::size_t i = 0; i < m_t; ++i) {
          w[i] = amp * (std::cos(theta) * ul[i] + rot * um[i]);
        }
        return w;
      };
      const auto phi = line_search([&](double x) { return beam(std::numbers::pi / 4.0, x); }, -std::numbers::pi,
                                   std::numbers::pi, 1.0);
      if (!phi) {
        res.partial = true;
        return res;
      }
      const auto theta = line_search([&](double x) { return beam(x, *phi); }, -std::numbers::pi / 2.0,
                                     std::numbers::pi / 2.0, 2.0);
      if (!theta) {
        res.partial = true;
        return res;
      }
      const double c = std::cos(*theta);
      const cplx s = std::polar(std::sin(*theta), *phi);
      for (std::size_t i = 0; i < m_t; ++i) {
        work(i, l) = c * ul[i] + s * um[i];
        work(i, m) = -std::conj(s) * ul[i] + c * um[i];
      }
    }
    res.v = work;
    ++res.sweeps_done;
  }
  return res;
}

CVector gradient_sign_learn(FeedbackOracle& oracle, std::size_t k, const GradientSignConfig& cfg, double power,
                            std::size_t budget, std::mt19937_64& rng, const DirectionObserver& observer,
                            GradientSignTrace* trace) {
  const std::size_t m_t = oracle.m_t();
  const double amp = std::sqrt(power);
  CVector w = uniform_direction(m_t, std::sqrt(power / static_cast<double>(m_t)));
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::size_t receiver[1] = {k};

  auto send = [&](const CVector& beam) {
    const HermitianMatrix s = HermitianMatrix::outer(beam);
    const int bit = oracle.transmit(s, receiver)[0];
    if (observer) {
      observer(s, bit, unit(w));
    }
    return bit;
  };

  std::size_t used = 0;
  for (; used + 2 <= budget; used += 2) {
    CVector delta(m_t);
    for (auto& z : delta) {
      z = cplx(gauss(rng), gauss(rng));
    }
    const double dn = norm(std::span<const cplx>(delta));
    CVector plus(m_t);
    CVector minus(m_t);
    for (std::size_t i = 0; i < m_t; ++i) {
      const cplx d = dn > 0.0 ? delta[i] * (cfg.step * amp / dn) : cplx(0.0);
      plus[i] = w[i] + d;
      minus[i] = w[i] - d;
    }
    plus = scaled(std::move(plus), amp);
    minus = scaled(std::move(minus), amp);
    send(plus);
    const int bit = send(minus);
    w = bit == -1 ? minus : plus;
    if (trace) {
      trace->probe_plus.push_back(oracle.energy(HermitianMatrix::outer(plus), k));
      trace->probe_minus.push_back(oracle.energy(HermitianMatrix::outer(minus), k));
      trace->reference_energy.push_back(oracle.energy(HermitianMatrix::outer(w), k));
    }
  }
  if (used < budget) {
    send(w);
  }
  return unit(std::move(w));
}

CVector distributed_bf_learn(FeedbackOracle& oracle, std::size_t k, const DistBfConfig& cfg, double power,
                             std::size_t budget, std::mt19937_64& rng, const DirectionObserver& observer,
                             std::vector<double>* best_trace) {
  const std::size_t m_t = oracle.m_t();
  const double amp = std::sqrt(power / static_cast<double>(m_t));
  std::vector<double> best(m_t, 0.0);
  std::uniform_real_distribution<double> jitter(-cfg.chi / 2.0, cfg.chi / 2.0);

  auto beam_of = [&](const std::vector<double>& phases) {
    CVector w(m_t);
    for (std::size_t i = 0; i < m_t; ++i) {
      w[i] = std::polar(amp, phases[i]);
    }
    return w;
  };
  auto send = [&](const std::vector<double>& phases) {
    const HermitianMatrix s = HermitianMatrix::outer(beam_of(phases));
    const int bit = oracle.transmit_vs_best(s, k);
    if (bit == -1) {
      best = phases;
    }
    if (observer) {
      observer(s, bit, unit(beam_of(best)));
    }
    if (best_trace) {
      best_trace->push_back(oracle.best(k));
    }
  };

  oracle.reset_best(k);
  if (budget > 0) {
    send(best);
  }
  std::vector<double> trial(m_t);
  for (std::size_t used = 1; used < budget; ++used) {
    for (std::size_t i = 0; i < m_t; ++i) {
      trial[i] = best[i] + jitter(rng);
    }
    send(trial);
  }
  return unit(beam_of(best));
}

Combined combine_estimates(std::span<const CVector> vectors) {
  if (vectors.empty()) {
    throw PreconditionError("no estimates to combine");
  }
  Combined c{HermitianMatrix(vectors.front().size()), {}};
  for (const auto& v : vectors) {
    if (v.size() != c.gbar.dim()) {
      throw DimensionError("estimates of unequal dimension");
    }
    c.gbar += HermitianMatrix::outer(v);
  }
  c.beam = dominant_eigenvector(c.gbar);
  return c;
}

BaselineResult baseline_learn(BaselineKind kind, FeedbackOracle& oracle, double power, std::size_t n_l,
                              const BaselineSettings& settings, std::mt19937_64& rng,
                              const IntervalObserver& observer) {
  const std::size_t m_t = oracle.m_t();
  const std::size_t k_users = oracle.users();
  BaselineResult res;
  CVector initial = kind == BaselineKind::cjt ? CMatrix::identity(m_t).column(0)
                                              : uniform_direction(m_t, 1.0 / std::sqrt(static_cast<double>(m_t)));
  res.directions.assign(k_users, initial);

  std::vector<int> bits(k_users, 0);
  for (const Slot& slot : slot_plan(k_users, n_l)) {
    DirectionObserver hook;
    if (observer) {
      hook = [&](const HermitianMatrix& s, int bit, std::span<const cplx> dir) {
        std::fill(bits.begin(), bits.end(), 0);
        bits[slot.user] = bit;
        res.directions[slot.user].assign(dir.begin(), dir.end());
        std::vector<HermitianMatrix> est;
        for (const auto& v : res.directions) {
          est.push_back(HermitianMatrix::outer(v));
        }
        const Combined c = combine_estimates(res.directions);
        observer(IntervalView{oracle.intervals(), s, bits, est, c.beam});
      };
    }
    switch (kind) {
      case BaselineKind::cjt: {
        const CjtResult r = cjt_learn(oracle, slot.user, settings.cjt, power, slot.count, hook);
        res.directions[slot.user] = r.v.column(0);
        res.partial_cjt += r.partial ? 1 : 0;
        break;
      }
      case BaselineKind::gradient_sign:
        res.directions[slot.user] =
            gradient_sign_learn(oracle, slot.user, settings.gradient_sign, power, slot.count, rng, hook);
        break;
      case BaselineKind::dist_bf:
        res.directions[slot.user] =
            distributed_bf_learn(oracle, slot.user, settings.dist_bf, power, slot.count, rng, hook);
        break;
    }
  }
  for (const auto& v : res.directions) {
    res.estimates.push_back(HermitianMatrix::outer(v));
  }
  res.beam = combine_estimates(res.directions).beam;
  return res;
}

}  // namespace wetsim
