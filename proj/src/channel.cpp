// SPDX-License-Identifier: Apache-2.0

#include "wetsim/channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "wetsim/errors.hpp"

namespace wetsim {

std::vector<double> default_user_angles(std::size_t k_users) {
  std::vector<double> a(k_users);
  for (std::size_t k = 0; k < k_users; ++k) {
    a[k] = -75.0 + 30.0 * static_cast<double>(k);
  }
  return a;
}

void RicianConfig::validate() const {
  if (m_t < 2) {
    throw PreconditionError("scenario.m_t must be at least 2");
  }
  if (m_r < 1) {
    throw PreconditionError("scenario.m_r must be at least 1");
  }
  if (k_users < 1) {
    throw PreconditionError("scenario.k_users must be at least 1");
  }
  if (user_angles_deg.size() != k_users) {
    throw PreconditionError("scenario.user_angles_deg has " + std::to_string(user_angles_deg.size()) +
                            " entries, expected " + std::to_string(k_users));
  }
  if (!(efficiency > 0.0 && efficiency <= 1.0)) {
    throw PreconditionError("scenario.efficiency must lie in (0, 1]");
  }
  if (!(power_watts > 0.0) || !std::isfinite(power_watts)) {
    throw PreconditionError("scenario power must be positive");
  }
  if (!std::isfinite(rician_factor_db) || !std::isfinite(pathloss_db) || !std::isfinite(spacing_ratio)) {
    throw PreconditionError("scenario values must be finite");
  }
}

CVector los_row(double angle_deg, std::size_t m_t, double spacing_ratio, double amplitude) {
  const double theta = -2.0 * std::numbers::pi * spacing_ratio * std::sin(angle_deg * std::numbers::pi / 180.0);
  CVector row(m_t);
  for (std::size_t i = 0; i < m_t; ++i) {
    row[i] = std::polar(amplitude, theta * static_cast<double>(i));
  }
  return row;
}

namespace {

UserChannel finish_user(CMatrix raw) {
  UserChannel u;
  u.gram = HermitianMatrix::from(raw.adjoint() * raw);
  u.gamma = u.gram.frobenius_norm();
  u.g = (1.0 / u.gamma) * u.gram;
  u.raw = std::move(raw);
  return u;
}

}  // namespace

ChannelRealization gen_channel(const RicianConfig& cfg, std::mt19937_64& rng) {
  cfg.validate();
  const double kr = std::pow(10.0, cfg.rician_factor_db / 10.0);
  const double w_los = std::sqrt(kr / (1.0 + kr));
  const double w_nlos = std::sqrt(1.0 / (1.0 + kr));
  const double variance = std::pow(10.0, -cfg.pathloss_db / 10.0);
  const double amplitude = std::pow(10.0, -cfg.pathloss_db / 20.0);
  std::normal_distribution<double> gauss(0.0, std::sqrt(variance / 2.0));

  ChannelRealization r;
  r.m_t = cfg.m_t;
  for (std::size_t k = 0; k < cfg.k_users; ++k) {
    const CVector los = los_row(cfg.user_angles_deg[k], cfg.m_t, cfg.spacing_ratio, amplitude);
    CMatrix raw(cfg.m_r, cfg.m_t);
    for (std::size_t i = 0; i < cfg.m_r; ++i) {
      for (std::size_t j = 0; j < cfg.m_t; ++j) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        raw(i, j) = w_los * los[j] + w_nlos * cplx(re, im);
      }
    }
    r.users.push_back(finish_user(std::move(raw)));
  }
  return r;
}

ChannelRealization realization_from_grams(std::span<const HermitianMatrix> g, std::span<const double> gammas) {
  if (g.empty() || g.size() != gammas.size()) {
    throw DimensionError("need one gain per Gram matrix");
  }
  ChannelRealization r;
  r.m_t = g.front().dim();
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g[k].dim() != r.m_t) {
      throw DimensionError("Gram matrices of unequal dimension");
    }
    if (!(gammas[k] > 0.0)) {
      throw DomainError("channel gain must be positive");
    }
    UserChannel u;
    const double n = g[k].frobenius_norm();
    u.g = (1.0 / n) * g[k];
    u.gamma = gammas[k];
    u.gram = gammas[k] * u.g;
    r.users.push_back(std::move(u));
  }
  return r;
}

double harvested_energy(const HermitianMatrix& g, double gamma, const HermitianMatrix& s, double duration,
                        double efficiency) {
  if (!(duration > 0.0)) {
    throw PreconditionError("interval duration must be positive");
  }
  if (herm_eig(s).values.back() < -1e-9) {
    throw PreconditionError("transmit covariance is not positive semidefinite");
  }
  return efficiency * duration * gamma * trace_product(g, s);
}

std::vector<double> energy_weights(std::span<const double> gammas) {
  double total = 0.0;
  for (double g : gammas) {
    if (!(g > 0.0)) {
      throw DomainError("channel gains must be positive");
    }
    total += 1.0 / g;
  }
  std::vector<double> w;
  w.reserve(gammas.size());
  for (double g : gammas) {
    w.push_back((1.0 / g) / total);
  }
  return w;
}

Composite composite_channel(const ChannelRealization& r) {
  Composite c{HermitianMatrix(r.m_t), 0.0};
  double inv = 0.0;
  for (const auto& u : r.users) {
    c.g += u.g;
    inv += 1.0 / u.gamma;
  }
  c.gamma = 1.0 / inv;
  return c;
}

OebSolution oeb(const HermitianMatrix& g, double power) {
  const HermEig e = herm_eig(g);
  OebSolution s;
  s.beam = e.vectors.column(0);
  s.lambda = e.values[0];
  s.s_star = HermitianMatrix::outer(s.beam, power);
  s.q_rate = power * s.lambda;
  return s;
}

}  // namespace wetsim
