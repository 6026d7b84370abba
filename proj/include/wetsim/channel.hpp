// SPDX-License-Identifier: Apache-2.0
//
// Rician MIMO channel draws, harvested-energy bookkeeping and the optimal
// energy beamformer for a known channel.

#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "wetsim/hermitian.hpp"

namespace wetsim {

/// Angles -75 + 30(k-1) degrees for k = 1..k_users.
std::vector<double> default_user_angles(std::size_t k_users);

struct RicianConfig {
  std::size_t m_t = 4;
  std::size_t m_r = 2;
  std::size_t k_users = 1;
  double rician_factor_db = 5.0;
  double pathloss_db = 40.0;
  double spacing_ratio = 0.5;  // antenna spacing over wavelength
  std::vector<double> user_angles_deg = default_user_angles(1);
  double efficiency = 0.5;
  double power_watts = 1.0;

  /// Throws PreconditionError naming the offending field.
  void validate() const;
};

struct UserChannel {
  CMatrix raw;           // m_r x m_t
  HermitianMatrix gram;  // raw^H raw
  double gamma = 0.0;    // ||gram||_F
  HermitianMatrix g;     // gram / gamma
};

struct ChannelRealization {
  std::size_t m_t = 0;
  std::vector<UserChannel> users;
};

/// amplitude * [1, e^{j theta}, ..., e^{j (m_t-1) theta}], theta = -2 pi spacing sin(angle).
CVector los_row(double angle_deg, std::size_t m_t, double spacing_ratio, double amplitude = 1e-2);

/// NLOS entries are CSCG with variance 10^(-pathloss/10); the LOS rows have
/// amplitude 10^(-pathloss/20), so both match the 40 dB preset.
ChannelRealization gen_channel(const RicianConfig& cfg, std::mt19937_64& rng);

/// Builds a realization directly from normalized Gram matrices and gains
/// (tests and synthetic scenarios). `raw` is left empty.
ChannelRealization realization_from_grams(std::span<const HermitianMatrix> g, std::span<const double> gammas);

/// efficiency * duration * gamma * tr(G S). S must be PSD to -1e-9.
double harvested_energy(const HermitianMatrix& g, double gamma, const HermitianMatrix& s, double duration,
                        double efficiency);

/// alpha_k = (1/gamma_k) / sum_l (1/gamma_l).
std::vector<double> energy_weights(std::span<const double> gammas);

struct Composite {
  HermitianMatrix g;  // sum_k G_k
  double gamma = 0.0; // 1 / sum_k (1/gamma_k)
};

Composite composite_channel(const ChannelRealization& r);

struct OebSolution {
  HermitianMatrix s_star;
  CVector beam;   // unit dominant eigenvector
  double lambda;  // dominant eigenvalue
  double q_rate;  // power * lambda
};

OebSolution oeb(const HermitianMatrix& g, double power);

}  // namespace wetsim
