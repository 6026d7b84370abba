// SPDX-License-Identifier: Apache-2.0
//
// Reference one-bit learners run one receiver at a time in consecutive slots:
// cyclic Jacobi rotations (CJT), gradient sign, and distributed beamforming.

#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "wetsim/oracle.hpp"

namespace wetsim {

struct CjtConfig {
  double eta = 0.05;  // line-search accuracy
  int sweeps = 1;

  void validate() const;
};

struct GradientSignConfig {
  double step = 0.05;  // xi

  void validate() const;
};

struct DistBfConfig {
  double chi = 0.1 * 3.14159265358979323846;

  void validate() const;
};

struct Slot {
  std::size_t user;
  std::size_t first;  // 1-based
  std::size_t count;
};

/// K slots of floor(n_l/K) intervals; the remainder goes to the last slot.
std::vector<Slot> slot_plan(std::size_t k_users, std::size_t n_l);

/// Called with the receiver's current unit direction after each interval of
/// its slot, together with that interval's covariance and bit.
using DirectionObserver = std::function<void(const HermitianMatrix& s, int bit, std::span<const cplx> direction)>;

/// Bisection steps per line search for a bracket of the given width.
int cjt_probe_count(double width, double eta);

/// Rotation pairs (l, m), l < m, in sweep order.
std::vector<std::pair<std::size_t, std::size_t>> cjt_pairs(std::size_t m_t);

struct CjtResult {
  CMatrix v;                 // unitary estimate after the last completed sweep
  std::size_t sweeps_done = 0;
  bool partial = false;      // budget ran out before the requested sweeps
  std::size_t intervals_used = 0;
  std::vector<int> line_search_probes;  // bisection probes per line search, completed ones only
};

CjtResult cjt_learn(FeedbackOracle& oracle, std::size_t k, const CjtConfig& cfg, double power, std::size_t budget,
                    const DirectionObserver& observer = {});

struct GradientSignTrace {
  std::vector<double> reference_energy;  // energy of each reference after an update
  std::vector<double> probe_plus;
  std::vector<double> probe_minus;
};

CVector gradient_sign_learn(FeedbackOracle& oracle, std::size_t k, const GradientSignConfig& cfg, double power,
                            std::size_t budget, std::mt19937_64& rng, const DirectionObserver& observer = {},
                            GradientSignTrace* trace = nullptr);

CVector distributed_bf_learn(FeedbackOracle& oracle, std::size_t k, const DistBfConfig& cfg, double power,
                             std::size_t budget, std::mt19937_64& rng, const DirectionObserver& observer = {},
                             std::vector<double>* best_trace = nullptr);

struct Combined {
  HermitianMatrix gbar;  // sum_k v_k v_k^H
  CVector beam;
};

Combined combine_estimates(std::span<const CVector> vectors);

enum class BaselineKind { cjt, gradient_sign, dist_bf };

struct BaselineSettings {
  CjtConfig cjt;
  GradientSignConfig gradient_sign;
  DistBfConfig dist_bf;
};

struct BaselineResult {
  std::vector<CVector> directions;         // unit, per receiver
  std::vector<HermitianMatrix> estimates;  // v v^H per receiver
  CVector beam;
  std::size_t partial_cjt = 0;             // receivers whose CJT run hit the budget early
};

/// Runs `kind` over the slot schedule for all receivers of the oracle.
BaselineResult baseline_learn(BaselineKind kind, FeedbackOracle& oracle, double power, std::size_t n_l,
                              const BaselineSettings& settings, std::mt19937_64& rng,
                              const IntervalObserver& observer = {});

}  // namespace wetsim
