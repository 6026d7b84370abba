// SPDX-License-Identifier: Apache-2.0
//
// Channel learning with one-bit feedback by analytic-center cutting planes.
// Each receiver keeps a working set of normalized channel matrices consistent
// with its feedback; the transmitter probes along directions trace-orthogonal
// to the current centers so every new cut passes through them.

#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "wetsim/barrier.hpp"
#include "wetsim/oracle.hpp"

namespace wetsim {

struct AccpmSettings {
  double probe_norm_ratio = 0.1;  // ||p|| = ratio * P
  int max_trials = 50;
  int max_halvings = 6;
  NewtonSettings newton;

  void validate() const;
};

struct GroupPlan {
  std::size_t subsets = 0;                            // A
  std::vector<std::vector<std::size_t>> user_subsets;  // 0-based receivers
  std::vector<std::size_t> interval_begin;            // 1-based, per subset
  std::vector<std::size_t> interval_end;              // inclusive

  /// Subset serving 1-based interval n.
  std::size_t subset_of(std::size_t n) const;
};

GroupPlan plan_groups(std::size_t k_users, std::size_t m_t, std::size_t n_l);

HermitianMatrix init_covariance(std::size_t m_t, double power);

/// Orthonormal basis (columns) of the subspace of R^{m^2} orthogonal to
/// cvec of every center. Dependent centers are collapsed first.
RMatrix probing_basis(std::span<const HermitianMatrix> centers);

/// cmat(V p) with p uniform on the sphere of the given radius.
HermitianMatrix draw_probe(const RMatrix& basis, double radius, std::mt19937_64& rng);

HermitianMatrix probing_matrix_single(const HermitianMatrix& center, double power, std::mt19937_64& rng,
                                      double norm_ratio = 0.1);

/// Throws CapacityError when more than m^2 - 1 centers are given.
HermitianMatrix probing_matrix_multi(std::span<const HermitianMatrix> centers, double power, std::mt19937_64& rng,
                                     double norm_ratio = 0.1);

/// s_prev + B for the first drawn B keeping the sum PSD with trace <= power.
/// Throws ResamplingError after max_trials draws.
HermitianMatrix advance_covariance(const HermitianMatrix& s_prev, const RMatrix& basis, double radius, double power,
                                   std::mt19937_64& rng, int max_trials);

class LearnerState {
 public:
  LearnerState(std::size_t m_t, std::size_t k_users, double power);

  std::size_t m_t() const noexcept { return m_t_; }
  std::size_t users() const noexcept { return problems_.size(); }
  double power() const noexcept { return power_; }
  std::size_t interval() const noexcept { return interval_; }

  const HermitianMatrix& covariance() const noexcept { return s_; }
  const HermitianMatrix& center(std::size_t k) const { return centers_.at(k); }
  const BarrierProblem& problem(std::size_t k) const { return problems_.at(k); }
  std::size_t recenters(std::size_t k) const { return recenters_.at(k); }

  /// Advances the interval counter and makes `s` the current covariance.
  void set_covariance(HermitianMatrix s);

 private:
  friend void record_cut_and_recenter(LearnerState&, std::size_t, int, const HermitianMatrix&,
                                      const NewtonSettings&);

  std::size_t m_t_;
  double power_;
  std::size_t interval_ = 0;
  HermitianMatrix s_;
  std::vector<BarrierProblem> problems_;
  std::vector<HermitianMatrix> centers_;
  std::vector<std::size_t> recenters_;
};

/// Appends the cut (delta_s, f) to receiver k and recenters from a warm start
/// pushed off the new hyperplane. No-op before the second interval.
void record_cut_and_recenter(LearnerState& state, std::size_t k, int f, const HermitianMatrix& delta_s,
                             const NewtonSettings& settings);

/// center_k / ||center_k||_F.
HermitianMatrix finalize_estimate(const LearnerState& state, std::size_t k);

struct AccpmResult {
  std::vector<HermitianMatrix> estimates;  // unit Frobenius norm, per receiver
  HermitianMatrix combined;                // sum of estimates
  CVector beam;                            // dominant eigenvector of `combined`
  std::size_t probe_halvings = 0;
};

/// Runs the learning phase for n_l intervals against `oracle`.
AccpmResult accpm_learn(FeedbackOracle& oracle, double power, std::size_t n_l, const AccpmSettings& settings,
                        std::mt19937_64& rng, const IntervalObserver& observer = {});

}  // namespace wetsim
