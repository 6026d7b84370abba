// SPDX-License-Identifier: Apache-2.0

#include "wetsim/accpm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wetsim/errors.hpp"

namespace wetsim {

void AccpmSettings::validate() const {
  if (!(probe_norm_ratio > 0.0)) {
    throw PreconditionError("accpm.probe_norm_ratio must be positive");
  }
  if (max_trials < 1) {
    throw PreconditionError("accpm.max_trials must be positive");
  }
  if (max_halvings < 0) {
    throw PreconditionError("accpm.max_halvings must be nonnegative");
  }
  newton.validate();
}

std::size_t GroupPlan::subset_of(std::size_t n) const {
  for (std::size_t a = 0; a < subsets; ++a) {
    if (n >= interval_begin[a] && n <= interval_end[a]) {
      return a;
    }
  }
  throw PreconditionError("interval " + std::to_string(n) + " is outside the learning phase");
}

GroupPlan plan_groups(std::size_t k_users, std::size_t m_t, std::size_t n_l) {
  if (k_users < 1 || m_t < 2) {
    throw PreconditionError("grouping needs at least one receiver and two transmit antennas");
  }
  const std::size_t cap = m_t * m_t - 1;
  const std::size_t a_count = (k_users + cap - 1) / cap;
  if (n_l < a_count) {
    throw ScheduleError("learning budget of " + std::to_string(n_l) + " intervals is smaller than the " +
                        std::to_string(a_count) + " user subsets");
  }
  GroupPlan plan;
  plan.subsets = a_count;
  const std::size_t per_subset = (k_users + a_count - 1) / a_count;
  for (std::size_t a = 0; a < a_count; ++a) {
    std::vector<std::size_t> users;
    const std::size_t last = a + 1 == a_count ? k_users : std::min(k_users, (a + 1) * per_subset);
    for (std::size_t k = a * per_subset; k < last; ++k) {
      users.push_back(k);
    }
    plan.user_subsets.push_back(std::move(users));
  }
  // Blocks of ceil(n_l/A) with the remainder in the last block; if that would
  // leave a trailing block empty, use floor-sized blocks instead.
  std::size_t block = (n_l + a_count - 1) / a_count;
  if ((a_count - 1) * block >= n_l) {
    block = n_l / a_count;
  }
  for (std::size_t a = 0; a < a_count; ++a) {
    plan.interval_begin.push_back(a * block + 1);
    plan.interval_end.push_back(a + 1 == a_count ? n_l : (a + 1) * block);
  }
  return plan;
}

HermitianMatrix init_covariance(std::size_t m_t, double power) {
  if (m_t < 2 || !(power > 0.0)) {
    throw PreconditionError("initial covariance needs m_t >= 2 and positive power");
  }
  return HermitianMatrix::identity(m_t, power / static_cast<double>(m_t));
}

RMatrix probing_basis(std::span<const HermitianMatrix> centers) {
  if (centers.empty()) {
    throw PreconditionError("probing needs at least one center");
  }
  const std::size_t m = centers.front().dim();
  if (centers.size() > m * m - 1) {
    throw CapacityError(std::to_string(centers.size()) + " receivers exceed the " + std::to_string(m * m - 1) +
                        " simultaneous neutral cuts available with " + std::to_string(m) + " antennas");
  }
  std::vector<RVector> vecs;
  vecs.reserve(centers.size());
  for (const auto& c : centers) {
    if (c.dim() != m) {
      throw DimensionError("centers of unequal dimension");
    }
    if (!(c.frobenius_norm() > 0.0)) {
      throw PreconditionError("probing center must be nonzero");
    }
    vecs.push_back(cvec(c));
  }
  return orthonormal_complement_basis(orthonormalize(vecs));
}

HermitianMatrix draw_probe(const RMatrix& basis, double radius, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  RVector p(basis.cols());
  for (auto& x : p) {
    x = gauss(rng);
  }
  const double n = norm(p);
  for (auto& x : p) {
    x *= n > 0.0 ? radius / n : 0.0;
  }
  return cmat(basis * p);
}

HermitianMatrix probing_matrix_single(const HermitianMatrix& center, double power, std::mt19937_64& rng,
                                      double norm_ratio) {
  return probing_matrix_multi(std::span<const HermitianMatrix>(&center, 1), power, rng, norm_ratio);
}

HermitianMatrix probing_matrix_multi(std::span<const HermitianMatrix> centers, double power, std::mt19937_64& rng,
                                     double norm_ratio) {
  return draw_probe(probing_basis(centers), norm_ratio * power, rng);
}

HermitianMatrix advance_covariance(const HermitianMatrix& s_prev, const RMatrix& basis, double radius, double power,
                                   std::mt19937_64& rng, int max_trials) {
  for (int trial = 0; trial < max_trials; ++trial) {
    HermitianMatrix s = s_prev + draw_probe(basis, radius, rng);
    if (s.trace() <= power * (1.0 + 1e-12) && herm_eig(s).values.back() >= 0.0) {
      return s;
    }
  }
  throw ResamplingError("no feasible covariance after " + std::to_string(max_trials) + " probe draws");
}

LearnerState::LearnerState(std::size_t m_t, std::size_t k_users, double power)
    : m_t_(m_t),
      power_(power),
      s_(m_t),
      problems_(k_users, BarrierProblem{m_t, {}}),
      centers_(k_users, HermitianMatrix::identity(m_t, 0.5)),
      recenters_(k_users, 0) {
  if (m_t < 2 || k_users < 1 || !(power > 0.0)) {
    throw PreconditionError("learner needs m_t >= 2, at least one receiver and positive power");
  }
}

void LearnerState::set_covariance(HermitianMatrix s) {
  if (s.dim() != m_t_) {
    throw DimensionError("covariance dimension does not match the learner");
  }
  s_ = std::move(s);
  ++interval_;
}

void record_cut_and_recenter(LearnerState& state, std::size_t k, int f, const HermitianMatrix& delta_s,
                             const NewtonSettings& settings) {
  if (state.interval_ < 2) {
    return;
  }
  BarrierProblem& problem = state.problems_.at(k);
  problem.cuts.push_back(CutRecord{delta_s, f, state.interval_});
  const HermitianMatrix warm = strictly_feasible_start(problem, state.centers_[k], problem.cuts.back(), settings);
  state.centers_[k] = analytic_center(problem, warm, settings);
  ++state.recenters_[k];
}

HermitianMatrix finalize_estimate(const LearnerState& state, std::size_t k) {
  const HermitianMatrix& c = state.center(k);
  const double n = c.frobenius_norm();
  if (!(n > 0.0)) {
    throw Error("analytic center has zero norm");
  }
  return (1.0 / n) * c;
}

namespace {

void notify(const IntervalObserver& observer, const LearnerState& state, const std::vector<int>& bits) {
  if (!observer) {
    return;
  }
  std::vector<HermitianMatrix> estimates;
  HermitianMatrix combined(state.m_t());
  for (std::size_t k = 0; k < state.users(); ++k) {
    estimates.push_back(finalize_estimate(state, k));
    combined += estimates.back();
  }
  const CVector beam = dominant_eigenvector(combined);
  observer(IntervalView{state.interval(), state.covariance(), bits, estimates, beam});
}

}  // namespace

AccpmResult accpm_learn(FeedbackOracle& oracle, double power, std::size_t n_l, const AccpmSettings& settings,
                        std::mt19937_64& rng, const IntervalObserver& observer) {
  settings.validate();
  const std::size_t m = oracle.m_t();
  const std::size_t k_users = oracle.users();
  const GroupPlan plan = plan_groups(k_users, m, n_l);
  LearnerState state(m, k_users, power);
  AccpmResult result;

  std::vector<int> bits(k_users, 0);
  state.set_covariance(init_covariance(m, power));
  {
    const auto& group = plan.user_subsets[plan.subset_of(1)];
    const auto fb = oracle.transmit(state.covariance(), group);
    for (std::size_t i = 0; i < group.size(); ++i) {
      bits[group[i]] = fb[i];
    }
  }
  notify(observer, state, bits);

  std::vector<HermitianMatrix> centers;
  for (std::size_t n = 2; n <= n_l; ++n) {
    const auto& group = plan.user_subsets[plan.subset_of(n)];
    centers.clear();
    for (std::size_t k : group) {
      centers.push_back(state.center(k));
    }
    const RMatrix basis = probing_basis(centers);

    double radius = settings.probe_norm_ratio * power;
    HermitianMatrix next;
    for (int h = 0;; ++h) {
      try {
        next = advance_covariance(state.covariance(), basis, radius, power, rng, settings.max_trials);
        break;
      } catch (const ResamplingError&) {
        if (h >= settings.max_halvings) {
          throw;
        }
        radius *= 0.5;
        ++result.probe_halvings;
      }
    }
    const HermitianMatrix delta = next - state.covariance();
    state.set_covariance(std::move(next));

    const auto fb = oracle.transmit(state.covariance(), group);
    std::fill(bits.begin(), bits.end(), 0);
    for (std::size_t i = 0; i < group.size(); ++i) {
      bits[group[i]] = fb[i];
      record_cut_and_recenter(state, group[i], fb[i], delta, settings.newton);
    }
    notify(observer, state, bits);
  }

  result.combined = HermitianMatrix(m);
  for (std::size_t k = 0; k < k_users; ++k) {
    result.estimates.push_back(finalize_estimate(state, k));
    result.combined += result.estimates.back();
  }
  result.beam = dominant_eigenvector(result.combined);
  return result;
}

}  // namespace wetsim
