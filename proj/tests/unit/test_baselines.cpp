// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "../support.hpp"
#include "wetsim/baselines.hpp"
#include "wetsim/channel.hpp"
#include "wetsim/errors.hpp"

using namespace wetsim;

namespace {

ChannelRealization single(const HermitianMatrix& g) {
  const HermitianMatrix gs[] = {g * (1.0 / g.frobenius_norm())};
  const double gam[] = {1.0};
  return realization_from_grams(gs, gam);
}

ChannelRealization draw(std::size_t k_users, std::uint64_t seed, double rician_db = 5.0) {
  RicianConfig cfg;
  cfg.k_users = k_users;
  cfg.user_angles_deg = default_user_angles(k_users);
  cfg.rician_factor_db = rician_db;
  std::mt19937_64 rng(seed);
  return gen_channel(cfg, rng);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double abs_inner(std::span<const cplx> a, std::span<const cplx> b) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += std::conj(a[i]) * b[i];
  }
  return std::abs(s);
}

// Every learning covariance is rank one with trace at most P.
void check_rank_one_history(const FeedbackOracle& oracle, double power) {
  for (const auto& s : oracle.history()) {
    CHECK(s.trace() <= power + 1e-12);
    const auto eig = test::eigenvalues_desc(s);
    CHECK(std::abs(eig(1)) <= 1e-12 * std::max(1.0, eig(0)));
  }
}

}  // namespace

TEST_CASE("config validation") {
  CjtConfig c;
  CHECK_NOTHROW(c.validate());
  c.eta = 0.0;
  CHECK_THROWS_AS(c.validate(), PreconditionError);
  c = CjtConfig{};
  c.sweeps = 0;
  CHECK_THROWS_AS(c.validate(), PreconditionError);
  GradientSignConfig g;
  CHECK_NOTHROW(g.validate());
  g.step = -1.0;
  CHECK_THROWS_AS(g.validate(), PreconditionError);
  DistBfConfig d;
  CHECK_NOTHROW(d.validate());
  d.chi = 2.0 * std::numbers::pi;
  CHECK_THROWS_AS(d.validate(), PreconditionError);
}

TEST_CASE("slot plan") {
  const auto s = slot_plan(3, 10);
  REQUIRE(s.size() == 3);
  CHECK(s[0].first == 1);
  CHECK(s[0].count == 3);
  CHECK(s[1].first == 4);
  CHECK(s[1].count == 3);
  CHECK(s[2].first == 7);
  CHECK(s[2].count == 4);
  const auto one = slot_plan(1, 60);
  CHECK(one[0].count == 60);
  CHECK_THROWS_AS(slot_plan(0, 60), PreconditionError);
}

TEST_CASE("CJT rotation pairs cover each index pair once") {
  CHECK(cjt_pairs(4).size() == 6);
  for (std::size_t m = 2; m <= 7; ++m) {
    const auto pairs = cjt_pairs(m);
    CHECK(pairs.size() == m * (m - 1) / 2);
    for (std::size_t l = 0; l < m; ++l) {
      for (std::size_t r = l + 1; r < m; ++r) {
        CHECK(std::count(pairs.begin(), pairs.end(), std::make_pair(l, r)) == 1);
      }
    }
  }
}

TEST_CASE("CJT line-search length follows bisection arithmetic") {
  for (double width : {std::numbers::pi, 2.0 * std::numbers::pi, 1.0}) {
    for (double eta : {0.3, 0.05, 0.01, 0.001}) {
      const int n = cjt_probe_count(width, eta);
      CHECK(width / std::pow(2.0, n) <= eta);
      CHECK(width / std::pow(2.0, n - 1) > eta);
      CHECK(cjt_probe_count(width, eta / 2.0) == n + 1);
    }
  }
}

TEST_CASE("CJT on a diagonal channel keeps the identity basis") {
  const double d[] = {0.9, 0.1};
  const ChannelRealization ch = single(HermitianMatrix::diagonal(d));
  FeedbackOracle oracle(ch);
  CjtConfig cfg;
  cfg.eta = 1e-3;
  const CjtResult r = cjt_learn(oracle, 0, cfg, 1.0, 1000);
  CHECK_FALSE(r.partial);
  CHECK(r.sweeps_done == 1);
  CHECK(std::abs(r.v(0, 0)) >= std::cos(2e-3));
  CHECK(std::abs(r.v(1, 1)) >= std::cos(2e-3));
  REQUIRE(r.line_search_probes.size() == 2);
  CHECK(r.line_search_probes[0] == cjt_probe_count(2.0 * std::numbers::pi, cfg.eta));
  CHECK(r.line_search_probes[1] == cjt_probe_count(std::numbers::pi, cfg.eta));
  check_rank_one_history(oracle, 1.0);
}

TEST_CASE("CJT finds the dominant eigenvector with enough intervals") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const HermitianMatrix g = test::random_with_spectrum({1.0, 0.4, 0.2, 0.1}, rng);
    const ChannelRealization ch = single(g);
    FeedbackOracle oracle(ch);
    CjtConfig cfg;
    cfg.eta = 1e-3;
    cfg.sweeps = 4;
    const CjtResult r = cjt_learn(oracle, 0, cfg, 1.0, 5000);
    CHECK(r.sweeps_done == 4);
    const auto ev = test::to_eigen(r.v);
    CHECK((ev.adjoint() * ev - test::EMat::Identity(4, 4)).norm() < 1e-10);
    const CVector top = dominant_eigenvector(ch.users[0].g);
    CHECK(abs_inner(r.v.column(0), top) >= 0.99);
  }
}

TEST_CASE("CJT reports partial progress when the budget runs out") {
  const ChannelRealization ch = draw(1, 42);
  FeedbackOracle oracle(ch);
  const CjtResult r = cjt_learn(oracle, 0, CjtConfig{}, 1.0, 60);
  CHECK(r.partial);
  CHECK(r.sweeps_done == 0);
  CHECK(r.intervals_used == 60);
  CHECK(r.v == CMatrix::identity(4));
}

TEST_CASE("gradient sign with a zero step never moves") {
  const ChannelRealization ch = draw(1, 43);
  FeedbackOracle oracle(ch);
  std::mt19937_64 rng(43);
  GradientSignConfig cfg;
  cfg.step = 0.0;
  const CVector v = gradient_sign_learn(oracle, 0, cfg, 1.0, 40, rng);
  for (const cplx& z : v) {
    CHECK(std::abs(z - cplx(0.5)) < 1e-15);
  }
}

TEST_CASE("gradient sign keeps the better probe of each pair") {
  const ChannelRealization ch = draw(1, 44);
  FeedbackOracle oracle(ch);
  std::mt19937_64 rng(44);
  GradientSignTrace trace;
  std::size_t calls = 0;
  const CVector v = gradient_sign_learn(oracle, 0, GradientSignConfig{}, 2.0, 41, rng,
                                        [&](const HermitianMatrix&, int, std::span<const cplx>) { ++calls; }, &trace);
  CHECK(calls == 41);
  CHECK(oracle.intervals() == 41);
  REQUIRE(trace.reference_energy.size() == 20);
  for (std::size_t a = 0; a < 20; ++a) {
    CHECK(trace.reference_energy[a] == doctest::Approx(std::max(trace.probe_plus[a], trace.probe_minus[a])));
  }
  CHECK(norm(std::span<const cplx>(v)) == doctest::Approx(1.0));
  check_rank_one_history(oracle, 2.0);
  // Probes carry the full power.
  CHECK(oracle.history().front().trace() == doctest::Approx(2.0));
}

TEST_CASE("gradient sign aligns with a rank-one channel") {
  std::vector<double> overlaps;
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    std::mt19937_64 rng(500 + trial);
    CVector v(4);
    std::normal_distribution<double> g(0.0, 1.0);
    for (auto& z : v) {
      z = cplx(g(rng), g(rng));
    }
    const double n = norm(std::span<const cplx>(v));
    for (auto& z : v) {
      z /= n;
    }
    const ChannelRealization ch = single(HermitianMatrix::outer(v));
    FeedbackOracle oracle(ch);
    const CVector est = gradient_sign_learn(oracle, 0, GradientSignConfig{}, 1.0, 400, rng);
    overlaps.push_back(abs_inner(est, v));
  }
  MESSAGE("gradient sign median overlap: " << median(overlaps));
  CHECK(median(overlaps) >= 0.9);
}

TEST_CASE("distributed beamforming with no jitter stays put") {
  const ChannelRealization ch = draw(1, 45);
  FeedbackOracle oracle(ch);
  std::mt19937_64 rng(45);
  DistBfConfig cfg;
  cfg.chi = 1e-14;
  const CVector v = distributed_bf_learn(oracle, 0, cfg, 1.0, 50, rng);
  for (const cplx& z : v) {
    CHECK(std::abs(z - cplx(0.5)) < 1e-12);
  }
}

TEST_CASE("distributed beamforming best record only improves") {
  const ChannelRealization ch = draw(1, 46);
  FeedbackOracle oracle(ch);
  std::mt19937_64 rng(46);
  std::vector<double> best;
  std::vector<int> bits;
  distributed_bf_learn(
      oracle, 0, DistBfConfig{}, 1.0, 200, rng,
      [&](const HermitianMatrix&, int bit, std::span<const cplx>) { bits.push_back(bit); }, &best);
  REQUIRE(best.size() == 200);
  for (std::size_t i = 1; i < best.size(); ++i) {
    CHECK(best[i] >= best[i - 1]);
    if (bits[i] == -1) {
      CHECK(best[i] > best[i - 1]);
    } else {
      CHECK(best[i] == best[i - 1]);
    }
  }
  check_rank_one_history(oracle, 1.0);
}

TEST_CASE("distributed beamforming on line-of-sight channels") {
  std::vector<double> ratios;
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    const ChannelRealization ch = draw(1, 600 + trial, 60.0);
    FeedbackOracle oracle(ch);
    std::mt19937_64 rng(trial);
    const CVector v = distributed_bf_learn(oracle, 0, DistBfConfig{}, 1.0, 400, rng);
    ratios.push_back(ch.users[0].g.quadratic_form(v) / test::max_eig(ch.users[0].g));
  }
  MESSAGE("distributed beamforming median ratio: " << median(ratios));
  CHECK(median(ratios) >= 0.9);
}

TEST_CASE("combining estimates") {
  CVector v(3);
  v[0] = cplx(0.6, 0.0);
  v[2] = cplx(0.0, 0.8);
  const CVector one[] = {v};
  const Combined c1 = combine_estimates(one);
  CHECK(abs_inner(c1.beam, v) == doctest::Approx(1.0));

  CVector e1(2);
  CVector e2(2);
  e1[0] = 1.0;
  e2[1] = 1.0;
  const CVector two[] = {e1, e2};
  const Combined a = combine_estimates(two);
  const Combined b = combine_estimates(two);
  CHECK(a.gbar == HermitianMatrix::identity(2));
  CHECK(a.beam == b.beam);

  std::mt19937_64 rng(47);
  std::vector<CVector> six;
  for (int k = 0; k < 6; ++k) {
    CVector w = test::random_complex(4, 1, rng).column(0);
    const double n = norm(std::span<const cplx>(w));
    for (auto& z : w) {
      z /= n;
    }
    six.push_back(w);
  }
  const Combined c6 = combine_estimates(six);
  double captured = 0.0;
  for (const auto& w : six) {
    captured += std::norm(abs_inner(w, c6.beam));
  }
  CHECK(captured == doctest::Approx(test::max_eig(c6.gbar)).epsilon(1e-10));

  CHECK_THROWS_AS(combine_estimates(std::span<const CVector>{}), PreconditionError);
}

TEST_CASE("baseline schedule over several receivers") {
  for (auto kind : {BaselineKind::cjt, BaselineKind::gradient_sign, BaselineKind::dist_bf}) {
    const ChannelRealization ch = draw(3, 48);
    FeedbackOracle oracle(ch);
    std::mt19937_64 rng(48);
    std::size_t views = 0;
    const BaselineResult r = baseline_learn(kind, oracle, 1.0, 31, BaselineSettings{}, rng, [&](const IntervalView& v) {
      ++views;
      CHECK(v.interval == views);
      std::size_t active = 0;
      for (int bit : v.bits) {
        active += bit != 0 ? 1 : 0;
      }
      CHECK(active == 1);
      // The slot owner is the receiver that sent the bit.
      const std::size_t owner = views <= 10 ? 0 : views <= 20 ? 1 : 2;
      CHECK(v.bits[owner] != 0);
    });
    CHECK(views == 31);
    CHECK(oracle.intervals() == 31);
    REQUIRE(r.directions.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(norm(std::span<const cplx>(r.directions[k])) == doctest::Approx(1.0));
      CHECK((r.estimates[k] - HermitianMatrix::outer(r.directions[k])).frobenius_norm() < 1e-15);
    }
    check_rank_one_history(oracle, 1.0);
    if (kind == BaselineKind::cjt) {
      CHECK(r.partial_cjt == 3);
    }
  }
}
