// SPDX-License-Identifier: Apache-2.0
//
// Acceptance gate: runs every criterion at its stated tolerance and prints one
// PASS/FAIL line per criterion. Exit status is nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "wetsim/accpm.hpp"
#include "wetsim/barrier.hpp"
#include "wetsim/simulator.hpp"

#ifndef WETSIM_CLI_PATH
#error "WETSIM_CLI_PATH must name the wet-sim executable"
#endif

using namespace wetsim;
using test::EMat;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failures without stopping at the first one.
class Check {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (failures_ < 5) {
        notes_ += (notes_.empty() ? "" : "; ") + what;
      }
      ++failures_;
    }
  }
  void note(const std::string& s) { info_ += (info_.empty() ? "" : ", ") + s; }
  Outcome outcome() const {
    Outcome o;
    o.pass = failures_ == 0;
    o.detail = info_;
    if (failures_ > 0) {
      o.detail += (o.detail.empty() ? "" : " | ") + std::to_string(failures_) + " failure(s): " + notes_;
    }
    return o;
  }

 private:
  std::size_t failures_ = 0;
  std::string notes_;
  std::string info_;
};

std::string fmt(double v, const char* spec = "%.4g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

ExperimentConfig scenario(std::size_t k_users, std::size_t n_learn, std::size_t trials, Algorithm a) {
  ExperimentConfig cfg;
  cfg.scenario.k_users = k_users;
  cfg.scenario.user_angles_deg = default_user_angles(k_users);
  cfg.schedule.n_learn = n_learn;
  cfg.schedule.algorithm = a;
  cfg.trials = trials;
  cfg.base_seed = 1;
  cfg.validate();
  return cfg;
}

std::vector<double> trial_power_ratios(const MonteCarloResult& r) {
  std::vector<double> v;
  for (const auto& t : r.trials) {
    v.push_back(t.power_ratio);
  }
  return v;
}

// ---------------------------------------------------------------------------

Outcome algebra_exactness() {
  Check c;
  std::mt19937_64 rng(1001);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t m = 2 + static_cast<std::size_t>(i % 5);
    const HermitianMatrix x = test::random_hermitian(m, rng);
    const HermitianMatrix y = test::random_hermitian(m, rng);
    const RVector vx = cvec(x);
    const RVector vy = cvec(y);
    const double back = (cmat(vx) - x).frobenius_norm() / x.frobenius_norm();
    double dot = 0.0;
    for (std::size_t j = 0; j < vx.size(); ++j) {
      dot += vx[j] * vy[j];
    }
    const double tr = test::trace_of_product(test::to_eigen(x), test::to_eigen(y)).real();
    const double rel = std::abs(dot - tr) / (x.frobenius_norm() * y.frobenius_norm());
    worst = std::max({worst, back, rel});
    c.require(back <= 1e-12, "round trip m=" + std::to_string(m));
    c.require(rel <= 1e-12, "trace identity m=" + std::to_string(m));
  }
  c.note("worst relative error " + fmt(worst));
  return c.outcome();
}

Outcome realification_suite() {
  Check c;
  std::mt19937_64 rng(1002);
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const std::size_t m = 1 + static_cast<std::size_t>(i % 5);
    const CMatrix a = test::random_complex(m, m, rng);
    const CMatrix b = test::random_complex(m, m, rng);
    const EMat ea = test::to_eigen(a);
    const EMat eb = test::to_eigen(b);
    const Eigen::MatrixXd ra = test::to_eigen(realify(a));
    const Eigen::MatrixXd rb = test::to_eigen(realify(b));

    const double det2 = std::norm(ea.determinant());
    const double e_det = std::abs(ra.determinant() - det2) / std::max(det2, 1e-300);
    const std::complex<double> tr = (ea * eb).trace();
    const double e_tr = std::abs((ra * rb).trace() - 2.0 * tr.real()) / std::max(std::abs(tr), 1.0);
    const double e_norm = std::abs(ra.norm() - std::sqrt(2.0) * ea.norm()) / (std::sqrt(2.0) * ea.norm());
    worst = std::max({worst, e_det, e_tr, e_norm});
    c.require(e_det <= 1e-10, "determinant modulus m=" + std::to_string(m));
    c.require(e_tr <= 1e-10, "trace m=" + std::to_string(m));
    c.require(e_norm <= 1e-10, "norm m=" + std::to_string(m));

    // Order: A - B is PSD exactly when the realified difference is. Half
    // the pairs are built ordered, half generally not.
    const HermitianMatrix hb = HermitianMatrix::from(b);
    std::vector<double> spec(m);
    std::uniform_real_distribution<double> u(i % 2 == 0 ? 0.05 : -1.0, 1.0);
    for (auto& s : spec) {
      s = u(rng);
    }
    const HermitianMatrix ha = hb + test::random_with_spectrum(spec, rng);
    Eigen::SelfAdjointEigenSolver<EMat> ce(test::to_eigen(ha - hb));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> re(
        test::to_eigen(realify(ha.to_matrix())) - test::to_eigen(realify(hb.to_matrix())));
    const double tol = 1e-10 * std::max(1.0, (ha - hb).frobenius_norm());
    const bool complex_psd = ce.eigenvalues().minCoeff() >= -tol;
    const bool real_psd = re.eigenvalues().minCoeff() >= -tol;
    c.require(complex_psd == real_psd, "order equivalence m=" + std::to_string(m));
    c.require(std::abs(ce.eigenvalues().minCoeff() - re.eigenvalues().minCoeff()) <= tol,
              "order spectra m=" + std::to_string(m));
  }
  c.note("worst relative error " + fmt(worst));
  return c.outcome();
}

// Independent reference for the analytic center: fixed-step projected
// gradient descent in matrix space, kept inside the open set by halving.
bool ref_feasible(const BarrierProblem& p, const EMat& g) {
  Eigen::SelfAdjointEigenSolver<EMat> es(g);
  if (es.eigenvalues().minCoeff() <= 0.0 || es.eigenvalues().maxCoeff() >= 1.0) {
    return false;
  }
  for (const auto& cut : p.cuts) {
    if (-cut.sign * (g * test::to_eigen(cut.delta_s)).trace().real() <= 0.0) {
      return false;
    }
  }
  return true;
}

EMat ref_gradient(const BarrierProblem& p, const EMat& g) {
  const EMat id = EMat::Identity(g.rows(), g.cols());
  EMat grad = -2.0 * g.inverse() + 2.0 * (id - g).inverse();
  for (const auto& cut : p.cuts) {
    const EMat ds = test::to_eigen(cut.delta_s);
    grad += (cut.sign / (-cut.sign * (g * ds).trace().real())) * ds;
  }
  return 0.5 * (grad + grad.adjoint());
}

EMat pgd_center(const BarrierProblem& p, EMat g) {
  const double step = 1e-4;
  for (int it = 0; it < 4000000; ++it) {
    const EMat d = ref_gradient(p, g);
    double h = step;
    EMat next = g - h * d;
    while (!ref_feasible(p, next)) {
      h *= 0.5;
      next = g - h * d;
    }
    const double moved = (next - g).norm();
    g = next;
    if (moved < 1e-13) {
      break;
    }
  }
  return g;
}

Outcome analytic_center_correctness() {
  Check c;
  double worst_grad = 0.0;
  for (std::size_t m : {2, 3, 4}) {
    const CenterSolution s = solve_analytic_center(BarrierProblem{m, {}}, std::nullopt);
    const double dist = (s.center - HermitianMatrix::identity(m, 0.5)).frobenius_norm();
    c.require(dist <= 1e-8, "zero-cut center m=" + std::to_string(m) + " off by " + fmt(dist));
    worst_grad = std::max(worst_grad, s.grad_norm);
  }
  std::mt19937_64 rng(1003);
  double worst_gap = 0.0;
  for (int i = 0; i < 20; ++i) {
    const HermitianMatrix truth = test::random_with_spectrum({0.3 + 0.6 * (i % 3) / 2.0, 0.15}, rng);
    BarrierProblem p{2, {}};
    for (std::size_t j = 0; j < 3; ++j) {
      const HermitianMatrix ds = test::random_hermitian(2, rng);
      p.cuts.push_back({ds, trace_product(truth, ds) > 0 ? -1 : 1, j + 2});
    }
    const CenterSolution s = solve_analytic_center(p, truth);
    worst_grad = std::max(worst_grad, norm(potential_gradient(p, s.center)));
    const double gap = (test::to_eigen(s.center) - pgd_center(p, test::to_eigen(truth))).norm();
    worst_gap = std::max(worst_gap, gap);
    c.require(gap <= 1e-3, "instance " + std::to_string(i) + " differs from the reference by " + fmt(gap));
  }
  c.require(worst_grad <= 1e-6, "gradient norm " + fmt(worst_grad));
  c.note("max gradient norm " + fmt(worst_grad) + ", max reference gap " + fmt(worst_gap));
  return c.outcome();
}

Outcome protocol_invariants() {
  Check c;
  double worst_neutral = 0.0;
  double worst_cut = -1.0;
  double worst_trace = -1.0;
  double worst_eig = 0.0;
  std::size_t cuts = 0;
  for (std::size_t k_users : {1, 6}) {
    const ExperimentConfig cfg = scenario(k_users, 60, 20, Algorithm::accpm);
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      auto crng = channel_rng(cfg.base_seed, t);
      auto arng = algorithm_rng(cfg.base_seed, t);
      const ChannelRealization ch = gen_channel(cfg.scenario, crng);
      FeedbackOracle oracle(ch);
      const double power = cfg.scenario.power_watts;
      std::vector<HermitianMatrix> prev;
      accpm_learn(oracle, power, 60, cfg.algo.accpm, arng, [&](const IntervalView& v) {
        worst_trace = std::max(worst_trace, v.covariance.trace() - power);
        worst_eig = std::min(worst_eig, test::min_eig(v.covariance));
        if (v.interval >= 2) {
          const HermitianMatrix ds = v.covariance - oracle.history()[v.interval - 2];
          const double dn = ds.frobenius_norm();
          for (std::size_t k = 0; k < k_users; ++k) {
            // prev[k] is the unit-norm center in force when ds was chosen.
            worst_neutral = std::max(worst_neutral, std::abs(trace_product(prev[k], ds)) / dn);
            worst_cut = std::max(worst_cut, v.bits[k] * trace_product(ch.users[k].g, ds) / dn);
            ++cuts;
          }
        }
        prev.assign(v.estimates.begin(), v.estimates.end());
      });
    }
  }
  c.require(worst_neutral <= 1e-8, "neutral-cut residual " + fmt(worst_neutral));
  c.require(worst_cut <= 1e-9, "true channel cut away by " + fmt(worst_cut));
  c.require(worst_trace <= 1e-12, "trace above budget by " + fmt(worst_trace));
  c.require(worst_eig >= -1e-9, "covariance eigenvalue " + fmt(worst_eig));
  c.note(std::to_string(cuts) + " cuts, max neutral residual " + fmt(worst_neutral) + ", max true-channel violation " +
         fmt(worst_cut));
  return c.outcome();
}

Outcome single_user_convergence() {
  Check c;
  const double m60 = monte_carlo(scenario(1, 60, 50, Algorithm::accpm)).power_ratio.median;
  const double m20 = monte_carlo(scenario(1, 20, 50, Algorithm::accpm)).power_ratio.median;
  c.require(m60 >= 0.97, "median ratio at 60 is " + fmt(m60));
  c.require(m60 >= m20, "median ratio fell from " + fmt(m20) + " to " + fmt(m60));
  c.note("median power ratio " + fmt(m20) + " at N_L=20, " + fmt(m60) + " at N_L=60");
  return c.outcome();
}

Outcome multiuser_convergence() {
  Check c;
  for (std::size_t k : {2, 4, 6}) {
    std::vector<double> med;
    for (std::size_t n_l : {20, 40, 60}) {
      med.push_back(monte_carlo(scenario(k, n_l, 30, Algorithm::accpm)).power_ratio.median);
    }
    c.require(med[2] >= 0.95, "K=" + std::to_string(k) + " median at 60 is " + fmt(med[2]));
    c.require(med[1] >= med[0] && med[2] >= med[1], "K=" + std::to_string(k) + " curve not nondecreasing");
    c.note("K=" + std::to_string(k) + ": " + fmt(med[0]) + "/" + fmt(med[1]) + "/" + fmt(med[2]));
  }
  return c.outcome();
}

Outcome comparative_ordering() {
  Check c;
  for (std::size_t k : {1, 6}) {
    const double accpm = monte_carlo(scenario(k, 60, 30, Algorithm::accpm)).power_ratio.median;
    std::string line = "K=" + std::to_string(k) + " accpm " + fmt(accpm);
    for (auto a : {Algorithm::cjt, Algorithm::gradient_sign, Algorithm::dist_bf}) {
      const double other = monte_carlo(scenario(k, 60, 30, a)).power_ratio.median;
      c.require(accpm > other, "K=" + std::to_string(k) + " " + std::string(algorithm_name(a)) + " " + fmt(other) +
                                   " >= accpm " + fmt(accpm));
      line += " " + std::string(algorithm_name(a)) + " " + fmt(other);
    }
    c.note(line);
  }
  return c.outcome();
}

Outcome tradeoff_shape() {
  Check c;
  ExperimentConfig cfg = scenario(1, 60, 50, Algorithm::accpm);
  cfg.schedule.n_total = 200;
  std::vector<std::size_t> grid;
  for (std::size_t n = 2; n <= 100; n += 4) {
    grid.push_back(n);
  }
  const std::vector<Algorithm> algs{Algorithm::accpm, Algorithm::gradient_sign, Algorithm::dist_bf};
  const auto rows = sweep_learning_budget(cfg, algs, grid);
  auto curve = [&](Algorithm a) {
    std::vector<double> v;
    for (std::size_t n : grid) {
      for (const auto& r : rows) {
        if (r.algorithm == a && r.n_learn == n) {
          v.push_back(r.q_total_rate.median);
        }
      }
    }
    return v;
  };
  const auto acc = curve(Algorithm::accpm);
  const std::size_t peak = static_cast<std::size_t>(std::max_element(acc.begin(), acc.end()) - acc.begin());
  const double band = 0.02 * acc[peak];
  for (std::size_t i = 0; i + 1 < acc.size(); ++i) {
    if (i < peak) {
      c.require(acc[i + 1] >= acc[i] - band, "accpm dips before the peak at N_L=" + std::to_string(grid[i + 1]));
    } else {
      c.require(acc[i + 1] <= acc[i] + band, "accpm rises after the peak at N_L=" + std::to_string(grid[i + 1]));
    }
  }
  c.require(grid[peak] >= 10 && grid[peak] <= 60, "accpm argmax at N_L=" + std::to_string(grid[peak]));
  for (auto a : {Algorithm::gradient_sign, Algorithm::dist_bf}) {
    const auto v = curve(a);
    const double b = 0.02 * *std::max_element(v.begin(), v.end());
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      c.require(v[i + 1] >= v[i] - b,
                std::string(algorithm_name(a)) + " drops at N_L=" + std::to_string(grid[i + 1]));
    }
  }
  c.note("accpm argmax N_L=" + std::to_string(grid[peak]));
  return c.outcome();
}

Outcome bounds() {
  Check c;
  std::size_t pairs = 0;
  for (std::size_t k : {1, 6}) {
    const MonteCarloResult upper = monte_carlo(scenario(k, 0, 30, Algorithm::perfect_csi));
    for (auto a : {Algorithm::accpm, Algorithm::cjt, Algorithm::gradient_sign, Algorithm::dist_bf,
                   Algorithm::isotropic}) {
      for (std::size_t n_l : {20, 60}) {
        const MonteCarloResult r = monte_carlo(scenario(k, n_l, 30, a));
        for (std::size_t t = 0; t < r.trials.size(); ++t) {
          ++pairs;
          c.require(r.trials[t].q_total_rate <= upper.trials[t].q_total_rate * (1.0 + 1e-12),
                    std::string(algorithm_name(a)) + " above perfect CSI on trial " + std::to_string(t));
        }
      }
    }
    for (std::size_t n_l : {40, 60, 80}) {
      const double acc = monte_carlo(scenario(k, n_l, 30, Algorithm::accpm)).q_total_rate.median;
      const double iso = monte_carlo(scenario(k, n_l, 30, Algorithm::isotropic)).q_total_rate.median;
      c.require(acc > iso, "K=" + std::to_string(k) + " N_L=" + std::to_string(n_l) + " isotropic " + fmt(iso) +
                               " >= accpm " + fmt(acc));
    }
  }
  c.note(std::to_string(pairs) + " paired trials checked");
  return c.outcome();
}

Outcome receive_antenna_insensitivity() {
  Check c;
  std::vector<double> med;
  for (std::size_t m_r : {1, 2, 4}) {
    ExperimentConfig cfg = scenario(1, 60, 50, Algorithm::accpm);
    cfg.scenario.m_t = 6;
    cfg.scenario.m_r = m_r;
    med.push_back(monte_carlo(cfg).matrix_error.median);
  }
  const double lo = *std::min_element(med.begin(), med.end());
  const double hi = *std::max_element(med.begin(), med.end());
  const double spread = (hi - lo) / lo;
  c.require(spread < 0.25, "relative spread " + fmt(spread));
  c.note("median matrix error " + fmt(med[0]) + "/" + fmt(med[1]) + "/" + fmt(med[2]) + " for M_R=1/2/4, spread " +
         fmt(spread));
  return c.outcome();
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome cli_determinism() {
  Check c;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("wetsim-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const fs::path config = dir / "exp.cfg";
  {
    std::ofstream out(config);
    out << "scenario.k_users = 2\n"
           "schedule.n_total = 60\n"
           "schedule.n_learn = 20\n"
           "run.trials = 4\n"
           "run.base_seed = 11\n"
           "sweep.grid = 10, 20, 30\n";
  }
  for (const char* cmd : {"run", "compare", "sweep"}) {
    std::string first;
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path out = dir / (std::string(cmd) + std::to_string(rep) + ".csv");
      const std::string line = std::string("\"") + WETSIM_CLI_PATH + "\" " + cmd + " --config \"" + config.string() +
                               "\" --out \"" + out.string() + "\" 2>/dev/null";
      const int status = std::system(line.c_str());
      c.require(status == 0, std::string(cmd) + " exited with status " + std::to_string(status));
      const std::string bytes = read_file(out);
      c.require(!bytes.empty(), std::string(cmd) + " wrote nothing");
      if (rep == 0) {
        first = bytes;
      } else {
        c.require(bytes == first, std::string(cmd) + " output differs between invocations");
      }
    }
  }
  fs::remove_all(dir);
  c.note("run, compare and sweep byte-identical across two invocations");
  return c.outcome();
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "algebra exactness", 1.0, algebra_exactness},
      {2, "realification properties", 5.0, realification_suite},
      {3, "analytic center correctness", 60.0, analytic_center_correctness},
      {4, "protocol invariants", 600.0, protocol_invariants},
      {5, "single-user convergence", 900.0, single_user_convergence},
      {6, "multiuser convergence", 1800.0, multiuser_convergence},
      {7, "comparative ordering", 0.0, comparative_ordering},
      {8, "trade-off shape", 0.0, tradeoff_shape},
      {9, "bounds", 0.0, bounds},
      {10, "receive-antenna insensitivity", 0.0, receive_antenna_insensitivity},
      {11, "determinism", 0.0, cli_determinism},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = cr.body();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("threw: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (cr.limit_seconds > 0.0 && secs >= cr.limit_seconds) {
      o.pass = false;
      o.detail += " | runtime " + fmt(secs) + " s exceeds " + fmt(cr.limit_seconds) + " s";
    }
    failed += o.pass ? 0 : 1;
    std::printf("[%s] %2d %s (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", cr.id, cr.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
