// SPDX-License-Identifier: Apache-2.0

#include "wetsim/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "wetsim/errors.hpp"
#include "wetsim/kernels.hpp"

namespace wetsim {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

double slack_floor(const CutRecord& cut) { return 1e-12 * std::max(1.0, cut.delta_s.frobenius_norm()); }

struct Evaluation {
  int violated = 0;  // constraint index, or a BoundaryError sentinel; meaningful only if !ok
  bool ok = false;
  double phi = 0.0;
  std::optional<PdFactor> lower;  // G
  std::optional<PdFactor> upper;  // I - G
  RVector slacks;
};

// Cut normals a_i = -f_i cvec(dS_i), so that slack_i = a_i . g.
std::vector<RVector> cut_normals(const BarrierProblem& problem) {
  std::vector<RVector> a;
  a.reserve(problem.cuts.size());
  for (const auto& cut : problem.cuts) {
    RVector v = cvec(cut.delta_s);
    for (auto& x : v) {
      x *= -static_cast<double>(cut.sign);
    }
    a.push_back(std::move(v));
  }
  return a;
}

Evaluation evaluate(const BarrierProblem& problem, const std::vector<RVector>& normals, const RVector& g) {
  Evaluation e;
  const HermitianMatrix gm = cmat(g);
  e.slacks.resize(normals.size());
  double cut_sum = 0.0;
  for (std::size_t i = 0; i < normals.size(); ++i) {
    const double s = kernels::dot(normals[i], g);
    if (!(s > slack_floor(problem.cuts[i]))) {
      e.violated = static_cast<int>(i);
      return e;
    }
    e.slacks[i] = s;
    cut_sum += std::log(s);
  }
  e.lower = factor_pd(gm);
  if (!e.lower) {
    e.violated = BoundaryError::kLowerBox;
    return e;
  }
  e.upper = factor_pd(HermitianMatrix::identity(gm.dim()) - gm);
  if (!e.upper) {
    e.violated = BoundaryError::kUpperBox;
    return e;
  }
  e.ok = true;
  e.phi = -2.0 * e.lower->logdet - 2.0 * e.upper->logdet - cut_sum;
  return e;
}

RVector gradient_at(const std::vector<RVector>& normals, const Evaluation& e) {
  RVector grad = cvec(e.upper->inverse);
  const RVector lo = cvec(e.lower->inverse);
  for (std::size_t i = 0; i < grad.size(); ++i) {
    grad[i] = 2.0 * grad[i] - 2.0 * lo[i];
  }
  for (std::size_t i = 0; i < normals.size(); ++i) {
    kernels::axpy(-1.0 / e.slacks[i], normals[i], grad);
  }
  return grad;
}

// Adds scale * [cvec(X E_p X)]_q into h(p, q), E_p = cmat(e_p).
void add_logdet_hessian(const HermitianMatrix& x, double scale, RMatrix& h) {
  const std::size_t m = x.dim();
  const std::size_t n = m * m;
  const std::size_t off = m * (m - 1) / 2;
  CMatrix prod(m, m);
  // prod = sum_t coef_t * X[:, a_t] X[b_t, :]
  auto accumulate = [&](cplx coef, std::size_t a, std::size_t b) {
    for (std::size_t r = 0; r < m; ++r) {
      const cplx left = coef * x(r, a);
      for (std::size_t c = 0; c < m; ++c) {
        prod(r, c) += left * x(b, c);
      }
    }
  };
  for (std::size_t p = 0; p < n; ++p) {
    std::fill(prod.data().begin(), prod.data().end(), cplx(0.0));
    if (p < m) {
      accumulate(1.0, p, p);
    } else {
      // Recover (a, b) for the off-diagonal slot.
      std::size_t k = (p - m) % off;
      std::size_t a = 0;
      while (k >= m - 1 - a) {
        k -= m - 1 - a;
        ++a;
      }
      const std::size_t b = a + 1 + k;
      if (p < m + off) {
        accumulate(kInvSqrt2, a, b);
        accumulate(kInvSqrt2, b, a);
      } else {
        accumulate(cplx(0.0, -kInvSqrt2), a, b);
        accumulate(cplx(0.0, kInvSqrt2), b, a);
      }
    }
    const RVector row = cvec(HermitianMatrix::from(prod));
    for (std::size_t q = 0; q < n; ++q) {
      h(p, q) += scale * row[q];
    }
  }
}

RMatrix hessian_at(std::size_t m, const std::vector<RVector>& normals, const Evaluation& e) {
  RMatrix h(m * m, m * m);
  add_logdet_hessian(e.lower->inverse, 2.0, h);
  add_logdet_hessian(e.upper->inverse, 2.0, h);
  for (std::size_t i = 0; i < normals.size(); ++i) {
    kernels::syr(1.0 / (e.slacks[i] * e.slacks[i]), normals[i], h.data());
  }
  return h;
}

// Solves H x = b for symmetric positive definite H. Returns false if the
// factorization breaks down.
bool cholesky_solve(RMatrix h, const RVector& b, RVector& x) {
  const std::size_t n = h.rows();
  for (std::size_t j = 0; j < n; ++j) {
    double d = h(j, j);
    for (std::size_t k = 0; k < j; ++k) {
      d -= h(j, k) * h(j, k);
    }
    if (!(d > 0.0)) {
      return false;
    }
    const double ljj = std::sqrt(d);
    h(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = h(i, j);
      for (std::size_t k = 0; k < j; ++k) {
        s -= h(i, k) * h(j, k);
      }
      h(i, j) = s / ljj;
    }
  }
  x = b;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) {
      x[i] -= h(i, k) * x[k];
    }
    x[i] /= h(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) {
      x[i] -= h(k, i) * x[k];
    }
    x[i] /= h(i, i);
  }
  return true;
}

[[noreturn]] void throw_boundary(int violated) {
  if (violated == BoundaryError::kLowerBox) {
    throw BoundaryError(violated, "point is not strictly positive definite");
  }
  if (violated == BoundaryError::kUpperBox) {
    throw BoundaryError(violated, "point is not strictly below the identity");
  }
  throw BoundaryError(violated, "cut " + std::to_string(violated) + " is not strictly satisfied");
}

void check_dims(const BarrierProblem& problem, const HermitianMatrix& g) {
  if (g.dim() != problem.dim) {
    throw DimensionError("point dimension " + std::to_string(g.dim()) + " does not match problem dimension " +
                         std::to_string(problem.dim));
  }
  for (const auto& cut : problem.cuts) {
    if (cut.delta_s.dim() != problem.dim) {
      throw DimensionError("cut dimension does not match problem dimension");
    }
    if (cut.sign != -1 && cut.sign != 1) {
      throw PreconditionError("cut sign must be -1 or +1");
    }
  }
}

}  // namespace

void NewtonSettings::validate() const {
  if (!(grad_tol > 0.0)) {
    throw PreconditionError("newton.grad_tol must be positive");
  }
  if (max_iters < 1) {
    throw PreconditionError("newton.max_iters must be positive");
  }
  if (!(alpha > 0.0 && alpha < 0.5)) {
    throw PreconditionError("newton.alpha must lie in (0, 0.5)");
  }
  if (!(beta > 0.0 && beta < 1.0)) {
    throw PreconditionError("newton.beta must lie in (0, 1)");
  }
  if (!(feasibility_push > 0.0)) {
    throw PreconditionError("newton.feasibility_push must be positive");
  }
}

double cut_slack(const CutRecord& cut, const HermitianMatrix& g) {
  return -static_cast<double>(cut.sign) * trace_product(g, cut.delta_s);
}

bool strictly_feasible(const BarrierProblem& problem, const HermitianMatrix& g) {
  check_dims(problem, g);
  return evaluate(problem, cut_normals(problem), cvec(g)).ok;
}

double potential(const BarrierProblem& problem, const HermitianMatrix& g) {
  check_dims(problem, g);
  const Evaluation e = evaluate(problem, cut_normals(problem), cvec(g));
  if (!e.ok) {
    throw_boundary(e.violated);
  }
  return e.phi;
}

RVector potential_gradient(const BarrierProblem& problem, const HermitianMatrix& g) {
  check_dims(problem, g);
  const auto normals = cut_normals(problem);
  const Evaluation e = evaluate(problem, normals, cvec(g));
  if (!e.ok) {
    throw_boundary(e.violated);
  }
  return gradient_at(normals, e);
}

RMatrix potential_hessian(const BarrierProblem& problem, const HermitianMatrix& g) {
  check_dims(problem, g);
  const auto normals = cut_normals(problem);
  const Evaluation e = evaluate(problem, normals, cvec(g));
  if (!e.ok) {
    throw_boundary(e.violated);
  }
  return hessian_at(problem.dim, normals, e);
}

CenterSolution solve_analytic_center(const BarrierProblem& problem, const std::optional<HermitianMatrix>& warm_start,
                                     const NewtonSettings& settings) {
  settings.validate();
  const std::size_t m = problem.dim;
  const HermitianMatrix start = warm_start ? *warm_start : HermitianMatrix::identity(m, 0.5);
  check_dims(problem, start);
  const auto normals = cut_normals(problem);

  RVector g = cvec(start);
  Evaluation e = evaluate(problem, normals, g);
  if (!e.ok) {
    throw InfeasibleError(warm_start ? "warm start is not strictly feasible"
                                     : "no strictly feasible start: I/2 violates the working set");
  }

  CenterSolution sol;
  RVector grad = gradient_at(normals, e);
  double gnorm = norm(grad);
  for (int it = 0;; ++it) {
    sol.trace.push_back({it, e.phi, gnorm});
    if (gnorm <= settings.grad_tol) {
      sol.iterations = it;
      break;
    }
    if (it >= settings.max_iters) {
      throw ConvergenceError("analytic center: no convergence after " + std::to_string(settings.max_iters) +
                                 " Newton iterations (gradient norm " + std::to_string(gnorm) + ")",
                             gnorm);
    }

    RMatrix h = hessian_at(m, normals, e);
    RVector rhs(grad.size());
    for (std::size_t i = 0; i < grad.size(); ++i) {
      rhs[i] = -grad[i];
    }
    RVector step;
    const bool step_is_gradient = !cholesky_solve(h, rhs, step);
    if (step_is_gradient) {
      // The barrier Hessian is positive definite in exact arithmetic; fall
      // back to a gradient step if rounding destroys that.
      step = rhs;
    }
    const double slope = kernels::dot(grad, step);  // -lambda^2
    // In a very thin working set the gradient cannot reach grad_tol in double
    // precision; the affine-invariant decrement still can.
    const double dec_tol = 1e-2 * settings.grad_tol;
    if (!step_is_gradient && -slope <= dec_tol * dec_tol) {
      sol.iterations = it;
      break;
    }
    // Near the minimizer the Armijo test is dominated by rounding in phi.
    const bool skip_armijo = -slope <= 1e-8;

    double t = 1.0;
    bool accepted = false;
    RVector trial(g.size());
    for (int bt = 0; bt < 60; ++bt, t *= settings.beta) {
      for (std::size_t i = 0; i < g.size(); ++i) {
        trial[i] = g[i] + t * step[i];
      }
      Evaluation te = evaluate(problem, normals, trial);
      if (!te.ok) {
        continue;
      }
      if (skip_armijo || te.phi <= e.phi + settings.alpha * t * slope) {
        g = trial;
        e = std::move(te);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      throw ConvergenceError("analytic center: line search failed (gradient norm " + std::to_string(gnorm) + ")",
                             gnorm);
    }
    grad = gradient_at(normals, e);
    gnorm = norm(grad);
  }
  sol.center = cmat(g);
  sol.grad_norm = gnorm;
  return sol;
}

HermitianMatrix analytic_center(const BarrierProblem& problem, const std::optional<HermitianMatrix>& warm_start,
                                const NewtonSettings& settings) {
  return solve_analytic_center(problem, warm_start, settings).center;
}

HermitianMatrix strictly_feasible_start(const BarrierProblem& problem, const HermitianMatrix& previous_center,
                                        const CutRecord& newest_cut, const NewtonSettings& settings) {
  check_dims(problem, previous_center);
  const auto normals = cut_normals(problem);
  RVector g = cvec(previous_center);
  if (evaluate(problem, normals, g).ok) {
    return previous_center;
  }
  const double dn = newest_cut.delta_s.frobenius_norm();
  if (!(dn > 0.0)) {
    throw InfeasibleError("newest cut has a zero direction");
  }
  RVector dir = cvec(newest_cut.delta_s);
  for (auto& x : dir) {
    x *= -static_cast<double>(newest_cut.sign) / dn;
  }
  double push = settings.feasibility_push;
  RVector trial(g.size());
  for (int t = 0; t <= 60; ++t, push *= 0.5) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      trial[i] = g[i] + push * dir[i];
    }
    if (evaluate(problem, normals, trial).ok) {
      return cmat(trial);
    }
  }
  throw InfeasibleError("no strictly feasible point near the previous center after 60 halvings");
}

void write_newton_trace_csv(std::ostream& os, const std::vector<NewtonTraceRow>& trace) {
  os << "iteration,potential,grad_norm\n";
  char buf[96];
  for (const auto& r : trace) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", r.iteration, r.potential, r.grad_norm);
    os << buf;
  }
}

}  // namespace wetsim
