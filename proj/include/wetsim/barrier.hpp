// SPDX-License-Identifier: Apache-2.0
//
// Analytic center of { 0 < G < I, -f_i tr(G dS_i) > 0 } by damped Newton on
//   phi(G) = -2 log det G - 2 log det(I - G) - sum_i log(-f_i tr(G dS_i)),
// with G parameterized by g = cvec(G) in R^{m^2}.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "wetsim/hermitian.hpp"

namespace wetsim {

struct CutRecord {
  HermitianMatrix delta_s;
  int sign = -1;  // f in {-1, +1}
  std::size_t interval_index = 0;
};

struct BarrierProblem {
  std::size_t dim = 0;
  std::vector<CutRecord> cuts;
};

struct NewtonSettings {
  double grad_tol = 1e-8;
  int max_iters = 200;
  double alpha = 0.25;
  double beta = 0.5;
  double feasibility_push = 1e-3;

  void validate() const;
};

struct NewtonTraceRow {
  int iteration;
  double potential;
  double grad_norm;
};

struct CenterSolution {
  HermitianMatrix center;
  int iterations = 0;
  double grad_norm = 0.0;
  std::vector<NewtonTraceRow> trace;
};

/// -f tr(G dS).
double cut_slack(const CutRecord& cut, const HermitianMatrix& g);

/// True when every cut slack exceeds 1e-12 max(1, ||dS||_F) and 0 < G < I.
bool strictly_feasible(const BarrierProblem& problem, const HermitianMatrix& g);

/// Throws BoundaryError (with the violated constraint) outside the open set.
double potential(const BarrierProblem& problem, const HermitianMatrix& g);

/// Gradient of the potential in cvec coordinates.
RVector potential_gradient(const BarrierProblem& problem, const HermitianMatrix& g);

/// Hessian of the potential in cvec coordinates, m^2 x m^2.
RMatrix potential_hessian(const BarrierProblem& problem, const HermitianMatrix& g);

/// Stops when the gradient norm is at most grad_tol, or when the Newton
/// decrement is at most grad_tol/100 (reached first only in very thin working
/// sets). Without a warm start the solve begins at I/2, and InfeasibleError is
/// thrown if that point is not strictly feasible.
CenterSolution solve_analytic_center(const BarrierProblem& problem, const std::optional<HermitianMatrix>& warm_start,
                                     const NewtonSettings& settings = {});

HermitianMatrix analytic_center(const BarrierProblem& problem, const std::optional<HermitianMatrix>& warm_start,
                                const NewtonSettings& settings = {});

/// Pushes `previous_center` off the newest cut's hyperplane along
/// -f dS/||dS||_F, halving the push until every constraint holds strictly.
HermitianMatrix strictly_feasible_start(const BarrierProblem& problem, const HermitianMatrix& previous_center,
                                        const CutRecord& newest_cut, const NewtonSettings& settings = {});

void write_newton_trace_csv(std::ostream& os, const std::vector<NewtonTraceRow>& trace);

}  // namespace wetsim
