// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wetsim/hermitian.hpp"

namespace wetsim {

namespace {

// Cyclic Jacobi on a dense symmetric n-by-n matrix. On return `a` is
// (numerically) diagonal and the columns of `v` are its eigenvectors.
void jacobi_symmetric(RMatrix& a, RMatrix& v, double tol) {
  const std::size_t n = a.rows();
  v = RMatrix::identity(n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        off += 2.0 * a(p, q) * a(p, q);
      }
    }
    if (std::sqrt(off) <= tol) {
      return;
    }
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) {
          continue;
        }
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
}

cplx cdot(std::span<const cplx> x, std::span<const cplx> y) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += std::conj(x[i]) * y[i];
  }
  return s;
}

// Subtract projections onto `basis` (twice, for stability); returns residual norm.
double project_out(CVector& w, const std::vector<CVector>& basis) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& q : basis) {
      const cplx c = cdot(q, w);
      for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] -= c * q[i];
      }
    }
  }
  return norm(std::span<const cplx>(w));
}

void fix_phase(CVector& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[best])) {
      best = i;
    }
  }
  if (std::abs(v[best]) == 0.0) {
    return;
  }
  const cplx rot = std::conj(v[best]) / std::abs(v[best]);
  for (auto& z : v) {
    z *= rot;
  }
  v[best] = std::abs(v[best]);
}

}  // namespace

HermEig herm_eig(const HermitianMatrix& x) {
  const std::size_t m = x.dim();
  RMatrix a = realify(x.to_matrix());
  RMatrix w;
  jacobi_symmetric(a, w, 1e-12 * std::max(x.frobenius_norm(), 1e-300));

  // Every eigenvalue of X appears twice in the realified spectrum, with real
  // eigenvectors [x; y] and [-y; x] both mapping to x + iy (up to a factor j).
  std::vector<std::size_t> order(2 * m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

  std::vector<CVector> accepted;
  for (std::size_t idx : order) {
    if (accepted.size() == m) {
      break;
    }
    CVector c(m);
    for (std::size_t i = 0; i < m; ++i) {
      c[i] = cplx(w(i, idx), w(i + m, idx));
    }
    // Each candidate has unit real norm, so |c| = 1; a residual above 0.3
    // means it carries a direction not yet covered.
    const double r = project_out(c, accepted);
    if (r > 0.3) {
      for (auto& z : c) {
        z /= r;
      }
      accepted.push_back(std::move(c));
    }
  }
  for (std::size_t e = 0; accepted.size() < m && e < m; ++e) {
    CVector c(m);
    c[e] = 1.0;
    const double r = project_out(c, accepted);
    if (r > 1e-6) {
      for (auto& z : c) {
        z /= r;
      }
      accepted.push_back(std::move(c));
    }
  }

  std::vector<std::pair<double, CVector>> pairs;
  pairs.reserve(m);
  for (auto& v : accepted) {
    const double lambda = x.quadratic_form(v);
    fix_phase(v);
    pairs.emplace_back(lambda, std::move(v));
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const auto& l, const auto& r) { return l.first > r.first; });

  HermEig out{RVector(m), CMatrix(m, m)};
  for (std::size_t i = 0; i < m; ++i) {
    out.values[i] = pairs[i].first;
    out.vectors.set_column(i, pairs[i].second);
  }
  return out;
}

CVector dominant_eigenvector(const HermitianMatrix& x) { return herm_eig(x).vectors.column(0); }

}  // namespace wetsim
