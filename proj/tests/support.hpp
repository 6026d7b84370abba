// SPDX-License-Identifier: Apache-2.0
//
// Test-side helpers. Eigen is used here as an independent reference for
// eigenvalues, determinants and inverses; the library never links it.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <random>

#include "wetsim/hermitian.hpp"

namespace wetsim::test {

using EMat = Eigen::MatrixXcd;

inline EMat to_eigen(const CMatrix& a) {
  EMat e(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      e(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = a(r, c);
    }
  }
  return e;
}

inline EMat to_eigen(const HermitianMatrix& h) { return to_eigen(h.to_matrix()); }

inline Eigen::MatrixXd to_eigen(const RMatrix& a) {
  Eigen::MatrixXd e(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      e(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = a(r, c);
    }
  }
  return e;
}

inline CMatrix from_eigen(const EMat& e) {
  CMatrix a(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
  for (Eigen::Index r = 0; r < e.rows(); ++r) {
    for (Eigen::Index c = 0; c < e.cols(); ++c) {
      a(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = e(r, c);
    }
  }
  return a;
}

inline CMatrix random_complex(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix a(rows, cols);
  for (auto& z : a.data()) {
    z = cplx(g(rng), g(rng));
  }
  return a;
}

inline HermitianMatrix random_hermitian(std::size_t m, std::mt19937_64& rng) {
  return HermitianMatrix::from(random_complex(m, m, rng));
}

/// Random PSD matrix with the given eigenvalues and a Haar-ish eigenbasis.
inline HermitianMatrix random_with_spectrum(const std::vector<double>& eig, std::mt19937_64& rng) {
  const std::size_t m = eig.size();
  Eigen::HouseholderQR<EMat> qr(to_eigen(random_complex(m, m, rng)));
  const EMat q = qr.householderQ();
  EMat d = EMat::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = eig[i];
  }
  return HermitianMatrix::from(from_eigen(q * d * q.adjoint()));
}

inline Eigen::VectorXd eigenvalues_desc(const HermitianMatrix& h) {
  Eigen::SelfAdjointEigenSolver<EMat> es(to_eigen(h));
  return es.eigenvalues().reverse();
}

inline double min_eig(const HermitianMatrix& h) { return eigenvalues_desc(h).minCoeff(); }
inline double max_eig(const HermitianMatrix& h) { return eigenvalues_desc(h).maxCoeff(); }

/// tr(XY) straight from the definition.
inline std::complex<double> trace_of_product(const EMat& x, const EMat& y) { return (x * y).trace(); }

}  // namespace wetsim::test
