// SPDX-License-Identifier: Apache-2.0
//
// Complex Hermitian algebra: the HermitianMatrix value type, the cvec/cmat
// isometry between m-by-m Hermitian matrices and R^{m^2}, the realification
// map A -> [[Re A, -Im A], [Im A, Re A]], and the Hermitian eigensolver.

#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace wetsim {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;
using RVector = std::vector<double>;

/// Dense complex matrix, row-major.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static CMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const cplx> data() const noexcept { return data_; }
  std::span<cplx> data() noexcept { return data_; }

  CVector column(std::size_t c) const;
  void set_column(std::size_t c, std::span<const cplx> v);

  CMatrix adjoint() const;
  double frobenius_norm() const;

  friend CMatrix operator*(const CMatrix& a, const CMatrix& b);
  friend CMatrix operator+(const CMatrix& a, const CMatrix& b);
  friend CMatrix operator-(const CMatrix& a, const CMatrix& b);
  friend CMatrix operator*(cplx s, const CMatrix& a);
  bool operator==(const CMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

/// Dense real matrix, row-major.
class RMatrix {
 public:
  RMatrix() = default;
  RMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  static RMatrix identity(std::size_t n);
  static RMatrix from_columns(std::span<const RVector> columns);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  RVector column(std::size_t c) const;
  RMatrix transpose() const;
  double frobenius_norm() const;

  friend RMatrix operator*(const RMatrix& a, const RMatrix& b);
  RVector operator*(std::span<const double> x) const;
  bool operator==(const RMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Complex Hermitian matrix. Entry (a,b) is the exact conjugate of (b,a) and
/// the diagonal is exactly real; every constructor projects onto the
/// Hermitian part (X + X^H)/2 and then mirrors the upper triangle.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

  static HermitianMatrix from(const CMatrix& x);
  static HermitianMatrix identity(std::size_t dim, double scale = 1.0);
  static HermitianMatrix diagonal(std::span<const double> diag);
  // scale * v v^H
  static HermitianMatrix outer(std::span<const cplx> v, double scale = 1.0);

  std::size_t dim() const noexcept { return dim_; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }

  // Raw storage as 2*dim*dim interleaved doubles (re, im).
  std::span<const double> as_reals() const noexcept {
    return {reinterpret_cast<const double*>(data_.data()), 2 * data_.size()};
  }

  CMatrix to_matrix() const;
  double trace() const;
  double frobenius_norm() const;
  // v^H X v
  double quadratic_form(std::span<const cplx> v) const;
  CVector apply(std::span<const cplx> v) const;

  HermitianMatrix& operator+=(const HermitianMatrix& o);
  HermitianMatrix& operator-=(const HermitianMatrix& o);
  HermitianMatrix& operator*=(double s);
  friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
  friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) { return a -= b; }
  friend HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }
  friend HermitianMatrix operator*(HermitianMatrix a, double s) { return a *= s; }
  bool operator==(const HermitianMatrix&) const = default;

 private:
  friend HermitianMatrix cmat(std::span<const double> v);
  void symmetrize_from_upper();

  std::size_t dim_ = 0;
  std::vector<cplx> data_;
};

/// tr(X Y) for Hermitian X, Y (always real).
double trace_product(const HermitianMatrix& x, const HermitianMatrix& y);

/// Layout: [diagonal] ++ [sqrt2 * Re X_ab, a<b row-major] ++ [-sqrt2 * Im X_ab, same order],
/// i.e. (X_ab + X_ba)/sqrt2 and j(X_ab - X_ba)/sqrt2. tr(XY) = cvec(X).cvec(Y).
RVector cvec(const HermitianMatrix& x);

/// Inverse of cvec. Throws DimensionError unless v.size() is a perfect square.
HermitianMatrix cmat(std::span<const double> v);

/// cmat of the p-th unit vector of R^{m^2}.
HermitianMatrix cvec_basis(std::size_t dim, std::size_t p);

RMatrix realify(const CMatrix& a);

/// Cholesky-based positive-definiteness test; returns log det X when X > 0.
std::optional<double> logdet_if_pd(const HermitianMatrix& x);

struct PdFactor {
  double logdet;
  HermitianMatrix inverse;
};

/// log det and inverse of a positive definite X, or nullopt if X is not PD.
std::optional<PdFactor> factor_pd(const HermitianMatrix& x);

struct HermEig {
  RVector values;   // descending
  CMatrix vectors;  // column i pairs with values[i]; unitary
};

/// Cyclic Jacobi on the realified matrix. Each eigenvector is phase-normalized
/// so that its largest-magnitude entry is real and positive.
HermEig herm_eig(const HermitianMatrix& x);

/// Eigenvector of the largest eigenvalue (first column of herm_eig).
CVector dominant_eigenvector(const HermitianMatrix& x);

/// Columns spanning the orthogonal complement of span(U). U must have
/// orthonormal columns (to 1e-8) and fewer columns than rows.
RMatrix orthonormal_complement_basis(const RMatrix& u);

/// Orthonormal basis of span(vectors) by modified Gram-Schmidt with one
/// re-orthogonalization pass; vectors whose residual falls below
/// `rank_tol` times their norm are dropped.
RMatrix orthonormalize(std::span<const RVector> vectors, double rank_tol = 1e-10);

double norm(std::span<const double> v);
double norm(std::span<const cplx> v);

}  // namespace wetsim
