// SPDX-License-Identifier: Apache-2.0

#include "wetsim/hermitian.hpp"

#include <cmath>
#include <string>

#include "wetsim/errors.hpp"
#include "wetsim/kernels.hpp"

namespace wetsim {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

void require_same_shape(std::size_t r0, std::size_t c0, std::size_t r1, std::size_t c1) {
  if (r0 != r1 || c0 != c1) {
    throw DimensionError("matrix shapes differ: " + std::to_string(r0) + "x" + std::to_string(c0) + " vs " +
                         std::to_string(r1) + "x" + std::to_string(c1));
  }
}

}  // namespace

// ---------------------------------------------------------------- CMatrix

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = 1.0;
  }
  return m;
}

CVector CMatrix::column(std::size_t c) const {
  CVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    v[r] = (*this)(r, c);
  }
  return v;
}

void CMatrix::set_column(std::size_t c, std::span<const cplx> v) {
  for (std::size_t r = 0; r < rows_; ++r) {
    (*this)(r, c) = v[r];
  }
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      out(c, r) = std::conj((*this)(r, c));
    }
  }
  return out;
}

double CMatrix::frobenius_norm() const {
  double acc = 0.0;
  for (const auto& z : data_) {
    acc += std::norm(z);
  }
  return std::sqrt(acc);
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols_ != b.rows_) {
    throw DimensionError("inner dimensions differ in complex product");
  }
  CMatrix out(a.rows_, b.cols_);
  for (std::size_t r = 0; r < a.rows_; ++r) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const cplx s = a(r, k);
      for (std::size_t c = 0; c < b.cols_; ++c) {
        out(r, c) += s * b(k, c);
      }
    }
  }
  return out;
}

CMatrix operator+(const CMatrix& a, const CMatrix& b) {
  require_same_shape(a.rows_, a.cols_, b.rows_, b.cols_);
  CMatrix out = a;
  for (std::size_t i = 0; i < out.data_.size(); ++i) {
    out.data_[i] += b.data_[i];
  }
  return out;
}

CMatrix operator-(const CMatrix& a, const CMatrix& b) {
  require_same_shape(a.rows_, a.cols_, b.rows_, b.cols_);
  CMatrix out = a;
  for (std::size_t i = 0; i < out.data_.size(); ++i) {
    out.data_[i] -= b.data_[i];
  }
  return out;
}

CMatrix operator*(cplx s, const CMatrix& a) {
  CMatrix out = a;
  for (auto& z : out.data_) {
    z *= s;
  }
  return out;
}

// ---------------------------------------------------------------- RMatrix

RMatrix RMatrix::identity(std::size_t n) {
  RMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = 1.0;
  }
  return m;
}

RMatrix RMatrix::from_columns(std::span<const RVector> columns) {
  if (columns.empty()) {
    return {};
  }
  RMatrix m(columns.front().size(), columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != m.rows()) {
      throw DimensionError("columns of unequal length");
    }
    for (std::size_t r = 0; r < m.rows(); ++r) {
      m(r, c) = columns[c][r];
    }
  }
  return m;
}

RVector RMatrix::column(std::size_t c) const {
  RVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    v[r] = (*this)(r, c);
  }
  return v;
}

RMatrix RMatrix::transpose() const {
  RMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      out(c, r) = (*this)(r, c);
    }
  }
  return out;
}

double RMatrix::frobenius_norm() const { return std::sqrt(kernels::dot(data_, data_)); }

RMatrix operator*(const RMatrix& a, const RMatrix& b) {
  if (a.cols_ != b.rows_) {
    throw DimensionError("inner dimensions differ in real product");
  }
  RMatrix out(a.rows_, b.cols_);
  for (std::size_t r = 0; r < a.rows_; ++r) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      kernels::axpy(a(r, k), b.row(k), {out.data_.data() + r * out.cols_, out.cols_});
    }
  }
  return out;
}

RVector RMatrix::operator*(std::span<const double> x) const {
  if (x.size() != cols_) {
    throw DimensionError("matrix-vector size mismatch");
  }
  RVector y(rows_);
  kernels::gemv(data_, x, y);
  return y;
}

// ---------------------------------------------------------------- HermitianMatrix

void HermitianMatrix::symmetrize_from_upper() {
  for (std::size_t a = 0; a < dim_; ++a) {
    data_[a * dim_ + a] = data_[a * dim_ + a].real();
    for (std::size_t b = a + 1; b < dim_; ++b) {
      data_[b * dim_ + a] = std::conj(data_[a * dim_ + b]);
    }
  }
}

HermitianMatrix HermitianMatrix::from(const CMatrix& x) {
  if (x.rows() != x.cols()) {
    throw DimensionError("Hermitian matrix must be square");
  }
  HermitianMatrix h(x.rows());
  for (std::size_t a = 0; a < h.dim_; ++a) {
    for (std::size_t b = a; b < h.dim_; ++b) {
      h.data_[a * h.dim_ + b] = 0.5 * (x(a, b) + std::conj(x(b, a)));
    }
  }
  h.symmetrize_from_upper();
  return h;
}

HermitianMatrix HermitianMatrix::identity(std::size_t dim, double scale) {
  HermitianMatrix h(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    h.data_[i * dim + i] = scale;
  }
  return h;
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> diag) {
  HermitianMatrix h(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) {
    h.data_[i * diag.size() + i] = diag[i];
  }
  return h;
}

HermitianMatrix HermitianMatrix::outer(std::span<const cplx> v, double scale) {
  HermitianMatrix h(v.size());
  for (std::size_t a = 0; a < v.size(); ++a) {
    for (std::size_t b = a; b < v.size(); ++b) {
      h.data_[a * v.size() + b] = scale * v[a] * std::conj(v[b]);
    }
  }
  h.symmetrize_from_upper();
  return h;
}

CMatrix HermitianMatrix::to_matrix() const {
  CMatrix m(dim_, dim_);
  std::copy(data_.begin(), data_.end(), m.data().begin());
  return m;
}

double HermitianMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    t += data_[i * dim_ + i].real();
  }
  return t;
}

double HermitianMatrix::frobenius_norm() const {
  const auto re = as_reals();
  return std::sqrt(kernels::dot(re, re));
}

double HermitianMatrix::quadratic_form(std::span<const cplx> v) const {
  if (v.size() != dim_) {
    throw DimensionError("quadratic form size mismatch");
  }
  cplx acc = 0.0;
  for (std::size_t a = 0; a < dim_; ++a) {
    cplx row = 0.0;
    for (std::size_t b = 0; b < dim_; ++b) {
      row += data_[a * dim_ + b] * v[b];
    }
    acc += std::conj(v[a]) * row;
  }
  return acc.real();
}

CVector HermitianMatrix::apply(std::span<const cplx> v) const {
  if (v.size() != dim_) {
    throw DimensionError("matrix-vector size mismatch");
  }
  CVector out(dim_);
  for (std::size_t a = 0; a < dim_; ++a) {
    for (std::size_t b = 0; b < dim_; ++b) {
      out[a] += data_[a * dim_ + b] * v[b];
    }
  }
  return out;
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& o) {
  require_same_shape(dim_, dim_, o.dim_, o.dim_);
  for (std::size_t i = 0; i < data_.size(); ++i) {
    data_[i] += o.data_[i];
  }
  return *this;
}

HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& o) {
  require_same_shape(dim_, dim_, o.dim_, o.dim_);
  for (std::size_t i = 0; i < data_.size(); ++i) {
    data_[i] -= o.data_[i];
  }
  return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double s) {
  for (auto& z : data_) {
    z *= s;
  }
  return *this;
}

// ---------------------------------------------------------------- free functions

double trace_product(const HermitianMatrix& x, const HermitianMatrix& y) {
  if (x.dim() != y.dim()) {
    throw DimensionError("trace product of matrices with different dimensions");
  }
  // tr(XY) = sum_ab X_ab conj(Y_ab) for Hermitian Y; the real part is a plain
  // dot product over the interleaved storage.
  return kernels::dot(x.as_reals(), y.as_reals());
}

RVector cvec(const HermitianMatrix& x) {
  const std::size_t m = x.dim();
  const std::size_t off = m * (m - 1) / 2;
  RVector v(m * m);
  for (std::size_t a = 0; a < m; ++a) {
    v[a] = x(a, a).real();
  }
  std::size_t k = 0;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b, ++k) {
      v[m + k] = kSqrt2 * x(a, b).real();
      v[m + off + k] = -kSqrt2 * x(a, b).imag();
    }
  }
  return v;
}

HermitianMatrix cmat(std::span<const double> v) {
  const auto m = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (m == 0 || m * m != v.size()) {
    throw DimensionError("cmat: length " + std::to_string(v.size()) + " is not a positive perfect square");
  }
  const std::size_t off = m * (m - 1) / 2;
  HermitianMatrix h(m);
  for (std::size_t a = 0; a < m; ++a) {
    h.data_[a * m + a] = v[a];
  }
  std::size_t k = 0;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b, ++k) {
      h.data_[a * m + b] = cplx(v[m + k] / kSqrt2, -v[m + off + k] / kSqrt2);
    }
  }
  h.symmetrize_from_upper();
  return h;
}

HermitianMatrix cvec_basis(std::size_t dim, std::size_t p) {
  RVector e(dim * dim, 0.0);
  e.at(p) = 1.0;
  return cmat(e);
}

RMatrix realify(const CMatrix& a) {
  const std::size_t r = a.rows();
  const std::size_t c = a.cols();
  RMatrix out(2 * r, 2 * c);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      const double re = a(i, j).real();
      const double im = a(i, j).imag();
      out(i, j) = re;
      out(i, j + c) = -im;
      out(i + r, j) = im;
      out(i + r, j + c) = re;
    }
  }
  return out;
}

namespace {

// Lower Cholesky factor L with X = L L^H, in place over a dense copy.
bool cholesky(std::vector<cplx>& l, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    double d = l[j * n + j].real();
    for (std::size_t k = 0; k < j; ++k) {
      d -= std::norm(l[j * n + k]);
    }
    if (!(d > 0.0) || !std::isfinite(d)) {
      return false;
    }
    const double ljj = std::sqrt(d);
    l[j * n + j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      cplx s = l[i * n + j];
      for (std::size_t k = 0; k < j; ++k) {
        s -= l[i * n + k] * std::conj(l[j * n + k]);
      }
      l[i * n + j] = s / ljj;
    }
  }
  return true;
}

}  // namespace

std::optional<double> logdet_if_pd(const HermitianMatrix& x) {
  const std::size_t n = x.dim();
  const CMatrix dense = x.to_matrix();
  std::vector<cplx> l(dense.data().begin(), dense.data().end());
  if (!cholesky(l, n)) {
    return std::nullopt;
  }
  double logdet = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    logdet += 2.0 * std::log(l[i * n + i].real());
  }
  return logdet;
}

std::optional<PdFactor> factor_pd(const HermitianMatrix& x) {
  const std::size_t n = x.dim();
  const CMatrix dense = x.to_matrix();
  std::vector<cplx> l(dense.data().begin(), dense.data().end());
  if (!cholesky(l, n)) {
    return std::nullopt;
  }
  double logdet = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    logdet += 2.0 * std::log(l[i * n + i].real());
  }
  // Invert L (lower triangular), then X^{-1} = L^{-H} L^{-1}.
  std::vector<cplx> linv(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    linv[j * n + j] = 1.0 / l[j * n + j];
    for (std::size_t i = j + 1; i < n; ++i) {
      cplx s = 0.0;
      for (std::size_t k = j; k < i; ++k) {
        s -= l[i * n + k] * linv[k * n + j];
      }
      linv[i * n + j] = s / l[i * n + i];
    }
  }
  CMatrix inv(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      cplx s = 0.0;
      for (std::size_t k = b; k < n; ++k) {
        s += std::conj(linv[k * n + a]) * linv[k * n + b];
      }
      inv(a, b) = s;
      inv(b, a) = std::conj(s);
    }
  }
  return PdFactor{logdet, HermitianMatrix::from(inv)};
}

double norm(std::span<const double> v) { return std::sqrt(kernels::dot(v, v)); }

double norm(std::span<const cplx> v) {
  double acc = 0.0;
  for (const auto& z : v) {
    acc += std::norm(z);
  }
  return std::sqrt(acc);
}

RMatrix orthonormalize(std::span<const RVector> vectors, double rank_tol) {
  std::vector<RVector> basis;
  for (const auto& v : vectors) {
    const double n0 = norm(v);
    if (n0 == 0.0) {
      continue;
    }
    RVector w = v;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : basis) {
        kernels::axpy(-kernels::dot(q, w), q, w);
      }
    }
    const double n1 = norm(w);
    if (n1 <= rank_tol * n0) {
      continue;
    }
    for (auto& x : w) {
      x /= n1;
    }
    basis.push_back(std::move(w));
  }
  return RMatrix::from_columns(basis);
}

RMatrix orthonormal_complement_basis(const RMatrix& u) {
  const std::size_t d = u.rows();
  const std::size_t k = u.cols();
  if (k >= d) {
    throw PreconditionError("no orthogonal complement: " + std::to_string(k) + " columns in dimension " +
                            std::to_string(d));
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      double g = 0.0;
      for (std::size_t r = 0; r < d; ++r) {
        g += u(r, i) * u(r, j);
      }
      if (std::abs(g - (i == j ? 1.0 : 0.0)) > 1e-8) {
        throw PreconditionError("complement basis requires orthonormal columns");
      }
    }
  }

  // Householder QR of U: Q = H_0 H_1 ... H_{k-1}. Columns k..d-1 of Q span the
  // complement.
  std::vector<RVector> reflectors;
  RMatrix work = u;
  for (std::size_t j = 0; j < k; ++j) {
    RVector x(d - j);
    for (std::size_t r = j; r < d; ++r) {
      x[r - j] = work(r, j);
    }
    const double alpha = (x[0] >= 0.0 ? -1.0 : 1.0) * norm(x);
    x[0] -= alpha;
    const double vn = norm(x);
    if (vn > 0.0) {
      for (auto& e : x) {
        e /= vn;
      }
    }
    for (std::size_t c = j; c < k; ++c) {
      double s = 0.0;
      for (std::size_t r = j; r < d; ++r) {
        s += x[r - j] * work(r, c);
      }
      for (std::size_t r = j; r < d; ++r) {
        work(r, c) -= 2.0 * s * x[r - j];
      }
    }
    reflectors.push_back(std::move(x));
  }

  RMatrix v(d, d - k);
  for (std::size_t c = 0; c < d - k; ++c) {
    RVector col(d, 0.0);
    col[k + c] = 1.0;
    for (std::size_t jj = k; jj-- > 0;) {
      const RVector& h = reflectors[jj];
      double s = 0.0;
      for (std::size_t r = jj; r < d; ++r) {
        s += h[r - jj] * col[r];
      }
      for (std::size_t r = jj; r < d; ++r) {
        col[r] -= 2.0 * s * h[r - jj];
      }
    }
    for (std::size_t r = 0; r < d; ++r) {
      v(r, c) = col[r];
    }
  }
  return v;
}

}  // namespace wetsim
