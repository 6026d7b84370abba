// SPDX-License-Identifier: Apache-2.0

#include "kernels_impl.hpp"

namespace wetsim::kernels::detail {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += x[i] * y[i];
  }
  return acc;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    y[i] += a * x[i];
  }
}

void syr_scalar(double alpha, const double* x, double* a, std::size_t n) {
  for (std::size_t r = 0; r < n; ++r) {
    const double s = alpha * x[r];
    double* row = a + r * n;
    for (std::size_t c = 0; c < n; ++c) {
      row[c] += s * x[c];
    }
  }
}

void gemv_scalar(const double* a, const double* x, double* y, std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    y[r] = dot_scalar(a + r * cols, x, cols);
  }
}

}  // namespace wetsim::kernels::detail
