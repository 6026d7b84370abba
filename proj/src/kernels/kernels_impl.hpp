// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>

namespace wetsim::kernels::detail {

double dot_scalar(const double* x, const double* y, std::size_t n);
void axpy_scalar(double a, const double* x, double* y, std::size_t n);
void syr_scalar(double alpha, const double* x, double* a, std::size_t n);
void gemv_scalar(const double* a, const double* x, double* y, std::size_t rows, std::size_t cols);

#if defined(WETSIM_HAVE_AVX2)
double dot_avx2(const double* x, const double* y, std::size_t n);
void axpy_avx2(double a, const double* x, double* y, std::size_t n);
void syr_avx2(double alpha, const double* x, double* a, std::size_t n);
void gemv_avx2(const double* a, const double* x, double* y, std::size_t rows, std::size_t cols);
#endif

}  // namespace wetsim::kernels::detail
