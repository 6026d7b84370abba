// SPDX-License-Identifier: Apache-2.0
//
// Dense real kernels used by the barrier solver and the Hermitian algebra.
// Every kernel has a scalar reference implementation; an AVX2/FMA variant is
// compiled on x86-64 and picked at startup when the CPU supports it.
// Set WET_SIM_KERNELS=scalar to force the reference path.

#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace wetsim::kernels {

struct KernelTable {
  std::string_view name;
  // sum_i x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // a += alpha * x * x^T; `a` is an n-by-n row-major block
  void (*syr)(double alpha, const double* x, double* a, std::size_t n);
  // y = A * x; A is rows-by-cols row-major
  void (*gemv)(const double* a, const double* x, double* y, std::size_t rows, std::size_t cols);
};

const KernelTable& scalar_table();

// nullptr when the variant was not compiled in or the CPU lacks the ISA.
const KernelTable* avx2_table();

// The table all library code goes through.
const KernelTable& active();

// Override the runtime choice (tests use this to compare variants).
void use(const KernelTable& table);

inline double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}

inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  active().axpy(a, x.data(), y.data(), x.size());
}

inline void syr(double alpha, std::span<const double> x, std::span<double> a) {
  active().syr(alpha, x.data(), a.data(), x.size());
}

inline void gemv(std::span<const double> a, std::span<const double> x, std::span<double> y) {
  active().gemv(a.data(), x.data(), y.data(), y.size(), x.size());
}

}  // namespace wetsim::kernels
