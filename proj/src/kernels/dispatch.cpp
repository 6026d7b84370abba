// SPDX-License-Identifier: Apache-2.0

#include "wetsim/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"

namespace wetsim::kernels {

namespace {

const KernelTable kScalar{"scalar", detail::dot_scalar, detail::axpy_scalar, detail::syr_scalar,
                          detail::gemv_scalar};

#if defined(WETSIM_HAVE_AVX2)
const KernelTable kAvx2{"avx2", detail::dot_avx2, detail::axpy_avx2, detail::syr_avx2,
                        detail::gemv_avx2};
#endif

const KernelTable* pick_default() {
  if (const char* env = std::getenv("WET_SIM_KERNELS"); env != nullptr && std::string_view(env) == "scalar") {
    return &kScalar;
  }
  if (const KernelTable* simd = avx2_table()) {
    return simd;
  }
  return &kScalar;
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{pick_default()};
  return table;
}

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

const KernelTable* avx2_table() {
#if defined(WETSIM_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

void use(const KernelTable& table) { current().store(&table, std::memory_order_release); }

}  // namespace wetsim::kernels
