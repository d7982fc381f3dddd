#include "hs1d/kernels.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace hs1d::kernels {

#if defined(__x86_64__) || defined(_M_X64)
const KernelOps* avx2_kernels_impl();  // defined in kernels_avx2.cpp when built with AVX2

const KernelOps* avx2_kernels() {
#if defined(HS1D_HAVE_AVX2_KERNELS)
  if (__builtin_cpu_supports("avx2")) return avx2_kernels_impl();
#endif
  return nullptr;
}
#else
const KernelOps* avx2_kernels() { return nullptr; }
#endif

const KernelOps& active_kernels() {
  static const KernelOps& selected = []() -> const KernelOps& {
    const char* env = std::getenv("HS1D_KERNELS");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) return scalar_kernels();
    const KernelOps* vec = avx2_kernels();
    if (env != nullptr && std::strcmp(env, "avx2") == 0 && vec == nullptr) {
      std::fprintf(stderr, "hs1d: HS1D_KERNELS=avx2 requested but AVX2 unavailable; using scalar\n");
    }
    return vec != nullptr ? *vec : scalar_kernels();
  }();
  return selected;
}

}  // namespace hs1d::kernels
