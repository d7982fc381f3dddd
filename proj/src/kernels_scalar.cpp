#include "hs1d/kernels.hpp"
#include "kernels_detail.hpp"

namespace hs1d::kernels {

namespace {

void checkerboard_scalar(const LatticeLevelArgs& p, const double* xs, std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = detail::checkerboard_point(p, xs[i]);
}

void bumps_scalar(const BumpArgs& p, const double* xs, std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = detail::bump_point(p, xs[i]);
}

}  // namespace

const KernelOps& scalar_kernels() {
  static const KernelOps ops{"scalar", &checkerboard_scalar, &bumps_scalar};
  return ops;
}

}  // namespace hs1d::kernels
