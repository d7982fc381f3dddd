#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>

#include "hs1d/kernels.hpp"
#include "hs1d/rng.hpp"

// Per-point reference implementations. The AVX2 kernels replicate these
// operation-for-operation; tails of vector batches are handled by these same
// functions, so scalar/vector equivalence is exact.

namespace hs1d::kernels::detail {

inline double checkerboard_point(const LatticeLevelArgs& p, double x) {
  const double u = x * p.scale + p.shift;
  const double c = std::floor(u * p.inv_cell);
  const auto k = static_cast<std::int64_t>(c);
  const double r = rng::u01(rng::cell_hash(p.comp_seed, k));
  auto idx = static_cast<std::size_t>(r * static_cast<double>(p.n_levels));
  if (idx >= p.n_levels) idx = p.n_levels - 1;
  return p.levels[idx];
}

inline double bump_point(const BumpArgs& p, double x) {
  const double u = x * p.scale + p.shift;
  const double c = std::floor(u * p.inv_cell);
  const double center = (c + 0.5) * p.cell;
  const double s = (u - center) * p.inv_width;
  const double s2 = s * s;
  const double q = 1.0 - s2;
  const double w = (s2 < 1.0) ? q * q : 0.0;
  const double amp_k = p.amp * rng::u01(rng::cell_hash(p.comp_seed, static_cast<std::int64_t>(c)));
  const double v = p.base + amp_k * w;
  return p.square ? v * v : v;
}

}  // namespace hs1d::kernels::detail
