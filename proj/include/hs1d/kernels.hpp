#pragma once

#include <cstddef>
#include <cstdint>

// Batch field-evaluation kernels: scalar reference implementations plus an
// AVX2 variant selected at runtime. The two must produce bit-identical
// output (enforced by tests); the whole project is compiled with
// -ffp-contract=off so scalar mul+add sequences match the vector lanes.
//
// Inputs are raw x arrays; each kernel applies the affine map
// u = x*scale + shift (u is the lattice coordinate: fast variable minus the
// realization's lattice shift) and evaluates one component field at every u.

namespace hs1d::kernels {

struct LatticeLevelArgs {
  std::uint64_t comp_seed = 0;
  double scale = 1;     // x -> u multiplier (direction / epsilon folded in)
  double shift = 0;     // x -> u offset
  double inv_cell = 1;  // 1 / cell_width
  const double* levels = nullptr;
  std::size_t n_levels = 0;
};

struct BumpArgs {
  std::uint64_t comp_seed = 0;
  double scale = 1;
  double shift = 0;
  double inv_cell = 1;
  double cell = 1;
  double inv_width = 2;
  double base = 1;
  double amp = 0;
  bool square = false;  // G component: emit s(u)^2
};

using LatticeLevelFn = void (*)(const LatticeLevelArgs&, const double* xs, std::size_t n,
                                double* out);
using BumpFn = void (*)(const BumpArgs&, const double* xs, std::size_t n, double* out);

struct KernelOps {
  const char* name;
  LatticeLevelFn checkerboard;
  BumpFn bumps;
};

const KernelOps& scalar_kernels();

// nullptr when the build or the CPU lacks AVX2.
const KernelOps* avx2_kernels();

// Runtime selection, decided once: AVX2 when available, scalar otherwise.
// HS1D_KERNELS=scalar|avx2 overrides (avx2 falls back to scalar with a
// warning on unsupported CPUs).
const KernelOps& active_kernels();

}  // namespace hs1d::kernels
