#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "hs1d/kernels.hpp"
#include "hs1d/rng.hpp"

using namespace hs1d;

// The AVX2 kernels must reproduce the scalar reference bit-for-bit, including
// remainder tails and negative/large lattice coordinates.

namespace {

std::vector<double> random_xs(std::size_t n, double span, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-span, span);
  std::vector<double> xs(n);
  for (auto& x : xs) x = u(gen);
  return xs;
}

}  // namespace

TEST_CASE("checkerboard kernel: avx2 bit-identical to scalar") {
  const kernels::KernelOps* vec = kernels::avx2_kernels();
  if (vec == nullptr) return;  // platform without AVX2: dispatch covered elsewhere

  const std::vector<double> levels = {1.0, 2.0, 3.5, 0.25, 7.0};
  for (std::size_t n : {1u, 3u, 4u, 7u, 64u, 1001u, 100000u}) {
    kernels::LatticeLevelArgs args;
    args.comp_seed = rng::sub_seed(42, 1);
    args.scale = 8.0;  // like 1/eps = 8
    args.shift = -0.37251;
    args.inv_cell = 1.0 / 0.125;
    args.levels = levels.data();
    args.n_levels = levels.size();
    auto xs = random_xs(n, 1e5, 7 + n);
    std::vector<double> a(n), b(n);
    kernels::scalar_kernels().checkerboard(args, xs.data(), n, a.data());
    vec->checkerboard(args, xs.data(), n, b.data());
    for (std::size_t i = 0; i < n; ++i) {
      REQUIRE(a[i] == b[i]);
    }
  }
}

TEST_CASE("bump kernel: avx2 bit-identical to scalar, plain and squared") {
  const kernels::KernelOps* vec = kernels::avx2_kernels();
  if (vec == nullptr) return;

  for (bool square : {false, true}) {
    kernels::BumpArgs args;
    args.comp_seed = rng::sub_seed(99, 4);
    args.scale = -2.0;
    args.shift = 0.6181;
    args.inv_cell = 1.0;
    args.cell = 1.0;
    args.inv_width = 1.0 / 0.5;
    args.base = 0.4;
    args.amp = 0.6;
    args.square = square;
    const std::size_t n = 31337;
    auto xs = random_xs(n, 3e4, square ? 11 : 12);
    std::vector<double> a(n), b(n);
    kernels::scalar_kernels().bumps(args, xs.data(), n, a.data());
    vec->bumps(args, xs.data(), n, b.data());
    for (std::size_t i = 0; i < n; ++i) {
      REQUIRE(a[i] == b[i]);
    }
  }
}

TEST_CASE("active kernel dispatch returns a usable table") {
  const auto& ops = kernels::active_kernels();
  CHECK(ops.checkerboard != nullptr);
  CHECK(ops.bumps != nullptr);
}
