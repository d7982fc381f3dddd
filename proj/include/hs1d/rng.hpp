#pragma once

#include <bit>
#include <cstdint>

// Counter-based hashing: every random quantity is a pure function of
// (seed, tag, counter), so field evaluation is order-independent and
// shift-exact. The SIMD kernels replicate these exact operations lane-wise;
// any change here must be mirrored in kernels_avx2.cpp.

namespace hs1d::rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

// Per-component sub-seed (components: A=1, B=2, F=3, G=4, lattice shift=5, ...).
inline std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t tag) {
  return mix64(mix64(seed + kGolden) ^ (tag * kGolden));
}

// Hash of one lattice cell index under a component sub-seed.
inline std::uint64_t cell_hash(std::uint64_t comp_seed, std::int64_t k) {
  return mix64(comp_seed + kGolden * static_cast<std::uint64_t>(k));
}

// Uniform double in [0, 1) from the top 52 bits; exact, branchless, and
// reproducible bit-for-bit in the vector kernels.
inline double u01(std::uint64_t h) {
  return std::bit_cast<double>((h >> 12) | 0x3FF0000000000000ull) - 1.0;
}

}  // namespace hs1d::rng
