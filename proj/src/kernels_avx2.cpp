// AVX2 variants of the field-sampling kernels. Each lane performs exactly the
// arithmetic of kernels_detail.hpp (no FMA: the scalar build uses separate
// mul/add under -ffp-contract=off). 64-bit hashing is emulated with 32-bit
// multiplies; double<->int64 conversions use the 2^52+2^51 magic constant,
// valid for |value| < 2^51 (lattice indices stay far below that).

#if defined(__AVX2__)

#include <immintrin.h>

#include <cstdint>

#include "hs1d/kernels.hpp"
#include "kernels_detail.hpp"

namespace hs1d::kernels {

namespace {

inline __m256i mullo64(__m256i a, __m256i b) {
  const __m256i lo = _mm256_mul_epu32(a, b);
  __m256i cross = _mm256_add_epi64(_mm256_mul_epu32(a, _mm256_srli_epi64(b, 32)),
                                   _mm256_mul_epu32(_mm256_srli_epi64(a, 32), b));
  cross = _mm256_slli_epi64(cross, 32);
  return _mm256_add_epi64(lo, cross);
}

inline __m256i mix64(__m256i z) {
  z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 30));
  z = mullo64(z, _mm256_set1_epi64x(static_cast<long long>(0xBF58476D1CE4E5B9ull)));
  z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 27));
  z = mullo64(z, _mm256_set1_epi64x(static_cast<long long>(0x94D049BB133111EBull)));
  z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 31));
  return z;
}

inline __m256i cell_hash(std::uint64_t comp_seed, __m256i k) {
  const __m256i stride = _mm256_set1_epi64x(static_cast<long long>(rng::kGolden));
  const __m256i base = _mm256_set1_epi64x(static_cast<long long>(comp_seed));
  return mix64(_mm256_add_epi64(base, mullo64(stride, k)));
}

// Exact for integral |v| < 2^51.
inline __m256i double_to_i64(__m256d v) {
  const __m256d magic = _mm256_set1_pd(6755399441055744.0);  // 2^52 + 2^51
  const __m256d shifted = _mm256_add_pd(v, magic);
  return _mm256_sub_epi64(_mm256_castpd_si256(shifted), _mm256_castpd_si256(magic));
}

inline __m256d u01(__m256i h) {
  const __m256i mant = _mm256_or_si256(_mm256_srli_epi64(h, 12),
                                       _mm256_set1_epi64x(0x3FF0000000000000ll));
  return _mm256_sub_pd(_mm256_castsi256_pd(mant), _mm256_set1_pd(1.0));
}

void checkerboard_avx2(const LatticeLevelArgs& p, const double* xs, std::size_t n, double* out) {
  const __m256d scale = _mm256_set1_pd(p.scale);
  const __m256d shift = _mm256_set1_pd(p.shift);
  const __m256d inv_cell = _mm256_set1_pd(p.inv_cell);
  const __m256d n_levels = _mm256_set1_pd(static_cast<double>(p.n_levels));
  const __m128i max_idx = _mm_set1_epi32(static_cast<int>(p.n_levels - 1));
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(xs + i);
    const __m256d u = _mm256_add_pd(_mm256_mul_pd(x, scale), shift);
    const __m256d c = _mm256_floor_pd(_mm256_mul_pd(u, inv_cell));
    const __m256i h = cell_hash(p.comp_seed, double_to_i64(c));
    const __m256d r = u01(h);
    __m128i idx = _mm256_cvttpd_epi32(_mm256_mul_pd(r, n_levels));
    idx = _mm_min_epi32(idx, max_idx);
    _mm256_storeu_pd(out + i, _mm256_i32gather_pd(p.levels, idx, 8));
  }
  for (; i < n; ++i) out[i] = detail::checkerboard_point(p, xs[i]);
}

void bumps_avx2(const BumpArgs& p, const double* xs, std::size_t n, double* out) {
  const __m256d scale = _mm256_set1_pd(p.scale);
  const __m256d shift = _mm256_set1_pd(p.shift);
  const __m256d inv_cell = _mm256_set1_pd(p.inv_cell);
  const __m256d cell = _mm256_set1_pd(p.cell);
  const __m256d inv_width = _mm256_set1_pd(p.inv_width);
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d base = _mm256_set1_pd(p.base);
  const __m256d amp = _mm256_set1_pd(p.amp);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(xs + i);
    const __m256d u = _mm256_add_pd(_mm256_mul_pd(x, scale), shift);
    const __m256d c = _mm256_floor_pd(_mm256_mul_pd(u, inv_cell));
    const __m256d center = _mm256_mul_pd(_mm256_add_pd(c, half), cell);
    const __m256d s = _mm256_mul_pd(_mm256_sub_pd(u, center), inv_width);
    const __m256d s2 = _mm256_mul_pd(s, s);
    const __m256d q = _mm256_sub_pd(one, s2);
    const __m256d inside = _mm256_cmp_pd(s2, one, _CMP_LT_OQ);
    const __m256d w = _mm256_and_pd(_mm256_mul_pd(q, q), inside);
    const __m256d amp_k = _mm256_mul_pd(amp, u01(cell_hash(p.comp_seed, double_to_i64(c))));
    __m256d v = _mm256_add_pd(base, _mm256_mul_pd(amp_k, w));
    if (p.square) v = _mm256_mul_pd(v, v);
    _mm256_storeu_pd(out + i, v);
  }
  for (; i < n; ++i) out[i] = detail::bump_point(p, xs[i]);
}

}  // namespace

const KernelOps* avx2_kernels_impl() {
  static const KernelOps ops{"avx2", &checkerboard_avx2, &bumps_avx2};
  return &ops;
}

}  // namespace hs1d::kernels

#endif  // __AVX2__
