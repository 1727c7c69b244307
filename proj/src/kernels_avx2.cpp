// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// AVX2 variants of the oracle kernels. This translation unit is the only
// one built with -mavx2/-mfma; it mirrors the scalar reference operation
// for operation (same polynomial, same rounding points, same lane and
// combine order), so results are bit-identical, not merely close.

#include "pacing/kernels.hpp"

#if defined(PACING_HAVE_AVX2)

#include <immintrin.h>

#include "pacing/rng.hpp"

namespace pacing {

namespace {

// Low 64 bits of the lanewise product, from 32x32 partial products.
inline __m256i mul64_lo(__m256i a, __m256i b) {
  const __m256i lo = _mm256_mul_epu32(a, b);
  const __m256i cross =
      _mm256_add_epi64(_mm256_mul_epu32(a, _mm256_srli_epi64(b, 32)),
                       _mm256_mul_epu32(_mm256_srli_epi64(a, 32), b));
  return _mm256_add_epi64(lo, _mm256_slli_epi64(cross, 32));
}

inline __m256i mix_bits4(__m256i x) {
  x = mul64_lo(_mm256_xor_si256(x, _mm256_srli_epi64(x, 30)),
               _mm256_set1_epi64x(static_cast<long long>(0xbf58476d1ce4e5b9ULL)));
  x = mul64_lo(_mm256_xor_si256(x, _mm256_srli_epi64(x, 27)),
               _mm256_set1_epi64x(static_cast<long long>(0x94d049bb133111ebULL)));
  return _mm256_xor_si256(x, _mm256_srli_epi64(x, 31));
}

// Exact uint64 -> double for lane values below 2^52, via the exponent trick.
inline __m256d u52_to_double(__m256i x) {
  const __m256d biased = _mm256_castsi256_pd(
      _mm256_or_si256(x, _mm256_set1_epi64x(0x4330000000000000LL)));
  return _mm256_sub_pd(biased, _mm256_set1_pd(0x1.0p52));
}

inline __m256d fast_log4(__m256d x) {
  const __m256i bits = _mm256_castpd_si256(x);
  // Inputs are strictly positive normals, so the shifted sign bit is zero.
  __m256d e = _mm256_sub_pd(u52_to_double(_mm256_srli_epi64(bits, 52)),
                            _mm256_set1_pd(1023.0));
  __m256d m = _mm256_castsi256_pd(_mm256_or_si256(
      _mm256_and_si256(bits, _mm256_set1_epi64x(0x000fffffffffffffLL)),
      _mm256_set1_epi64x(0x3ff0000000000000LL)));
  const __m256d halve =
      _mm256_cmp_pd(m, _mm256_set1_pd(detail::kSqrt2), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), halve);
  e = _mm256_blendv_pd(e, _mm256_add_pd(e, _mm256_set1_pd(1.0)), halve);

  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d z =
      _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  const __m256d w = _mm256_mul_pd(z, z);
  __m256d p = _mm256_set1_pd(detail::kLogPoly[9]);
  for (int i = 8; i >= 0; --i) {
    p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(detail::kLogPoly[i]));
  }
  const __m256d t = _mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(2.0), z), p);
  const __m256d tail = _mm256_fmadd_pd(e, _mm256_set1_pd(detail::kLn2Lo), t);
  return _mm256_fmadd_pd(e, _mm256_set1_pd(detail::kLn2Hi), tail);
}

void exponential_fill_avx2(uint64_t key, uint64_t slot0, double mean,
                           double* out, size_t n) {
  const size_t blocked = n - n % 4;
  const __m256i vkey = _mm256_set1_epi64x(static_cast<long long>(key));
  const __m256i golden = _mm256_set1_epi64x(static_cast<long long>(kGolden));
  const __m256i ramp = _mm256_setr_epi64x(0, 1, 2, 3);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d neg_mean = _mm256_set1_pd(-mean);
  const __m256d scale = _mm256_set1_pd(0x1.0p-52);
  for (size_t i = 0; i < blocked; i += 4) {
    const __m256i slot_plus_1 = _mm256_add_epi64(
        _mm256_set1_epi64x(static_cast<long long>(slot0 + i + 1)), ramp);
    const __m256i bits =
        mix_bits4(_mm256_add_epi64(vkey, mul64_lo(slot_plus_1, golden)));
    const __m256d u =
        _mm256_mul_pd(u52_to_double(_mm256_srli_epi64(bits, 12)), scale);
    const __m256d lg = fast_log4(_mm256_sub_pd(one, u));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(neg_mean, lg));
  }
  for (size_t i = blocked; i < n; ++i) {
    out[i] = exponential_icdf(uniform01(key, slot0 + i), mean);
  }
}

GradientSums gradient_sums_avx2(const double* values, const double* bids,
                                size_t n, double mult, double rho) {
  const size_t blocked = n - n % 4;
  const __m256d vmult = _mm256_set1_pd(mult);
  const __m256d vrho = _mm256_set1_pd(rho);
  __m256d sum_gb = _mm256_setzero_pd();
  __m256d sum_gr = _mm256_setzero_pd();
  __m256d sumsq_gb = _mm256_setzero_pd();
  __m256d sumsq_gr = _mm256_setzero_pd();
  uint64_t wins = 0;
  for (size_t i = 0; i < blocked; i += 4) {
    const __m256d v = _mm256_loadu_pd(values + i);
    const __m256d d = _mm256_loadu_pd(bids + i);
    const __m256d bid = _mm256_mul_pd(vmult, v);
    const __m256d win = _mm256_cmp_pd(bid, d, _CMP_GE_OQ);
    const __m256d p = _mm256_and_pd(d, win);
    const __m256d vx = _mm256_and_pd(v, win);
    const __m256d gb = _mm256_sub_pd(vrho, p);
    const __m256d gr = _mm256_sub_pd(vx, p);
    sum_gb = _mm256_add_pd(sum_gb, gb);
    sum_gr = _mm256_add_pd(sum_gr, gr);
    sumsq_gb = _mm256_fmadd_pd(gb, gb, sumsq_gb);
    sumsq_gr = _mm256_fmadd_pd(gr, gr, sumsq_gr);
    wins += static_cast<uint64_t>(__builtin_popcount(
        static_cast<unsigned>(_mm256_movemask_pd(win))));
  }
  const auto combine = [](__m256d acc) {
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    return (lane[0] + lane[1]) + (lane[2] + lane[3]);
  };
  GradientSums s;
  s.sum_gb = combine(sum_gb);
  s.sum_gr = combine(sum_gr);
  s.sumsq_gb = combine(sumsq_gb);
  s.sumsq_gr = combine(sumsq_gr);
  s.wins = wins;
  for (size_t i = blocked; i < n; ++i) {
    detail::accumulate_gradient_one(values[i], bids[i], mult, rho, s);
  }
  return s;
}

}  // namespace

const KernelOps* avx2_kernels() {
  static const KernelOps ops = {"avx2", exponential_fill_avx2,
                                gradient_sums_avx2};
  return &ops;
}

}  // namespace pacing

#endif  // PACING_HAVE_AVX2
