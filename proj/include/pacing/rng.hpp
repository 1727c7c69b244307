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

// Deterministic counter-based randomness.
//
// Every random draw in this codebase is an inverse-CDF transform of a 52-bit
// uniform produced by hashing (key, slot). Draws are addressable: episode i,
// round t, slot s always yields the same number, independent of evaluation
// order, thread count, or platform libm. That property is what makes
// common-random-number bisection exact and command re-runs byte-identical.
//
// std::*_distribution is deliberately not used anywhere: its output sequences
// are implementation-defined and would tie results to one standard library.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

namespace pacing {

inline constexpr uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// Finalizer from the splitmix64 reference implementation.
inline uint64_t mix_bits(uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// The splitmix64 stream with seed `key`, evaluated at position `slot`.
inline uint64_t uniform_bits(uint64_t key, uint64_t slot) {
  return mix_bits(key + (slot + 1) * kGolden);
}

// Mixes (seed, stream, substream) into an independent stream key.
inline uint64_t derive_key(uint64_t seed, uint64_t stream,
                           uint64_t substream = 0) {
  uint64_t h = mix_bits(seed + kGolden);
  h = mix_bits(h ^ (stream + 0xbf58476d1ce4e5b9ULL));
  h = mix_bits(h ^ (substream + 0x94d049bb133111ebULL));
  return h;
}

// Top 52 bits as a double in [0, 1). 52 rather than 53 bits so the SIMD code
// path can use the exponent-trick integer-to-double conversion and still
// produce bit-identical values.
inline double to_unit(uint64_t bits) {
  return static_cast<double>(bits >> 12) * 0x1.0p-52;
}

inline double uniform01(uint64_t key, uint64_t slot) {
  return to_unit(uniform_bits(key, slot));
}

// Explicit, copyable random state: a stream key plus the index of the next
// slot. Copy it to fork, advance it by drawing.
struct CounterRng {
  uint64_t key = 0;
  uint64_t slot = 0;

  CounterRng() = default;
  CounterRng(uint64_t seed, uint64_t stream, uint64_t substream = 0)
      : key(derive_key(seed, stream, substream)) {}

  uint64_t next_bits() { return uniform_bits(key, slot++); }
  double next_unit() { return to_unit(next_bits()); }

  // Same stream repositioned at slot s.
  CounterRng at(uint64_t s) const {
    CounterRng r = *this;
    r.slot = s;
    return r;
  }
};

namespace detail {

inline constexpr double kLn2Hi = 6.93147180369123816490e-01;
inline constexpr double kLn2Lo = 1.90821492927058770002e-10;
inline constexpr double kSqrt2 = 1.4142135623730951;
// Coefficients of log(m) = 2z * sum w^i/(2i+1), w = z^2, z = (m-1)/(m+1).
inline constexpr double kLogPoly[10] = {
    1.0,        1.0 / 3.0,  1.0 / 5.0,  1.0 / 7.0,  1.0 / 9.0,
    1.0 / 11.0, 1.0 / 13.0, 1.0 / 15.0, 1.0 / 17.0, 1.0 / 19.0};

// Polynomial log over normal positive doubles, ~2 ulp. Not a libm
// replacement (no subnormal/zero/inf/nan handling). The SIMD kernels mirror
// this exact operation sequence, so scalar and vector code produce
// bit-identical draws.
inline double fast_log(double x) {
  const uint64_t bits = std::bit_cast<uint64_t>(x);
  double e = static_cast<double>(static_cast<int>((bits >> 52) & 0x7ff) - 1023);
  double m = std::bit_cast<double>((bits & 0x000fffffffffffffULL) |
                                   0x3ff0000000000000ULL);
  if (m > kSqrt2) {
    m *= 0.5;
    e += 1.0;
  }
  const double z = (m - 1.0) / (m + 1.0);
  const double w = z * z;
  double p = kLogPoly[9];
  for (int i = 8; i >= 0; --i) p = std::fma(p, w, kLogPoly[i]);
  const double tail = std::fma(e, kLn2Lo, (2.0 * z) * p);
  return std::fma(e, kLn2Hi, tail);
}

}  // namespace detail

// Exponential with the given mean, u in [0, 1).
inline double exponential_icdf(double u, double mean) {
  return -mean * detail::fast_log(1.0 - u);
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

// Standard normal quantile: Acklam's rational approximation polished with one
// Halley step against erfc, giving ~1e-15 absolute error.
inline double normal_icdf(double u) {
  constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                           -2.759285104469687e+02, 1.383577518672690e+02,
                           -3.066479806614716e+01, 2.506628277459239e+00};
  constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                           -1.556989798598866e+02, 6.680131188771972e+01,
                           -1.328068155288572e+01};
  constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                           -2.400758277161838e+00, -2.549732539343734e+00,
                           4.374664141464968e+00,  2.938163982698783e+00};
  constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                           2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double plow = 0.02425;

  u = std::clamp(u, 1e-300, 1.0 - 1e-16);
  double x;
  if (u < plow) {
    const double q = std::sqrt(-2.0 * std::log(u));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (u <= 1.0 - plow) {
    const double q = u - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - u));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // Halley refinement.
  const double err = normal_cdf(x) - u;
  const double un = err * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
  return x - un / (1.0 + 0.5 * x * un);
}

// Normal(mean, sd) conditioned on [lo, hi], via CDF-interval rescaling.
inline double truncated_normal_icdf(double u, double mean, double sd,
                                    double lo, double hi) {
  const double za = normal_cdf((lo - mean) / sd);
  const double zb = normal_cdf((hi - mean) / sd);
  double up = za + u * (zb - za);
  up = std::clamp(up, 1e-16, 1.0 - 1e-16);
  return std::clamp(mean + sd * normal_icdf(up), lo, hi);
}

// Poisson by summing the pmf until the CDF passes u. Exact inversion for the
// small rates used here (one uniform per draw, monotone in u and in lambda).
inline int poisson_icdf(double u, double lambda) {
  if (lambda <= 0.0) return 0;
  double p = std::exp(-lambda);
  double cdf = p;
  int k = 0;
  const int cap =
      static_cast<int>(lambda + 40.0 * std::sqrt(lambda + 1.0) + 64.0);
  while (u > cdf && k < cap) {
    ++k;
    p *= lambda / k;
    cdf += p;
  }
  return k;
}

}  // namespace pacing
