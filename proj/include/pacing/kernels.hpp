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

// Data-parallel kernels behind the Monte Carlo oracle: batched exponential
// sampling and the masked second-price gradient reduction. A scalar
// reference implementation always exists; an AVX2 variant is selected at
// runtime when the build and the CPU support it. The two are bit-identical
// by construction: they share one polynomial log, every fused multiply-add
// is explicit, and sums use four fixed lane accumulators combined as
// ((l0 + l1) + (l2 + l3)) with the remainder folded in afterwards.

#ifndef PACING_KERNELS_HPP_
#define PACING_KERNELS_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>

namespace pacing {

enum class KernelKind { kAuto, kScalar, kAvx2 };

KernelKind kernel_kind_from_string(const std::string& name);

// Sums over i of the two per-sample gradients at bid multiplier `mult`:
// budget slack rho - p_i and surplus v_i x_i - p_i, where sample i is won
// iff mult * v_i >= d_i (then p_i = d_i, x_i = 1). Squared sums feed
// standard-error estimates.
struct GradientSums {
  double sum_gb = 0.0;
  double sum_gr = 0.0;
  double sumsq_gb = 0.0;
  double sumsq_gr = 0.0;
  uint64_t wins = 0;
};

struct KernelOps {
  const char* name;
  // out[i] = exponential_icdf(uniform01(key, slot0 + i), mean)
  void (*exponential_fill)(uint64_t key, uint64_t slot0, double mean,
                           double* out, size_t n);
  GradientSums (*second_price_gradient_sums)(const double* values,
                                             const double* bids, size_t n,
                                             double mult, double rho);
};

// True when the AVX2 variant is both compiled in and runnable on this CPU.
bool avx2_supported();

const KernelOps& scalar_kernels();
// Null when the build carries no AVX2 variant.
const KernelOps* avx2_kernels();

// Resolves kAuto through the process-wide override, then CPU detection.
// Requesting kAvx2 where unsupported throws ConfigError.
const KernelOps& kernel_ops(KernelKind kind = KernelKind::kAuto);

// Process-wide preference applied when callers pass kAuto (set from the
// command line); kAuto restores CPU detection.
void set_kernel_override(KernelKind kind);
KernelKind kernel_override();

namespace detail {

// Per-element reduction step shared by the scalar lanes and both tails.
// Keep every multiply separated from the following add (or explicitly
// fused): the AVX2 build of this same function must not be contracted
// differently.
inline void accumulate_gradient_one(double value, double bid_to_beat,
                                    double mult, double rho,
                                    GradientSums& s) {
  const double bid = mult * value;
  const bool win = bid >= bid_to_beat;
  const double p = win ? bid_to_beat : 0.0;
  const double vx = win ? value : 0.0;
  const double gb = rho - p;
  const double gr = vx - p;
  s.sum_gb += gb;
  s.sum_gr += gr;
  s.sumsq_gb = std::fma(gb, gb, s.sumsq_gb);
  s.sumsq_gr = std::fma(gr, gr, s.sumsq_gr);
  s.wins += win ? 1u : 0u;
}

}  // namespace detail

}  // namespace pacing

#endif  // PACING_KERNELS_HPP_
