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

#include "pacing/kernels.hpp"

#include "pacing/rng.hpp"

namespace pacing {

namespace {

void exponential_fill_scalar(uint64_t key, uint64_t slot0, double mean,
                             double* out, size_t n) {
  for (size_t i = 0; i < n; ++i) {
    out[i] = exponential_icdf(uniform01(key, slot0 + i), mean);
  }
}

// Four independent accumulator lanes, element 4b + j landing in lane j, so
// the vector variant's per-lane partial sums are reproduced exactly.
GradientSums gradient_sums_scalar(const double* values, const double* bids,
                                  size_t n, double mult, double rho) {
  GradientSums lane[4];
  const size_t blocked = n - n % 4;
  for (size_t i = 0; i < blocked; i += 4) {
    for (size_t j = 0; j < 4; ++j) {
      detail::accumulate_gradient_one(values[i + j], bids[i + j], mult, rho,
                                      lane[j]);
    }
  }
  GradientSums s;
  s.sum_gb = (lane[0].sum_gb + lane[1].sum_gb) +
             (lane[2].sum_gb + lane[3].sum_gb);
  s.sum_gr = (lane[0].sum_gr + lane[1].sum_gr) +
             (lane[2].sum_gr + lane[3].sum_gr);
  s.sumsq_gb = (lane[0].sumsq_gb + lane[1].sumsq_gb) +
               (lane[2].sumsq_gb + lane[3].sumsq_gb);
  s.sumsq_gr = (lane[0].sumsq_gr + lane[1].sumsq_gr) +
               (lane[2].sumsq_gr + lane[3].sumsq_gr);
  s.wins = lane[0].wins + lane[1].wins + lane[2].wins + lane[3].wins;
  for (size_t i = blocked; i < n; ++i) {
    detail::accumulate_gradient_one(values[i], bids[i], mult, rho, s);
  }
  return s;
}

}  // namespace

const KernelOps& scalar_kernels() {
  static const KernelOps ops = {"scalar", exponential_fill_scalar,
                                gradient_sums_scalar};
  return ops;
}

}  // namespace pacing
