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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstddef>
#include <vector>

#include "pacing/errors.hpp"
#include "pacing/kernels.hpp"
#include "pacing/rng.hpp"

using namespace pacing;

namespace {

struct Batch {
  std::vector<double> values, bids;
};

Batch make_batch(size_t n, uint64_t seed, double mult_for_ties) {
  Batch b;
  b.values.resize(n);
  b.bids.resize(n);
  CounterRng rng(seed, 0x4b45524eULL);
  for (size_t i = 0; i < n; ++i) {
    b.values[i] = exponential_icdf(rng.next_unit(), 0.5);
    b.bids[i] = exponential_icdf(rng.next_unit(), 1.0);
    // Every 7th sample ties exactly: ties must win in every variant.
    if (i % 7 == 3) b.bids[i] = mult_for_ties * b.values[i];
  }
  return b;
}

}  // namespace

TEST_CASE("scalar exponential fill matches the per-slot definition exactly") {
  const KernelOps& ops = scalar_kernels();
  CHECK(std::string(ops.name) == "scalar");

  const uint64_t key = derive_key(7, 0x46494c4cULL);
  const size_t n = 257;
  std::vector<double> out(n, -1.0);
  ops.exponential_fill(key, 100, 0.5, out.data(), n);
  for (size_t i = 0; i < n; ++i) {
    const double want = exponential_icdf(uniform01(key, 100 + i), 0.5);
    CHECK(out[i] == want);  // bitwise
  }
  ops.exponential_fill(key, 0, 1.0, out.data(), 0);  // n = 0 is a no-op
}

TEST_CASE("scalar gradient sums: one-sample cases are exact") {
  const KernelOps& ops = scalar_kernels();
  {
    double v = 1.0, d = 0.5;
    GradientSums s = ops.second_price_gradient_sums(&v, &d, 1, 1.0, 0.3);
    CHECK(s.wins == 1);
    CHECK(s.sum_gb == doctest::Approx(-0.2).epsilon(1e-15));
    CHECK(s.sum_gr == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s.sumsq_gb == doctest::Approx(0.04).epsilon(1e-15));
    CHECK(s.sumsq_gr == doctest::Approx(0.25).epsilon(1e-15));
  }
  {
    double v = 1.0, d = 1.0;  // exact tie at mult 1: the tie wins
    GradientSums s = ops.second_price_gradient_sums(&v, &d, 1, 1.0, 0.3);
    CHECK(s.wins == 1);
    CHECK(s.sum_gr == doctest::Approx(0.0));
  }
  {
    double v = 1.0, d = 1.125;  // lost: p = 0, vx = 0
    GradientSums s = ops.second_price_gradient_sums(&v, &d, 1, 1.0, 0.3);
    CHECK(s.wins == 0);
    CHECK(s.sum_gb == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(s.sum_gr == 0.0);
  }
}

TEST_CASE("scalar gradient sums agree with a simple sequential reference") {
  const KernelOps& ops = scalar_kernels();
  const double mult = 1.7, rho = 0.5625;
  Batch b = make_batch(1000, 3, mult);

  GradientSums want;
  for (size_t i = 0; i < b.values.size(); ++i) {
    detail::accumulate_gradient_one(b.values[i], b.bids[i], mult, rho, want);
  }
  // Different accumulation order: tolerance instead of bit equality.
  GradientSums got = ops.second_price_gradient_sums(
      b.values.data(), b.bids.data(), b.values.size(), mult, rho);
  CHECK(got.wins == want.wins);
  CHECK(got.sum_gb == doctest::Approx(want.sum_gb).epsilon(1e-12));
  CHECK(got.sum_gr == doctest::Approx(want.sum_gr).epsilon(1e-12));
  CHECK(got.sumsq_gb == doctest::Approx(want.sumsq_gb).epsilon(1e-12));
  CHECK(got.sumsq_gr == doctest::Approx(want.sumsq_gr).epsilon(1e-12));
}

TEST_CASE("vector variant is bit-identical to the scalar reference") {
  if (!avx2_supported()) {
    MESSAGE("AVX2 not available on this host; skipping the identity check");
    return;
  }
  const KernelOps* simd = avx2_kernels();
  REQUIRE(simd != nullptr);
  CHECK(std::string(simd->name) == "avx2");
  const KernelOps& ref = scalar_kernels();

  for (size_t n : {0, 1, 2, 3, 4, 5, 7, 8, 31, 1000, 1001}) {
    const uint64_t key = derive_key(n + 1, 0x53494d44ULL);
    std::vector<double> a(n + 1, -7.0), b(n + 1, -7.0);
    ref.exponential_fill(key, 11, 0.5, a.data(), n);
    simd->exponential_fill(key, 11, 0.5, b.data(), n);
    for (size_t i = 0; i < n; ++i) CHECK(a[i] == b[i]);  // bitwise
    CHECK(a[n] == -7.0);  // no write past the end
    CHECK(b[n] == -7.0);

    for (double mult : {0.25, 1.0, 4.0}) {
      Batch batch = make_batch(n, n + 17, mult);
      GradientSums s = ref.second_price_gradient_sums(
          batch.values.data(), batch.bids.data(), n, mult, 0.5625);
      GradientSums v = simd->second_price_gradient_sums(
          batch.values.data(), batch.bids.data(), n, mult, 0.5625);
      CHECK(s.wins == v.wins);
      CHECK(s.sum_gb == v.sum_gb);      // bitwise
      CHECK(s.sum_gr == v.sum_gr);      // bitwise
      CHECK(s.sumsq_gb == v.sumsq_gb);  // bitwise
      CHECK(s.sumsq_gr == v.sumsq_gr);  // bitwise
    }
  }
}

TEST_CASE("kernel selection") {
  CHECK(kernel_kind_from_string("auto") == KernelKind::kAuto);
  CHECK(kernel_kind_from_string("scalar") == KernelKind::kScalar);
  CHECK(kernel_kind_from_string("avx2") == KernelKind::kAvx2);
  CHECK_THROWS_WITH_AS(kernel_kind_from_string("sse9"),
                       "unknown kernel 'sse9' (choices: auto, scalar, avx2)",
                       ConfigError);

  CHECK(std::string(kernel_ops(KernelKind::kScalar).name) == "scalar");
  if (avx2_supported()) {
    CHECK(std::string(kernel_ops(KernelKind::kAvx2).name) == "avx2");
    CHECK(std::string(kernel_ops().name) == "avx2");  // auto prefers simd
  } else {
    CHECK_THROWS_AS(kernel_ops(KernelKind::kAvx2), ConfigError);
    CHECK(std::string(kernel_ops().name) == "scalar");
  }

  // The process-wide override redirects kAuto only.
  set_kernel_override(KernelKind::kScalar);
  CHECK(kernel_override() == KernelKind::kScalar);
  CHECK(std::string(kernel_ops().name) == "scalar");
  CHECK(std::string(kernel_ops(KernelKind::kScalar).name) == "scalar");
  set_kernel_override(KernelKind::kAuto);
  CHECK(kernel_override() == KernelKind::kAuto);
}
