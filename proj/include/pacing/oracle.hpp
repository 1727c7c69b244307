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

// Ground-truth side of the library: expected gradients of the two pacing
// constraints, their zero crossings, the dual objective, fluid benchmarks,
// and an exact small-instance offline optimum. Environments with closed
// forms (the fixed stress instances, campaign expected curves) are evaluated
// exactly; the stochastic second-price environment is estimated by common
// random numbers so every curve seen during a bisection comes from one
// frozen sample batch.

#ifndef PACING_ORACLE_HPP_
#define PACING_ORACLE_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pacing/campaign.hpp"
#include "pacing/envs.hpp"

namespace pacing {

// Estimates of the per-round constraint gradients at bid multiplier `mult`:
//   g_budget = rho - E[p(mult * v)]      (budget slack)
//   g_ros    = E[v x(mult * v) - p(...)] (return-on-spend surplus)
// Standard errors are zero on closed-form paths. Second moments and the win
// rate are diagnostics.
struct GradientEstimate {
  double g_budget = 0.0;
  double g_ros = 0.0;
  double se_budget = 0.0;
  double se_ros = 0.0;
  double second_moment_budget = 0.0;
  double second_moment_ros = 0.0;
  double win_rate = 0.0;
  double value_per_round = 0.0;  // E[v x] at this multiplier
  int samples = 0;
};

GradientEstimate expected_gradients(const Env& env, double mult,
                                    int n = 1'000'000, uint64_t seed = 1);

struct Crossing {
  double k = 0.0;
  double se = 0.0;     // delta-method: se(gradient) / |slope|
  double slope = 0.0;  // central finite difference at k
};

struct CrossingPoints {
  Crossing ros;
  Crossing budget;
  int samples = 0;
};

// Locates the zero of each gradient curve on (0, 4 * max(1, 1/rho)] by a
// 200-point scan and bisection to `tol`. Throws AssumptionViolation when a
// curve has no sign change on the range or more than one.
CrossingPoints crossing_points(const Env& env, double tol = 1e-4,
                               int n = 1'000'000, uint64_t seed = 1);

struct DualValue {
  double value = 0.0;
  double se = 0.0;
};

// Lagrangian upper bound per round at multipliers (lambda, mu): rho * mu
// plus the expected maximized inner round profit. Exact for the stress
// instances, campaigns (knot maximum), and finite round lists; Monte Carlo
// for the stochastic second-price environment. lambda = mu = 0 is rejected
// (the inner maximum is unbounded).
DualValue dual_function(const Env& env, double lambda, double mu,
                        int n = 1'000'000, uint64_t seed = 1);

enum class BindingConstraint { kNone, kBudget, kRos };

std::string to_string(BindingConstraint b);

struct FluidBenchmark {
  double k_star = 0.0;
  double value_per_round = 0.0;
  double spend_per_round = 0.0;
  BindingConstraint binding = BindingConstraint::kNone;
};

// Largest multiplier k in [0, k_max] with spend(k) <= rho and
// conv(k) >= spend(k), by bisection (the feasible set is an interval from 0
// for the monotone/concave curves used here). The binding certificate is
// whichever constraint fails just above k_star.
FluidBenchmark fluid_benchmark(const std::function<double(double)>& conv,
                               const std::function<double(double)>& spend,
                               double rho, double k_max, double tol = 1e-9);

// Campaign fluid benchmark in money per round: conv(k) is expected value,
// spend(k) expected cost, rho the per-round budget share.
FluidBenchmark fluid_benchmark(const CampaignLandscape& campaign);

struct OfflineOpt {
  double value = 0.0;
  std::string warning;
};

// Exact offline optimum of a short stream (at most 20 rounds) under the
// ex-post budget rho * T and spend <= value constraints. Second-price
// streams are solved by subset enumeration; mixed streams fall back to a
// spend-discretized dynamic program (resolution-conservative, never above
// the true optimum).
OfflineOpt offline_opt_small(const std::vector<AuctionSample>& stream,
                             double rho, double resolution = 1e-3);

// Expected allocation / payment / won value per round of the stochastic
// second-price environment at multiplier k, by adaptive Simpson quadrature
// over the conditional-on-value closed forms. Independent of the Monte
// Carlo sampler; used to cross-check it.
struct ExpectedCurvePoint {
  double alloc = 0.0;
  double payment = 0.0;
  double value_won = 0.0;
};

ExpectedCurvePoint exponential_env_quadrature(
    const ExponentialSecondPriceEnv& env, double k, double tol = 1e-12);

// Crossings of the quadrature curves (no sampling error).
CrossingPoints exponential_env_quadrature_crossings(
    const ExponentialSecondPriceEnv& env, double tol = 1e-10);

// Recursive adaptive Simpson integration to absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol);

// Per-round value of the better fluid multiplier for this environment
// (closed form where available, otherwise the frozen-batch estimate).
// Multiplied by the horizon it is the reward benchmark used in reports.
struct EnvBenchmark {
  double k_star = 0.0;
  double value_per_round = 0.0;
};

EnvBenchmark env_benchmark(const Env& env, int n = 1'000'000,
                           uint64_t seed = 1);

}  // namespace pacing

#endif  // PACING_ORACLE_HPP_
