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

// Dual-multiplier pacing: bid formulas, multiplicative dual updates, and the
// episode loop that ties them to an environment.
//
// Three architectures share one dual state (lambda for the value-per-spend
// constraint, mu for the budget constraint):
//   DualOptimal  bid = ((1+lambda)/(mu+lambda)) * v
//   Sequential   bid = ((1+lambda)/lambda) * (1/mu) * v
//   Min          bid = min((1+lambda)/lambda, 1/mu) * v
// all capped by the remaining budget.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pacing/auction.hpp"

namespace pacing {

class Env;  // defined in envs.hpp

enum class PacerKind { DualOptimal, Sequential, Min };

const char* to_string(PacerKind kind);

struct DualState {
  double lambda = 1.0;
  double mu = 0.0;
  double remaining_budget = 0.0;
  double rho = 0.0;   // per-round budget rate; total budget is rho * T
  double alpha = 0.0; // step size for lambda
  double eta = 0.0;   // step size for mu
  int round = 0;      // rounds completed
  bool stopped = false;
};

// Multipliers are clamped to this range after every update. The rails are
// unreachable for the sound pacers at any tested horizon; they exist because
// the Sequential pacer's lambda grows exponentially on instances where it
// fails, and would overflow a double near T ~ 1e6.
inline constexpr double kDualFloor = 1e-300;
inline constexpr double kDualCeil = 1e300;

// The bid the given architecture submits from this state. Throws
// std::logic_error if the state is stopped or a multiplier the formula
// divides by is not positive.
double compute_bid(PacerKind kind, const DualState& state, double value);

// The raw bid-to-value ratio each architecture implies at multipliers
// (lambda, mu), before budget capping. Same positivity requirements as
// compute_bid.
double bid_multiplier(PacerKind kind, double lambda, double mu);

// One mirror-descent step from the realized outcome:
//   lambda' = lambda * exp(-alpha * (v*x - p))
//   mu'     = mu     * exp(-eta   * (rho - p))
// plus budget decrement, round increment, and the hard-stop check
// (stop once spend so far is within 1 of the total budget).
DualState update_duals(const DualState& state, const BidOutcome& outcome,
                       double value);

struct EpisodeConfig {
  double rho = 1.0;
  double alpha = -1.0;       // negative means the 1/sqrt(T) default;
  double eta = -1.0;         //   an explicit zero freezes that multiplier
  double lambda_init = 1.0;
  double mu_init = -1.0;     // negative means the rho default
  bool enforce_invariants = true;
};

// Fully resolved copy: defaults substituted for the sentinel values.
EpisodeConfig resolve_config(const EpisodeConfig& cfg, int horizon);

struct Trajectory {
  std::vector<double> bid, allocation, payment, value_gained;
  std::vector<double> lambda, mu, remaining_budget;
  int stopping_time = 0;  // first round whose spend came within 1 of the
                          // budget; T if that never happened
  int zeroed_rounds = 0;  // rounds discarded by the overspend guard
  PacerKind kind = PacerKind::Min;
  EpisodeConfig config;   // resolved values
  int horizon = 0;
  double initial_budget = 0.0;

  double total_value() const;
  double total_spend() const;       // initial budget minus final remaining
  double ros_violation() const;     // sum of (payment - value_gained)
  double final_remaining() const;
};

// Runs one episode of `horizon` rounds drawn from `env` under `seed`.
// Rounds after the stop keep zeros and frozen multipliers. A round whose
// realized cost exceeds the remaining budget is recorded with cost and value
// zeroed (possible only for landscape draws, where cost is resolved after
// the bid). Throws std::domain_error for an empty stream and ConfigError for
// invalid config values.
//
// With config.enforce_invariants set, breaches of the ex-post bounds below
// raise InvariantViolation.
Trajectory run_episode(PacerKind kind, const Env& env, int horizon,
                       const EpisodeConfig& cfg, uint64_t seed);

// The ex-post bounds the Min architecture guarantees (and this simulator
// asserts when armed):
//   - net constraint violation sum(p - v*x) <= ros_violation_bound(T, l1)
//     when alpha = 1/sqrt(T),
//   - mu_t <= mu_cap(rho) for t <= tau when eta = 1/sqrt(T) and
//     mu_init <= mu_cap(rho),
//   - T - tau <= endurance_bound(T, rho, mu_init) under the same conditions.
double ros_violation_bound(int horizon, double lambda_init);
double mu_cap(double rho);
double endurance_bound(int horizon, double rho, double mu_init);

}  // namespace pacing
