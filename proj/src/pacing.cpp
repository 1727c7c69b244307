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

#include "pacing/pacing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "pacing/envs.hpp"
#include "pacing/errors.hpp"

namespace pacing {

const char* to_string(PacerKind kind) {
  switch (kind) {
    case PacerKind::DualOptimal:
      return "dual-optimal";
    case PacerKind::Sequential:
      return "sequential";
    case PacerKind::Min:
      return "min";
  }
  return "?";
}

double bid_multiplier(PacerKind kind, double lambda, double mu) {
  switch (kind) {
    case PacerKind::DualOptimal:
      if (!(mu + lambda > 0.0)) {
        throw std::logic_error("bid_multiplier: lambda + mu must be positive");
      }
      return (1.0 + lambda) / (mu + lambda);
    case PacerKind::Sequential:
      if (!(lambda > 0.0) || !(mu > 0.0)) {
        throw std::logic_error(
            "bid_multiplier: lambda and mu must be positive for the "
            "sequential architecture");
      }
      return (1.0 + lambda) / lambda / mu;
    case PacerKind::Min:
      if (!(lambda > 0.0) || !(mu > 0.0)) {
        throw std::logic_error(
            "bid_multiplier: lambda and mu must be positive for the min "
            "architecture");
      }
      return std::min((1.0 + lambda) / lambda, 1.0 / mu);
  }
  throw std::logic_error("bid_multiplier: unknown architecture");
}

double compute_bid(PacerKind kind, const DualState& state, double value) {
  if (state.stopped) {
    throw std::logic_error("compute_bid: state is stopped");
  }
  if (!(value >= 0.0)) {
    throw std::domain_error("compute_bid: value must be nonnegative");
  }
  const double multiplier = bid_multiplier(kind, state.lambda, state.mu);
  const double bid = std::min(multiplier * value, state.remaining_budget);
  return std::max(bid, 0.0);
}

DualState update_duals(const DualState& state, const BidOutcome& outcome,
                       double value) {
  DualState next = state;
  const double surplus = value * outcome.allocation - outcome.payment;
  next.lambda = std::clamp(state.lambda * std::exp(-state.alpha * surplus),
                           kDualFloor, kDualCeil);
  next.mu = std::clamp(
      state.mu * std::exp(-state.eta * (state.rho - outcome.payment)),
      kDualFloor, kDualCeil);
  next.remaining_budget =
      std::max(state.remaining_budget - outcome.payment, 0.0);
  next.round = state.round + 1;
  // Spend so far within 1 of the budget: stop before a (normalized) round
  // could overshoot.
  if (next.remaining_budget <= 1.0) next.stopped = true;
  return next;
}

EpisodeConfig resolve_config(const EpisodeConfig& cfg, int horizon) {
  EpisodeConfig r = cfg;
  const double root_t = std::sqrt(static_cast<double>(horizon));
  // Negative means "pick the default". An explicit zero step is kept: it
  // freezes that multiplier, which is occasionally useful (ablations).
  if (r.alpha < 0.0) r.alpha = 1.0 / root_t;
  if (r.eta < 0.0) r.eta = 1.0 / root_t;
  if (r.mu_init < 0.0) r.mu_init = r.rho;
  return r;
}

double Trajectory::total_value() const {
  return std::accumulate(value_gained.begin(), value_gained.end(), 0.0);
}

double Trajectory::total_spend() const {
  return initial_budget - final_remaining();
}

double Trajectory::final_remaining() const {
  return remaining_budget.empty() ? initial_budget : remaining_budget.back();
}

double Trajectory::ros_violation() const {
  double v = 0.0;
  for (size_t i = 0; i < payment.size(); ++i) v += payment[i] - value_gained[i];
  return v;
}

double ros_violation_bound(int horizon, double lambda_init) {
  const double t = static_cast<double>(horizon);
  return 2.0 * std::sqrt(t) * std::log(t / lambda_init);
}

double mu_cap(double rho) { return 1.0 / rho + 1.0; }

double endurance_bound(int horizon, double rho, double mu_init) {
  const double t = static_cast<double>(horizon);
  return std::sqrt(t) / rho * std::log(10.0 * mu_cap(rho) / mu_init);
}

namespace {

bool near_default_step(double step, int horizon) {
  return std::fabs(step * std::sqrt(static_cast<double>(horizon)) - 1.0) <
         1e-9;
}

[[noreturn]] void breach(const std::string& what, double observed,
                         double bound) {
  std::ostringstream os;
  os << what << ": observed " << observed << " exceeds bound " << bound;
  throw InvariantViolation(os.str());
}

}  // namespace

Trajectory run_episode(PacerKind kind, const Env& env, int horizon,
                       const EpisodeConfig& cfg_in, uint64_t seed) {
  if (horizon <= 0) throw std::domain_error("run_episode: empty stream");
  if (!(cfg_in.rho > 0.0)) throw ConfigError("run_episode: rho must be > 0");
  const EpisodeConfig cfg = resolve_config(cfg_in, horizon);
  if (!(cfg.alpha >= 0.0) || !(cfg.eta >= 0.0)) {
    throw ConfigError("run_episode: step sizes must be finite and >= 0");
  }
  if (!(cfg.lambda_init > 0.0) || !(cfg.mu_init > 0.0)) {
    throw ConfigError("run_episode: initial multipliers must be > 0");
  }

  const uint64_t key = derive_key(seed, 0x45505349ULL);  // episode stream

  DualState state;
  state.lambda = cfg.lambda_init;
  state.mu = cfg.mu_init;
  state.rho = cfg.rho;
  state.alpha = cfg.alpha;
  state.eta = cfg.eta;
  state.remaining_budget = cfg.rho * horizon;

  Trajectory traj;
  traj.kind = kind;
  traj.config = cfg;
  traj.horizon = horizon;
  traj.initial_budget = state.remaining_budget;
  traj.bid.reserve(horizon);
  traj.allocation.reserve(horizon);
  traj.payment.reserve(horizon);
  traj.value_gained.reserve(horizon);
  traj.lambda.reserve(horizon);
  traj.mu.reserve(horizon);
  traj.remaining_budget.reserve(horizon);
  traj.stopping_time = horizon;

  const bool min_kind = kind == PacerKind::Min;
  const bool alpha_default = near_default_step(cfg.alpha, horizon);
  const bool eta_default = near_default_step(cfg.eta, horizon);
  const double cap = mu_cap(cfg.rho);
  const bool arm_mu_cap = cfg.enforce_invariants && min_kind && eta_default &&
                          env.unit_scale_rounds() &&
                          cfg.mu_init <= cap * (1.0 + 1e-12);
  const bool arm_ros =
      cfg.enforce_invariants && min_kind && alpha_default && horizon >= 2;

  bool stop_recorded = false;
  for (int t = 0; t < horizon; ++t) {
    if (state.stopped) {
      traj.bid.push_back(0.0);
      traj.allocation.push_back(0.0);
      traj.payment.push_back(0.0);
      traj.value_gained.push_back(0.0);
      traj.lambda.push_back(state.lambda);
      traj.mu.push_back(state.mu);
      traj.remaining_budget.push_back(state.remaining_budget);
      continue;
    }

    if (arm_mu_cap && state.mu > cap * (1.0 + 1e-12)) {
      breach("mu exceeded its cap before the stopping time", state.mu, cap);
    }

    const RoundView view = env.round(key, t);
    const double bid = compute_bid(kind, state, view.value);
    BidOutcome out = view.play(bid);

    // Overspend guard: a landscape draw's realized cost can exceed what is
    // left; such a round is voided (cost and value both zeroed).
    if (out.payment > state.remaining_budget) {
      out.allocation = 0.0;
      out.payment = 0.0;
      out.value_gained = 0.0;
      ++traj.zeroed_rounds;
    }

    if (cfg.enforce_invariants && min_kind) {
      // Per-step gradient floors, valid whenever the realized round charged
      // no more than bid * allocation and the won value is at most 1.
      const double vx = view.value * out.allocation;
      if (out.payment <= bid * out.allocation + 1e-12 && vx <= 1.0 + 1e-12) {
        const double g_r = vx - out.payment;
        if (g_r < -1.0 / state.lambda - 1e-9) {
          breach("per-round surplus fell below -1/lambda", g_r,
                 -1.0 / state.lambda);
        }
        if (out.payment > 1.0 / state.mu + 1e-9) {
          breach("per-round payment exceeded 1/mu", out.payment,
                 1.0 / state.mu);
        }
      }
    }

    traj.bid.push_back(bid);
    traj.allocation.push_back(out.allocation);
    traj.payment.push_back(out.payment);
    traj.value_gained.push_back(out.value_gained);
    traj.lambda.push_back(state.lambda);
    traj.mu.push_back(state.mu);

    state = update_duals(state, out, view.value);
    traj.remaining_budget.push_back(state.remaining_budget);
    if (state.stopped && !stop_recorded) {
      traj.stopping_time = t + 1;
      stop_recorded = true;
    }
  }

  if (cfg.enforce_invariants) {
    if (traj.total_spend() > traj.initial_budget * (1.0 + 1e-12) + 1e-9) {
      breach("cumulative payment exceeded the budget", traj.total_spend(),
             traj.initial_budget);
    }
    if (arm_ros) {
      const double bound = ros_violation_bound(horizon, cfg.lambda_init);
      const double viol = traj.ros_violation();
      if (viol > bound + 1e-6 * std::max(1.0, std::fabs(bound))) {
        breach("episode net constraint violation exceeded its bound", viol,
               bound);
      }
    }
    if (arm_mu_cap) {
      const double gap = static_cast<double>(horizon - traj.stopping_time);
      const double bound = endurance_bound(horizon, cfg.rho, cfg.mu_init);
      // +1 absorbs the integer round boundary.
      if (gap > bound + 1.0) {
        breach("budget ran out too early", gap, bound);
      }
    }
  }
  return traj;
}

}  // namespace pacing
