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

// Environments: generators of per-round auction samples.
//
// An environment addresses its randomness as (episode key, round, slot), so a
// round is a pure function of those integers. Episodes never share state and
// can run on any thread in any order.

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "pacing/auction.hpp"
#include "pacing/rng.hpp"

namespace pacing {

// One playable round: the bidder sees `value`, submits a bid, and `play`
// resolves the outcome. For most environments `play` just evaluates a fixed
// sample; for bid landscapes the outcome's randomness is resolved against
// the submitted bid using uniforms fixed per round (common random numbers).
struct RoundView {
  double value = 0.0;
  std::function<BidOutcome(double bid)> play;
};

class Env {
 public:
  virtual ~Env() = default;

  // The round stream for one episode. Pure in (episode_key, t).
  virtual RoundView round(uint64_t episode_key, int t) const = 0;

  // Draws one sample, advancing the explicit rng state.
  virtual AuctionSample sample(CounterRng& rng) const = 0;

  virtual double rho() const = 0;
  virtual std::string name() const = 0;

  // Fixed horizon, or 0 when any horizon is valid.
  virtual int fixed_horizon() const { return 0; }

  // True when one round's won value is at most ~1, i.e. payments and values
  // are commensurate with a per-round budget share. The multiplier-cap and
  // early-stopping guarantees assume this scale, so the episode runner arms
  // them only for environments that report it.
  virtual bool unit_scale_rounds() const { return true; }
};

// v ~ Exponential(value_mean), competing bid d ~ Exponential(bid_mean),
// independent, second-price. Two uniforms per round.
class ExponentialSecondPriceEnv final : public Env {
 public:
  ExponentialSecondPriceEnv() = default;
  ExponentialSecondPriceEnv(double value_mean, double bid_mean, double rho);

  RoundView round(uint64_t episode_key, int t) const override;
  AuctionSample sample(CounterRng& rng) const override;
  double rho() const override { return rho_; }
  std::string name() const override { return "exponential"; }

  double value_mean() const { return value_mean_; }
  double bid_mean() const { return bid_mean_; }

 private:
  double value_mean_ = 0.5;
  double bid_mean_ = 1.0;
  double rho_ = 9.0 / 16.0;
};

// Deterministic stress instance: every round is the point mass v = 1 with
// allocation min(b/4, 1) and payment min(b^2/8, 2). Two flavors differ only
// in the budget rate: RosBinding has rho = 1.9 (budget slack), BudgetBinding
// has rho = 1/(200 mu0^4) (budget tiny relative to the profitable bid range).
class AdversarialInstance final : public Env {
 public:
  enum class Flavor { RosBinding, BudgetBinding };

  explicit AdversarialInstance(Flavor flavor, double mu0 = 1.0);

  RoundView round(uint64_t episode_key, int t) const override;
  AuctionSample sample(CounterRng& rng) const override;
  double rho() const override { return rho_; }
  std::string name() const override;

  Flavor flavor() const { return flavor_; }
  double mu0() const { return mu0_; }
  // Closed-form per-round optimum: the bid k* that exactly spends the budget
  // rate (BudgetBinding) or exactly breaks even (RosBinding), and its value.
  double opt_bid() const;
  double opt_value_per_round() const;
  AuctionSample sample_at(int t) const;

 private:
  Flavor flavor_;
  double mu0_;
  double rho_;
};

// A fixed finite stream of samples, replayed cyclically. Used for hand-built
// unit streams and for tiny-instance exact optimization.
class ListEnv final : public Env {
 public:
  ListEnv(std::vector<AuctionSample> samples, double rho);

  RoundView round(uint64_t episode_key, int t) const override;
  AuctionSample sample(CounterRng& rng) const override;
  double rho() const override { return rho_; }
  std::string name() const override { return "list"; }
  int fixed_horizon() const override {
    return static_cast<int>(samples_.size());
  }

  const std::vector<AuctionSample>& samples() const { return samples_; }

 private:
  std::vector<AuctionSample> samples_;
  double rho_;
};

}  // namespace pacing
