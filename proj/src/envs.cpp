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

#include "pacing/envs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pacing/errors.hpp"

namespace pacing {

ExponentialSecondPriceEnv::ExponentialSecondPriceEnv(double value_mean,
                                                     double bid_mean,
                                                     double rho)
    : value_mean_(value_mean), bid_mean_(bid_mean), rho_(rho) {
  if (!(value_mean_ > 0.0) || !(bid_mean_ > 0.0) || !(rho_ > 0.0)) {
    throw ConfigError("exponential env: means and rho must be positive");
  }
}

RoundView ExponentialSecondPriceEnv::round(uint64_t episode_key, int t) const {
  const uint64_t base = 2 * static_cast<uint64_t>(t);
  AuctionSample s;
  s.value = exponential_icdf(uniform01(episode_key, base), value_mean_);
  s.mechanism =
      SecondPrice{exponential_icdf(uniform01(episode_key, base + 1), bid_mean_)};
  s.normalized = false;
  return {s.value, [s](double bid) { return evaluate(s, bid); }};
}

AuctionSample ExponentialSecondPriceEnv::sample(CounterRng& rng) const {
  AuctionSample s;
  s.value = exponential_icdf(rng.next_unit(), value_mean_);
  s.mechanism = SecondPrice{exponential_icdf(rng.next_unit(), bid_mean_)};
  s.normalized = false;
  return s;
}

namespace {

double stress_alloc(double b) { return std::min(b / 4.0, 1.0); }
double stress_pay(double b) { return std::min(b * b / 8.0, 2.0); }

}  // namespace

AdversarialInstance::AdversarialInstance(Flavor flavor, double mu0)
    : flavor_(flavor), mu0_(mu0) {
  if (flavor_ == Flavor::BudgetBinding && !(mu0_ > 0.0)) {
    throw ConfigError("adversarial-budget env: mu0 must be positive");
  }
  rho_ = flavor_ == Flavor::RosBinding
             ? 1.9
             : 1.0 / (200.0 * mu0_ * mu0_ * mu0_ * mu0_);
}

AuctionSample AdversarialInstance::sample_at(int) const {
  AuctionSample s;
  s.value = 1.0;
  s.mechanism = ParametricCurve{stress_alloc, stress_pay};
  s.normalized = false;
  return s;
}

RoundView AdversarialInstance::round(uint64_t, int t) const {
  AuctionSample s = sample_at(t);
  return {s.value, [s](double bid) { return evaluate(s, bid); }};
}

AuctionSample AdversarialInstance::sample(CounterRng& rng) const {
  return sample_at(static_cast<int>(rng.slot++));
}

std::string AdversarialInstance::name() const {
  return flavor_ == Flavor::RosBinding ? "adversarial-ros"
                                       : "adversarial-budget";
}

double AdversarialInstance::opt_bid() const {
  // Breakeven bid: value b/4 equals payment b^2/8 at b = 2. Budget-limited
  // bid: b^2/8 = rho at b = sqrt(8 rho). The optimum is whichever binds
  // first.
  return std::min(2.0, std::sqrt(8.0 * rho_));
}

double AdversarialInstance::opt_value_per_round() const {
  return stress_alloc(opt_bid());
}

ListEnv::ListEnv(std::vector<AuctionSample> samples, double rho)
    : samples_(std::move(samples)), rho_(rho) {
  if (samples_.empty()) throw ConfigError("list env: empty sample list");
  if (!(rho_ > 0.0)) throw ConfigError("list env: rho must be positive");
}

RoundView ListEnv::round(uint64_t, int t) const {
  const AuctionSample& s =
      samples_[static_cast<size_t>(t) % samples_.size()];
  return {s.value, [&s](double bid) { return evaluate(s, bid); }};
}

AuctionSample ListEnv::sample(CounterRng& rng) const {
  return samples_[static_cast<size_t>(rng.slot++) % samples_.size()];
}

}  // namespace pacing
