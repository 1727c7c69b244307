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

#ifndef PACING_CAMPAIGN_HPP_
#define PACING_CAMPAIGN_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "pacing/envs.hpp"

#include "json.hpp"

namespace pacing {

// A semi-synthetic campaign: a piecewise-linear bid landscape (clicks and
// cumulative cost as functions of the bid multiplier), a conversion model
// (tcpa * pconv_mean is the expected value of one click, in money), a
// per-campaign horizon, and a total budget in the same currency as cost.
struct CampaignLandscape {
  struct Knot {
    double mult = 0.0;    // bid multiplier (bid / value-per-click)
    double clicks = 0.0;  // expected clicks over the whole campaign
    double cost = 0.0;    // expected total spend, money
  };

  double tcpa = 0.0;
  double pconv_mean = 0.0;
  int horizon = 0;  // rounds in the campaign's natural day
  double budget = 0.0;
  std::vector<Knot> knots;

  // Expected money value of one click.
  double value_scale() const { return tcpa * pconv_mean; }

  // Piecewise-linear interpolation of the knot columns; flat beyond the
  // last knot, and zero below the first (which validate() pins to origin).
  double clicks_at(double mult) const;
  double cost_at(double mult) const;
  // cost/clicks at `mult`; zero where the click curve is still zero.
  double cpc_at(double mult) const;

  double max_mult() const { return knots.empty() ? 0.0 : knots.back().mult; }

  // Throws ConfigError if the landscape is malformed: needs >= 2 knots with
  // strictly increasing multipliers, the first exactly (0, 0, 0),
  // nondecreasing clicks and cost, finite nonnegative columns, positive
  // horizon/budget/tcpa/pconv_mean.
  void validate() const;
};

CampaignLandscape campaign_from_json(const nlohmann::json& j);
nlohmann::json campaign_to_json(const CampaignLandscape& c);

// Deterministic synthetic campaign generator. Even indices get ample budget
// (the value-vs-spend breakeven binds first), odd indices a tight one.
CampaignLandscape make_synthetic_campaign(uint64_t seed, int index);
std::vector<CampaignLandscape> synthetic_fleet(int n, uint64_t seed);

// Deterministic expected-outcome view of one round, in bid space: allocation
// is expected clicks per round and payment expected spend per round, both at
// bid b = value_scale * mult. Exact at the knot grid, which is what
// knot_bid_grid returns; used for incentive-compatibility checks.
AuctionSample expected_round_sample(const CampaignLandscape& c);
std::vector<double> knot_bid_grid(const CampaignLandscape& c);

// Plays campaign rounds: per round t the value per click is
// value_scale * z_conv, the submitted bid maps back to a multiplier, clicks
// are Poisson with mean clicks_at(mult) / horizon, and payment is
// clicks * cpc_at(mult) * z_pay. Three random slots per round.
class CampaignEnv : public Env {
 public:
  explicit CampaignEnv(CampaignLandscape c);

  RoundView round(uint64_t episode_key, int t) const override;
  AuctionSample sample(CounterRng& rng) const override;
  double rho() const override { return rho_; }
  std::string name() const override { return "campaign"; }
  int fixed_horizon() const override { return campaign_.horizon; }
  // Money-scale rounds: a single round's value is often far above 1, so the
  // unit-scale stopping/cap guarantees do not apply here.
  bool unit_scale_rounds() const override { return false; }

  const CampaignLandscape& landscape() const { return campaign_; }

 private:
  AuctionSample sample_from_units(double u_conv, double u_clicks,
                                  double u_pay) const;

  CampaignLandscape campaign_;
  double rho_ = 0.0;
};

}  // namespace pacing

#endif  // PACING_CAMPAIGN_HPP_
