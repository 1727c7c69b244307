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
#include <vector>

#include "pacing/auction.hpp"
#include "pacing/campaign.hpp"
#include "pacing/errors.hpp"

#include "json.hpp"

using namespace pacing;
using nlohmann::json;

static CampaignLandscape hand_campaign() {
  CampaignLandscape c;
  c.tcpa = 2.0;
  c.pconv_mean = 0.5;  // value per click = 1.0
  c.horizon = 100;
  c.budget = 5.0;
  c.knots = {{0.0, 0.0, 0.0}, {1.0, 10.0, 4.0}, {2.0, 14.0, 9.0}};
  return c;
}

TEST_CASE("piecewise-linear landscape interpolation") {
  CampaignLandscape c = hand_campaign();
  c.validate();
  CHECK(c.value_scale() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(c.max_mult() == 2.0);

  CHECK(c.clicks_at(0.5) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(c.clicks_at(1.0) == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(c.clicks_at(1.5) == doctest::Approx(12.0).epsilon(1e-15));
  CHECK(c.clicks_at(0.0) == 0.0);
  CHECK(c.clicks_at(-1.0) == 0.0);
  CHECK(c.clicks_at(3.0) == 14.0);  // flat beyond the last knot
  CHECK(c.clicks_at(99.0) == 14.0);

  CHECK(c.cost_at(1.5) == doctest::Approx(6.5).epsilon(1e-15));
  CHECK(c.cost_at(99.0) == 9.0);

  CHECK(c.cpc_at(1.0) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(c.cpc_at(0.0) == 0.0);  // no clicks, no cost per click
}

TEST_CASE("landscape validation rejects malformed campaigns") {
  auto expect_reject = [](CampaignLandscape c) {
    CHECK_THROWS_AS(c.validate(), ConfigError);
  };

  CampaignLandscape c = hand_campaign();
  CHECK_NOTHROW(c.validate());

  c = hand_campaign();
  c.knots.resize(1);
  expect_reject(c);

  c = hand_campaign();
  c.knots[0] = {0.0, 1.0, 0.0};  // first knot must be the origin
  expect_reject(c);

  c = hand_campaign();
  c.knots[2].mult = 1.0;  // multipliers must strictly increase
  expect_reject(c);

  c = hand_campaign();
  c.knots[2].clicks = 5.0;  // clicks must be nondecreasing
  expect_reject(c);

  c = hand_campaign();
  c.knots[1].cost = -1.0;
  expect_reject(c);

  c = hand_campaign();
  c.budget = 0.0;
  expect_reject(c);

  c = hand_campaign();
  c.tcpa = 0.0;
  expect_reject(c);

  c = hand_campaign();
  c.pconv_mean = -0.5;
  expect_reject(c);

  c = hand_campaign();
  c.horizon = 0;
  expect_reject(c);
}

TEST_CASE("campaign JSON round trip and strict key checking") {
  CampaignLandscape c = hand_campaign();
  json j = campaign_to_json(c);
  CampaignLandscape back = campaign_from_json(j);
  CHECK(back.tcpa == c.tcpa);
  CHECK(back.pconv_mean == c.pconv_mean);
  CHECK(back.horizon == c.horizon);
  CHECK(back.budget == c.budget);
  REQUIRE(back.knots.size() == c.knots.size());
  for (size_t i = 0; i < c.knots.size(); ++i) {
    CHECK(back.knots[i].mult == c.knots[i].mult);
    CHECK(back.knots[i].clicks == c.knots[i].clicks);
    CHECK(back.knots[i].cost == c.knots[i].cost);
  }

  json unknown = j;
  unknown["extra"] = 1;
  CHECK_THROWS_AS(campaign_from_json(unknown), ConfigError);

  for (const char* key : {"tcpa", "pconv_mean", "T", "budget", "knots"}) {
    json missing = j;
    missing.erase(key);
    CHECK_THROWS_AS(campaign_from_json(missing), ConfigError);
  }

  json bad_knot = j;
  bad_knot["knots"][1] = json::array({1.0, 10.0});  // needs 3 entries
  CHECK_THROWS_AS(campaign_from_json(bad_knot), ConfigError);

  json bad_type = j;
  bad_type["budget"] = "five";
  CHECK_THROWS_AS(campaign_from_json(bad_type), ConfigError);

  CHECK_THROWS_AS(campaign_from_json(json::array()), ConfigError);
}

TEST_CASE("synthetic campaigns are deterministic and well formed") {
  CampaignLandscape a = make_synthetic_campaign(3, 0);
  CampaignLandscape b = make_synthetic_campaign(3, 0);
  CHECK(a.budget == b.budget);
  CHECK(a.tcpa == b.tcpa);
  REQUIRE(a.knots.size() == b.knots.size());
  for (size_t i = 0; i < a.knots.size(); ++i) {
    CHECK(a.knots[i].cost == b.knots[i].cost);
  }

  CampaignLandscape other = make_synthetic_campaign(3, 1);
  CHECK(a.budget != other.budget);

  for (int i = 0; i < 8; ++i) {
    CampaignLandscape c = make_synthetic_campaign(7, i);
    CHECK_NOTHROW(c.validate());
    CHECK(c.horizon == 144);
    CHECK(c.knots.size() == 13);
    CHECK(c.max_mult() == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(c.knots.front().mult == 0.0);
    CHECK(c.budget > 0.0);
  }

  std::vector<CampaignLandscape> fleet = synthetic_fleet(5, 3);
  REQUIRE(fleet.size() == 5);
  CHECK(fleet[0].budget == a.budget);
  CHECK(fleet[1].budget == other.budget);
  CHECK_THROWS_AS(synthetic_fleet(-1, 3), std::domain_error);
}

TEST_CASE("expected-outcome curves are incentive compatible on the knots") {
  // The synthetic cost column is the pricing integral of the click curve, so
  // the expected per-round mechanism satisfies the pricing identity exactly
  // on the knot bid grid.
  for (int i = 0; i < 4; ++i) {
    CampaignLandscape c = make_synthetic_campaign(11, i);
    AuctionSample s = expected_round_sample(c);
    std::vector<double> grid = knot_bid_grid(c);
    REQUIRE(grid.size() == 13);
    TruthReport r = check_truthfulness(s, grid, 1e-8);
    CHECK(r.truthful);
  }
}

TEST_CASE("expected_round_sample evaluates per-round expected curves") {
  CampaignLandscape c = hand_campaign();
  AuctionSample s = expected_round_sample(c);
  CHECK(s.value == doctest::Approx(1.0));
  CHECK_FALSE(s.normalized);
  // Bid 1.5 in money is multiplier 1.5: clicks 12, cost 6.5, per round /100.
  BidOutcome o = evaluate(s, 1.5);
  CHECK(o.allocation == doctest::Approx(0.12).epsilon(1e-12));
  CHECK(o.payment == doctest::Approx(0.065).epsilon(1e-12));
}

TEST_CASE("campaign env: identity, scale flag, per-round budget share") {
  CampaignEnv env(hand_campaign());
  CHECK(env.name() == "campaign");
  CHECK(env.fixed_horizon() == 100);
  CHECK_FALSE(env.unit_scale_rounds());
  CHECK(env.rho() == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(env.landscape().budget == 5.0);

  CampaignLandscape bad = hand_campaign();
  bad.budget = -1.0;
  CHECK_THROWS_AS(CampaignEnv{bad}, ConfigError);
}

TEST_CASE("campaign rounds: determinism, bounds, monotone clicks in the bid") {
  CampaignEnv env(make_synthetic_campaign(5, 2));
  const double vbar = env.landscape().value_scale();
  const uint64_t key = 1234567;

  for (int t = 0; t < 20; ++t) {
    RoundView r1 = env.round(key, t);
    RoundView r2 = env.round(key, t);
    CHECK(r1.value == r2.value);
    // Round values are vbar times a truncated-normal factor in [0, 2].
    CHECK(r1.value >= 0.0);
    CHECK(r1.value <= 2.0 * vbar + 1e-12);

    BidOutcome o1 = r1.play(vbar);
    BidOutcome o2 = r2.play(vbar);
    CHECK(o1.payment == o2.payment);
    CHECK(o1.allocation == o2.allocation);

    // Common random numbers: the click draw reuses one uniform, so clicks
    // are nondecreasing in the bid and integer valued.
    double prev_clicks = 0.0;
    for (double bid : {0.0, 0.2 * vbar, 0.7 * vbar, 1.5 * vbar, 4.0 * vbar}) {
      BidOutcome o = r1.play(bid);
      CHECK(o.allocation >= prev_clicks);
      CHECK(o.allocation == std::floor(o.allocation));
      CHECK(o.payment >= 0.0);
      prev_clicks = o.allocation;
    }
    CHECK(r1.play(0.0).allocation == 0.0);
    CHECK(r1.play(0.0).payment == 0.0);
  }

  // sample() consumes exactly three uniforms per round.
  CounterRng rng(9, 9);
  env.sample(rng);
  CHECK(rng.slot == 3);
}
