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

#include "pacing/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>

#include "pacing/errors.hpp"

namespace pacing {

namespace {

double interp_column(const std::vector<CampaignLandscape::Knot>& knots,
                     double m, double CampaignLandscape::Knot::*col) {
  if (knots.empty() || m <= 0.0) return 0.0;
  if (m >= knots.back().mult) return knots.back().*col;
  const auto it = std::upper_bound(
      knots.begin(), knots.end(), m,
      [](double x, const CampaignLandscape::Knot& k) { return x < k.mult; });
  const CampaignLandscape::Knot& hi = *it;
  const CampaignLandscape::Knot& lo = *(it - 1);
  const double w = (m - lo.mult) / (hi.mult - lo.mult);
  return lo.*col + w * (hi.*col - lo.*col);
}

}  // namespace

double CampaignLandscape::clicks_at(double mult) const {
  return interp_column(knots, mult, &Knot::clicks);
}

double CampaignLandscape::cost_at(double mult) const {
  return interp_column(knots, mult, &Knot::cost);
}

double CampaignLandscape::cpc_at(double mult) const {
  const double cl = clicks_at(mult);
  return cl > 0.0 ? cost_at(mult) / cl : 0.0;
}

void CampaignLandscape::validate() const {
  if (!(tcpa > 0.0) || !std::isfinite(tcpa)) {
    throw ConfigError("campaign: tcpa must be positive and finite");
  }
  if (!(pconv_mean > 0.0) || !std::isfinite(pconv_mean)) {
    throw ConfigError("campaign: pconv_mean must be positive and finite");
  }
  if (horizon < 1) throw ConfigError("campaign: horizon must be >= 1");
  if (!(budget > 0.0) || !std::isfinite(budget)) {
    throw ConfigError("campaign: budget must be positive and finite");
  }
  if (knots.size() < 2) {
    throw ConfigError("campaign: need at least 2 landscape knots");
  }
  if (knots.front().mult != 0.0 || knots.front().clicks != 0.0 ||
      knots.front().cost != 0.0) {
    throw ConfigError("campaign: first knot must be (0, 0, 0)");
  }
  for (size_t i = 0; i < knots.size(); ++i) {
    const Knot& k = knots[i];
    if (!std::isfinite(k.mult) || !std::isfinite(k.clicks) ||
        !std::isfinite(k.cost)) {
      throw ConfigError("campaign: knot values must be finite");
    }
    if (k.clicks < 0.0 || k.cost < 0.0) {
      throw ConfigError("campaign: knot clicks and cost must be >= 0");
    }
    if (i > 0) {
      if (!(knots[i - 1].mult < k.mult)) {
        throw ConfigError(
            "campaign: knot multipliers must be strictly increasing");
      }
      if (k.clicks < knots[i - 1].clicks || k.cost < knots[i - 1].cost) {
        throw ConfigError("campaign: clicks and cost must be nondecreasing");
      }
    }
  }
}

CampaignLandscape campaign_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("campaign: expected a JSON object");
  for (const auto& item : j.items()) {
    const std::string& key = item.key();
    if (key != "tcpa" && key != "pconv_mean" && key != "T" &&
        key != "budget" && key != "knots") {
      throw ConfigError("campaign: unknown key '" + key + "'");
    }
  }
  for (const char* key : {"tcpa", "pconv_mean", "T", "budget", "knots"}) {
    if (!j.contains(key)) {
      throw ConfigError(std::string("campaign: missing key '") + key + "'");
    }
  }
  CampaignLandscape c;
  try {
    c.tcpa = j.at("tcpa").get<double>();
    c.pconv_mean = j.at("pconv_mean").get<double>();
    c.horizon = j.at("T").get<int>();
    c.budget = j.at("budget").get<double>();
    for (const auto& row : j.at("knots")) {
      if (!row.is_array() || row.size() != 3) {
        throw ConfigError("campaign: each knot must be [mult, clicks, cost]");
      }
      c.knots.push_back({row.at(0).get<double>(), row.at(1).get<double>(),
                         row.at(2).get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("campaign: malformed JSON field: ") +
                      e.what());
  }
  c.validate();
  return c;
}

nlohmann::json campaign_to_json(const CampaignLandscape& c) {
  nlohmann::json knots = nlohmann::json::array();
  for (const auto& k : c.knots) {
    knots.push_back(nlohmann::json::array({k.mult, k.clicks, k.cost}));
  }
  return nlohmann::json{{"tcpa", c.tcpa},
                        {"pconv_mean", c.pconv_mean},
                        {"T", c.horizon},
                        {"budget", c.budget},
                        {"knots", std::move(knots)}};
}

CampaignLandscape make_synthetic_campaign(uint64_t seed, int index) {
  CounterRng rng(seed, 0x43414d50ull, static_cast<uint64_t>(index));
  const double gamma = 0.35 + 0.55 * rng.next_unit();
  const double total_clicks = 40.0 + 360.0 * rng.next_unit();
  const double tcpa = 0.5 + 4.5 * rng.next_unit();
  const double pconv = 0.05 + 0.25 * rng.next_unit();
  const double lift = 1.5 + 1.5 * rng.next_unit();
  const double frac = 0.25 + 0.45 * rng.next_unit();

  constexpr double kMaxMult = 4.0;
  constexpr int kSegments = 12;

  CampaignLandscape c;
  c.tcpa = tcpa;
  c.pconv_mean = pconv;
  c.horizon = 144;
  const double vbar = c.value_scale();

  // Click curve total_clicks * (k / kmax)^gamma sampled on a grid that is
  // denser near zero; cost is the pricing integral k*clicks - int(clicks),
  // taken exactly over the piecewise-linear interpolant and expressed in
  // money via vbar. That construction makes the knot grid exactly
  // incentive-compatible (see expected_round_sample).
  c.knots.resize(kSegments + 1);
  double integral = 0.0;
  for (int j = 0; j <= kSegments; ++j) {
    const double k =
        kMaxMult * std::pow(static_cast<double>(j) / kSegments, 1.4);
    const double clicks = total_clicks * std::pow(k / kMaxMult, gamma);
    if (j > 0) {
      integral += 0.5 * (clicks + c.knots[j - 1].clicks) *
                  (k - c.knots[j - 1].mult);
    }
    c.knots[j] = {k, clicks, vbar * (k * clicks - integral)};
  }

  // Breakeven multiplier of the underlying power law: value vbar*clicks(k)
  // matches cost when k*gamma/(gamma+1) = 1. Ample budgets leave that
  // breakeven binding; tight ones cap spend strictly below it.
  const double k_breakeven = (gamma + 1.0) / gamma;
  const double spend_at_breakeven = c.cost_at(k_breakeven);
  c.budget = index % 2 == 0 ? lift * spend_at_breakeven
                            : frac * spend_at_breakeven;
  c.validate();
  return c;
}

std::vector<CampaignLandscape> synthetic_fleet(int n, uint64_t seed) {
  if (n < 0) throw std::domain_error("synthetic_fleet: negative count");
  std::vector<CampaignLandscape> fleet;
  fleet.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) fleet.push_back(make_synthetic_campaign(seed, i));
  return fleet;
}

AuctionSample expected_round_sample(const CampaignLandscape& c) {
  c.validate();
  const double vbar = c.value_scale();
  const double rounds = static_cast<double>(c.horizon);
  const auto data = std::make_shared<CampaignLandscape>(c);
  AuctionSample s;
  s.value = vbar;
  s.normalized = false;
  s.mechanism = ParametricCurve{
      [data, vbar, rounds](double bid) {
        return data->clicks_at(bid / vbar) / rounds;
      },
      [data, vbar, rounds](double bid) {
        return data->cost_at(bid / vbar) / rounds;
      }};
  return s;
}

std::vector<double> knot_bid_grid(const CampaignLandscape& c) {
  std::vector<double> grid;
  grid.reserve(c.knots.size());
  const double vbar = c.value_scale();
  for (const auto& k : c.knots) grid.push_back(vbar * k.mult);
  return grid;
}

CampaignEnv::CampaignEnv(CampaignLandscape c) : campaign_(std::move(c)) {
  campaign_.validate();
  rho_ = campaign_.budget / static_cast<double>(campaign_.horizon);
}

AuctionSample CampaignEnv::sample_from_units(double u_conv, double u_clicks,
                                             double u_pay) const {
  const double z_conv = truncated_normal_icdf(u_conv, 1.0, 0.1, 0.0, 2.0);
  const double z_pay = truncated_normal_icdf(u_pay, 1.0, 0.1, 0.0, 2.0);
  const double value = campaign_.value_scale() * z_conv;
  const double rounds = static_cast<double>(campaign_.horizon);
  const auto data = std::make_shared<CampaignLandscape>(campaign_);

  // Clicks resolve against the submitted bid with this round's fixed
  // uniform, so a larger bid can only keep or grow the realized clicks
  // (common random numbers); both curves see the same draw.
  const auto clicks_for = [data, value, rounds, u_clicks](double bid) {
    if (!(bid > 0.0) || !(value > 0.0)) return 0.0;
    const double mean = data->clicks_at(bid / value) / rounds;
    return static_cast<double>(poisson_icdf(u_clicks, mean));
  };
  AuctionSample s;
  s.value = value;
  s.normalized = false;
  s.mechanism = ParametricCurve{
      clicks_for, [data, value, z_pay, clicks_for](double bid) {
        const double cpc =
            value > 0.0 && bid > 0.0 ? data->cpc_at(bid / value) : 0.0;
        return clicks_for(bid) * cpc * z_pay;
      }};
  return s;
}

RoundView CampaignEnv::round(uint64_t episode_key, int t) const {
  const uint64_t base = 3 * static_cast<uint64_t>(t);
  AuctionSample s = sample_from_units(uniform01(episode_key, base),
                                      uniform01(episode_key, base + 1),
                                      uniform01(episode_key, base + 2));
  return {s.value, [s](double bid) { return evaluate(s, bid); }};
}

AuctionSample CampaignEnv::sample(CounterRng& rng) const {
  const double u_conv = rng.next_unit();
  const double u_clicks = rng.next_unit();
  const double u_pay = rng.next_unit();
  return sample_from_units(u_conv, u_clicks, u_pay);
}

}  // namespace pacing
