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

#include "pacing/auction.hpp"

#include <cmath>
#include <stdexcept>

namespace pacing {

BidOutcome evaluate(const AuctionSample& sample, double bid) {
  if (!(bid >= 0.0)) {
    throw std::domain_error("evaluate: bid must be nonnegative");
  }
  BidOutcome out;
  out.bid = bid;
  if (const auto* sp = std::get_if<SecondPrice>(&sample.mechanism)) {
    const bool win = bid >= sp->competing_bid;
    out.allocation = win ? 1.0 : 0.0;
    out.payment = win ? sp->competing_bid : 0.0;
  } else if (const auto* pc = std::get_if<ParametricCurve>(&sample.mechanism)) {
    out.allocation = pc->allocation(bid);
    out.payment = pc->payment(bid);
  } else {
    const auto& draw = std::get<LandscapeDraw>(sample.mechanism);
    out.allocation = static_cast<double>(draw.clicks);
    out.payment = draw.clicks * draw.cost_per_click;
  }
  out.value_gained = sample.value * out.allocation;
  return out;
}

TruthReport check_truthfulness(const AuctionSample& sample,
                               const std::vector<double>& bid_grid,
                               double tolerance) {
  if (bid_grid.empty()) {
    throw std::domain_error("check_truthfulness: empty bid grid");
  }
  if (!(tolerance > 0.0)) {
    throw std::domain_error("check_truthfulness: tolerance must be positive");
  }
  for (size_t i = 1; i < bid_grid.size(); ++i) {
    if (!(bid_grid[i] > bid_grid[i - 1])) {
      throw std::domain_error(
          "check_truthfulness: bid grid must be strictly increasing");
    }
  }
  if (bid_grid.front() < 0.0) {
    throw std::domain_error("check_truthfulness: bids must be nonnegative");
  }

  TruthReport report;
  const size_t n = bid_grid.size();
  std::vector<double> alloc(n), pay(n);
  for (size_t i = 0; i < n; ++i) {
    const BidOutcome out = evaluate(sample, bid_grid[i]);
    alloc[i] = out.allocation;
    pay[i] = out.payment;
  }

  for (size_t i = 1; i < n; ++i) {
    if (alloc[i] < alloc[i - 1] - tolerance) {
      report.truthful = false;
      report.violating_bid = bid_grid[i];
      report.magnitude = alloc[i - 1] - alloc[i];
      report.detail = "allocation decreases";
      return report;
    }
  }

  // Pricing identity, anchored at the first grid point (grids normally start
  // at 0, where both terms vanish).
  const double b0 = bid_grid[0];
  const double base = pay[0] - b0 * alloc[0];
  double integral = 0.0;
  for (size_t i = 1; i < n; ++i) {
    integral +=
        0.5 * (alloc[i] + alloc[i - 1]) * (bid_grid[i] - bid_grid[i - 1]);
    const double predicted = base + bid_grid[i] * alloc[i] - integral;
    const double gap = std::fabs(pay[i] - predicted);
    if (gap > tolerance) {
      report.truthful = false;
      report.violating_bid = bid_grid[i];
      report.magnitude = gap;
      report.detail = "payment deviates from the pricing identity";
      return report;
    }
  }
  return report;
}

}  // namespace pacing
