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

// Single-round auction mechanics: what one bid wins and what it pays.

#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace pacing {

// Classic single-slot second price: allocation 1 iff bid >= competing_bid
// (ties win), payment equal to the competing bid on a win.
struct SecondPrice {
  double competing_bid = 0.0;
};

// Smooth mechanism given by an allocation curve x(b) and a payment curve
// p(b). Used for deterministic stress instances and for expected-value views
// of bid landscapes.
struct ParametricCurve {
  std::function<double(double)> allocation;
  std::function<double(double)> payment;
};

// A realized draw from a bid landscape. The randomness (click count, price
// noise) was resolved when the draw was sampled at some multiplier, so
// evaluation ignores the bid argument.
struct LandscapeDraw {
  int clicks = 0;
  double cost_per_click = 0.0;
};

struct AuctionSample {
  double value = 0.0;
  std::variant<SecondPrice, ParametricCurve, LandscapeDraw> mechanism;
  // True when value, allocation and payment are all known to lie in [0, 1].
  // Some per-step bounds are only meaningful at that scale.
  bool normalized = true;
};

struct BidOutcome {
  double bid = 0.0;
  double allocation = 0.0;
  double payment = 0.0;
  double value_gained = 0.0;
};

// Outcome of submitting `bid` against this sample. Throws std::domain_error
// for negative bids.
BidOutcome evaluate(const AuctionSample& sample, double bid);

struct TruthReport {
  bool truthful = true;
  // First grid bid where a check failed, and by how much.
  double violating_bid = 0.0;
  double magnitude = 0.0;
  std::string detail;
};

// Checks, on the given sorted bid grid, that the allocation curve is
// nondecreasing and that the payment curve matches the pricing identity
//   p(b) = p(b0) + b*x(b) - b0*x(b0) - integral_{b0}^{b} x(s) ds
// (trapezoid rule on the grid) within `tolerance` at every grid point.
// A mechanism with this property never charges more than a bidder who
// reports truthfully is willing to pay. Throws std::domain_error on an
// empty/unsorted grid or a nonpositive tolerance.
TruthReport check_truthfulness(const AuctionSample& sample,
                               const std::vector<double>& bid_grid,
                               double tolerance);

}  // namespace pacing
