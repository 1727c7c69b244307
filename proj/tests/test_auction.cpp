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
#include <stdexcept>
#include <vector>

#include "pacing/auction.hpp"

using namespace pacing;

static AuctionSample second_price(double value, double competing) {
  AuctionSample s;
  s.value = value;
  s.mechanism = SecondPrice{competing};
  return s;
}

TEST_CASE("second price: win, tie, lose") {
  AuctionSample s = second_price(0.8, 0.3);

  BidOutcome win = evaluate(s, 0.5);
  CHECK(win.allocation == 1.0);
  CHECK(win.payment == 0.3);
  CHECK(win.value_gained == 0.8);
  CHECK(win.bid == 0.5);

  BidOutcome tie = evaluate(s, 0.3);
  CHECK(tie.allocation == 1.0);  // ties win
  CHECK(tie.payment == 0.3);

  BidOutcome lose = evaluate(s, 0.29);
  CHECK(lose.allocation == 0.0);
  CHECK(lose.payment == 0.0);
  CHECK(lose.value_gained == 0.0);
}

TEST_CASE("negative bids are rejected") {
  AuctionSample s = second_price(1.0, 0.5);
  CHECK_THROWS_AS(evaluate(s, -0.01), std::domain_error);
}

TEST_CASE("parametric curve evaluates both curves at the bid") {
  AuctionSample s;
  s.value = 1.0;
  s.mechanism = ParametricCurve{
      [](double b) { return std::min(b / 4.0, 1.0); },
      [](double b) { return std::min(b * b / 8.0, 2.0); }};
  BidOutcome o = evaluate(s, 2.0);
  CHECK(o.allocation == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(o.payment == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(o.value_gained == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("landscape draws ignore the bid argument") {
  AuctionSample s;
  s.value = 0.7;
  s.mechanism = LandscapeDraw{3, 0.2};
  s.normalized = false;
  for (double b : {0.0, 1.0, 100.0}) {
    BidOutcome o = evaluate(s, b);
    CHECK(o.allocation == 3.0);
    CHECK(o.payment == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(o.value_gained == doctest::Approx(2.1).epsilon(1e-15));
  }
}

TEST_CASE("second price passes the truthfulness check") {
  // The allocation jumps at the competing bid, so the trapezoid quadrature
  // carries an error of half a grid step at the jump; the tolerance must
  // absorb it.
  AuctionSample s = second_price(1.0, 0.4);
  std::vector<double> grid;
  for (int i = 0; i <= 100; ++i) grid.push_back(i * 0.01);
  TruthReport r = check_truthfulness(s, grid, 0.02);
  CHECK(r.truthful);
  CHECK(r.detail.empty());
}

TEST_CASE("the stress instance curves pass the truthfulness check") {
  // Allocation b/4 integrates to b^2/8: the pricing identity holds exactly,
  // so the smooth stress mechanism cannot overcharge a truthful bidder.
  AuctionSample s;
  s.value = 1.0;
  s.mechanism = ParametricCurve{
      [](double b) { return std::min(b / 4.0, 1.0); },
      [](double b) { return std::min(b * b / 8.0, 2.0); }};
  s.normalized = false;
  std::vector<double> grid;
  for (int i = 0; i <= 500; ++i) grid.push_back(i * 0.01);
  TruthReport r = check_truthfulness(s, grid, 1e-4);
  CHECK(r.truthful);
}

TEST_CASE("first-price style payment fails the pricing identity") {
  // p(b) = b * x(b) with x(b) = min(b, 1) charges more than the identity
  // allows once the integral term kicks in.
  AuctionSample s;
  s.value = 1.0;
  s.mechanism = ParametricCurve{
      [](double b) { return std::min(b, 1.0); },
      [](double b) { return b * std::min(b, 1.0); }};
  std::vector<double> grid;
  for (int i = 0; i <= 100; ++i) grid.push_back(i * 0.02);
  TruthReport r = check_truthfulness(s, grid, 1e-6);
  CHECK_FALSE(r.truthful);
  CHECK(r.detail == "payment deviates from the pricing identity");
  CHECK(r.magnitude > 0.0);
  CHECK(r.violating_bid > 0.0);
}

TEST_CASE("decreasing allocation is flagged") {
  AuctionSample s;
  s.value = 1.0;
  s.mechanism = ParametricCurve{[](double b) { return 1.0 - 0.5 * b; },
                                [](double) { return 0.0; }};
  std::vector<double> grid = {0.0, 0.5, 1.0};
  TruthReport r = check_truthfulness(s, grid, 1e-6);
  CHECK_FALSE(r.truthful);
  CHECK(r.detail == "allocation decreases");
}

TEST_CASE("grid validation") {
  AuctionSample s = second_price(1.0, 0.5);
  std::vector<double> empty;
  CHECK_THROWS_AS(check_truthfulness(s, empty, 1e-6), std::domain_error);
  std::vector<double> unsorted = {0.0, 0.5, 0.4};
  CHECK_THROWS_AS(check_truthfulness(s, unsorted, 1e-6), std::domain_error);
  std::vector<double> negative = {-0.1, 0.5};
  CHECK_THROWS_AS(check_truthfulness(s, negative, 1e-6), std::domain_error);
  std::vector<double> ok = {0.0, 0.5};
  CHECK_THROWS_AS(check_truthfulness(s, ok, 0.0), std::domain_error);
  CHECK_THROWS_AS(check_truthfulness(s, ok, -1.0), std::domain_error);
}
