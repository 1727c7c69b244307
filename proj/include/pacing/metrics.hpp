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

#ifndef PACING_METRICS_HPP_
#define PACING_METRICS_HPP_

#include <vector>

#include "pacing/pacing.hpp"

namespace pacing {

// Episode scorecard. Derived from the trajectory alone (the stopping time
// is recomputed from payments rather than trusted), so it doubles as an
// independent check on the runner's bookkeeping.
struct EpisodeSummary {
  double reward = 0.0;          // total value gained
  double spend = 0.0;           // initial budget minus final remaining
  double ros_violation = 0.0;   // spend - reward
  int tau = 0;                  // first round after which remaining <= 1
  int endurance_gap = 0;        // horizon - tau
  double relative_ros_error = 0.0;  // max(0, spend/reward - 1)
  double benchmark = 0.0;       // benchmark_per_round * horizon
};

EpisodeSummary summarize(const Trajectory& traj, double benchmark_per_round);

struct RegretEstimate {
  double mean = 0.0;
  double sd = 0.0;
  double ci_lo = 0.0;  // normal 95% interval, mean +- 1.96 sd/sqrt(n)
  double ci_hi = 0.0;
  int n = 0;
};

// Mean and confidence interval of per-episode regret
// horizon * opt_per_round - reward. Throws std::domain_error when empty.
RegretEstimate regret_estimate(const std::vector<EpisodeSummary>& results,
                               double opt_per_round, int horizon);

// One campaign's aggregate outcome at a fixed pacing configuration.
struct CampaignResult {
  int campaign = 0;
  double relative_ros_error = 0.0;
  double reward = 0.0;
  double benchmark = 0.0;
};

struct BucketRow {
  double threshold = 0.0;
  double fraction = 0.0;     // share of campaigns with error <= threshold
  double value_share = 0.0;  // their total reward over total benchmark
};

std::vector<double> default_bucket_thresholds();

// Cumulative error buckets. Thresholds must be strictly ascending and end
// at +infinity; both output columns are nondecreasing by construction. An
// empty campaign set yields an all-zero table over the same thresholds.
std::vector<BucketRow> bucket_table(
    const std::vector<CampaignResult>& campaigns,
    const std::vector<double>& thresholds = default_bucket_thresholds());

}  // namespace pacing

#endif  // PACING_METRICS_HPP_
