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

#include "pacing/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace pacing {

EpisodeSummary summarize(const Trajectory& traj, double benchmark_per_round) {
  const int horizon = traj.horizon;
  EpisodeSummary s;
  s.reward = std::accumulate(traj.value_gained.begin(),
                             traj.value_gained.end(), 0.0);
  s.spend = traj.initial_budget - traj.final_remaining();

  // Stopping time recomputed from payments: first round whose cumulative
  // spend leaves at most 1 in the budget.
  s.tau = horizon;
  double remaining = traj.initial_budget;
  for (int t = 0; t < horizon; ++t) {
    remaining -= traj.payment[static_cast<size_t>(t)];
    if (remaining <= 1.0) {
      s.tau = t + 1;
      break;
    }
  }
  s.endurance_gap = horizon - s.tau;
  s.ros_violation = s.spend - s.reward;
  if (s.reward > 0.0) {
    s.relative_ros_error = std::max(0.0, s.spend / s.reward - 1.0);
  } else {
    s.relative_ros_error =
        s.spend > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  s.benchmark = benchmark_per_round * static_cast<double>(horizon);
  return s;
}

RegretEstimate regret_estimate(const std::vector<EpisodeSummary>& results,
                               double opt_per_round, int horizon) {
  if (results.empty()) {
    throw std::domain_error("regret_estimate: no episodes");
  }
  const double opt_total = opt_per_round * static_cast<double>(horizon);
  RegretEstimate r;
  r.n = static_cast<int>(results.size());
  double sum = 0.0;
  for (const EpisodeSummary& s : results) sum += opt_total - s.reward;
  r.mean = sum / r.n;
  double ss = 0.0;
  for (const EpisodeSummary& s : results) {
    const double x = opt_total - s.reward - r.mean;
    ss += x * x;
  }
  r.sd = r.n > 1 ? std::sqrt(ss / (r.n - 1)) : 0.0;
  const double half = 1.96 * r.sd / std::sqrt(static_cast<double>(r.n));
  r.ci_lo = r.mean - half;
  r.ci_hi = r.mean + half;
  return r;
}

std::vector<double> default_bucket_thresholds() {
  std::vector<double> z;
  for (int i = 0; i <= 10; ++i) z.push_back(0.05 * i);
  z.push_back(std::numeric_limits<double>::infinity());
  return z;
}

std::vector<BucketRow> bucket_table(
    const std::vector<CampaignResult>& campaigns,
    const std::vector<double>& thresholds) {
  if (thresholds.empty() ||
      thresholds.back() != std::numeric_limits<double>::infinity()) {
    throw std::domain_error("bucket_table: thresholds must end at +inf");
  }
  for (size_t i = 1; i < thresholds.size(); ++i) {
    if (!(thresholds[i - 1] < thresholds[i])) {
      throw std::domain_error(
          "bucket_table: thresholds must be strictly ascending");
    }
  }
  std::vector<BucketRow> table;
  table.reserve(thresholds.size());
  const double n = static_cast<double>(campaigns.size());
  double total_benchmark = 0.0;
  for (const CampaignResult& c : campaigns) total_benchmark += c.benchmark;
  for (double z : thresholds) {
    BucketRow row;
    row.threshold = z;
    if (!campaigns.empty()) {
      double count = 0.0;
      double value = 0.0;
      for (const CampaignResult& c : campaigns) {
        if (c.relative_ros_error <= z) {
          count += 1.0;
          value += c.reward;
        }
      }
      row.fraction = count / n;
      row.value_share = total_benchmark > 0.0 ? value / total_benchmark : 0.0;
    }
    table.push_back(row);
  }
  return table;
}

}  // namespace pacing
