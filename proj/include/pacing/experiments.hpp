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

// Batch drivers on top of the episode runner: seed sweeps, horizon scaling
// with bootstrap slopes, the sequential-architecture failure demo, the
// multiplier convergence probe, and the campaign fleet grid search. All
// randomness is counter-based, so results are independent of the worker
// count.

#ifndef PACING_EXPERIMENTS_HPP_
#define PACING_EXPERIMENTS_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pacing/campaign.hpp"
#include "pacing/envs.hpp"
#include "pacing/metrics.hpp"
#include "pacing/pacing.hpp"

namespace pacing {

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Exceptions propagate
// (the first one thrown, after all workers finish).
void parallel_for(int jobs, size_t n, const std::function<void(size_t)>& fn);

// One episode per seed in [seed0, seed0 + n_seeds), summarized.
std::vector<EpisodeSummary> run_batch(PacerKind kind, const Env& env,
                                      int horizon, const EpisodeConfig& cfg,
                                      int n_seeds, uint64_t seed0,
                                      double benchmark_per_round, int jobs);

enum class MetricKind { kRegret, kRosViolation, kEnduranceGap };

std::string to_string(MetricKind m);
double metric_value(MetricKind m, const EpisodeSummary& s);

struct ScalingReport {
  MetricKind metric = MetricKind::kRegret;
  std::vector<double> means;  // one per horizon
  double slope = 0.0;         // OLS of log(max(mean, 1)) on log horizon
  double ci_lo = 0.0;         // bootstrap 95% percentile interval
  double ci_hi = 0.0;
  bool metric_nonpositive = false;  // every horizon mean was <= 0
};

struct ScalingStudy {
  std::vector<int> horizons;
  double benchmark_per_round = 0.0;
  // episodes[t][s]: horizon index t, seed index s
  std::vector<std::vector<EpisodeSummary>> episodes;
  std::vector<ScalingReport> reports;
};

// Growth-rate study across horizons: needs at least 3 horizons spanning two
// decades (ConfigError otherwise). The slope of each metric's mean is fit
// in log-log space with means floored at 1, and its confidence interval
// comes from resampling seeds within each horizon (~2000 replicates).
ScalingStudy scaling_study(PacerKind kind, const Env& env,
                           const std::vector<int>& horizons, int n_seeds,
                           const EpisodeConfig& cfg,
                           const std::vector<MetricKind>& metrics,
                           uint64_t seed0, int jobs);

// Drives one architecture through the two stress instances with the given
// initial multipliers. The run on the breakeven instance fails the ROS leg
// when total spend reaches 0.6 * T or the net violation reaches c * T;
// otherwise the tight-budget instance is played and the regret leg fails
// when regret reaches c * T.
struct DemoReport {
  PacerKind kind = PacerKind::Sequential;
  double lambda0 = 1.0;
  double mu0 = 1.0;
  int horizon = 0;
  std::string failure;  // "ros", "regret", or "none"
  double spend_ros_instance = 0.0;
  double ros_violation = 0.0;
  double regret = 0.0;             // on the tight-budget instance
  double optimum = 0.0;            // its offline total value
  double value_per_round = 0.0;    // realized there, divided by horizon
  double per_round_magnitude = 0.0;  // failing metric / horizon
};

DemoReport sequential_failure_demo(PacerKind kind, double lambda0, double mu0,
                                   int horizon, double alpha, double eta,
                                   double c, uint64_t seed);

// Pooled median of |k_t - k_star| over the last quarter of each episode.
struct ConvergenceProbe {
  double k_star = 0.0;
  double median_abs_gap = 0.0;
  int samples = 0;
};

ConvergenceProbe convergence_probe(PacerKind kind, const Env& env,
                                   int horizon, int n_seeds,
                                   const EpisodeConfig& cfg, double k_star,
                                   uint64_t seed0, int jobs);

// Campaign fleet grid search. Step sizes are scale/sqrt(T) per campaign;
// every (alpha_scale, eta_scale) pair is scored by the zero-error bucket's
// value share (ties keep the earlier grid pair), and the winner's bucket
// table and per-campaign results are reported.
struct FleetGridCell {
  double alpha_scale = 0.0;
  double eta_scale = 0.0;
  double zero_error_value_share = 0.0;
  double total_value_share = 0.0;
  double zero_error_fraction = 0.0;
};

struct FleetResult {
  PacerKind kind = PacerKind::Min;
  double best_alpha_scale = 0.0;
  double best_eta_scale = 0.0;
  std::vector<FleetGridCell> grid;
  std::vector<BucketRow> table;            // at the best pair
  std::vector<CampaignResult> campaigns;   // at the best pair
};

std::vector<FleetResult> fleet_study(
    int n_campaigns, int seeds_per_campaign,
    const std::vector<PacerKind>& kinds,
    const std::vector<double>& step_scales, uint64_t seed, int jobs,
    const std::vector<double>& thresholds = default_bucket_thresholds());

}  // namespace pacing

#endif  // PACING_EXPERIMENTS_HPP_
