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

#include "pacing/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <limits>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "pacing/errors.hpp"
#include "pacing/oracle.hpp"
#include "pacing/rng.hpp"

namespace pacing {

namespace {

constexpr uint64_t kBootStream = 0x424f4f54;   // bootstrap resampling
constexpr uint64_t kFleetStream = 0x464c4545;  // fleet episode seeds

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

// Slope of the least-squares line through (x_i, y_i).
double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  double xbar = mean_of(x);
  double ybar = mean_of(y);
  double sxy = 0.0;
  double sxx = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxy += (x[i] - xbar) * (y[i] - ybar);
    sxx += (x[i] - xbar) * (x[i] - xbar);
  }
  if (sxx <= 0.0) throw std::domain_error("ols_slope: degenerate abscissae");
  return sxy / sxx;
}

double percentile(std::vector<double> sorted_in_place, double q) {
  std::sort(sorted_in_place.begin(), sorted_in_place.end());
  const size_t n = sorted_in_place.size();
  if (n == 0) return 0.0;
  double pos = q * static_cast<double>(n - 1);
  size_t lo = static_cast<size_t>(pos);
  size_t hi = std::min(lo + 1, n - 1);
  double frac = pos - static_cast<double>(lo);
  return sorted_in_place[lo] * (1.0 - frac) + sorted_in_place[hi] * frac;
}

double median_in_place(std::vector<double>& xs) {
  if (xs.empty()) throw std::domain_error("median of an empty sample");
  std::sort(xs.begin(), xs.end());
  const size_t n = xs.size();
  if (n % 2 == 1) return xs[n / 2];
  return 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace

void parallel_for(int jobs, size_t n, const std::function<void(size_t)>& fn) {
  if (n == 0) return;
  if (jobs <= 1 || n == 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  size_t workers = std::min(static_cast<size_t>(jobs), n);
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<EpisodeSummary> run_batch(PacerKind kind, const Env& env,
                                      int horizon, const EpisodeConfig& cfg,
                                      int n_seeds, uint64_t seed0,
                                      double benchmark_per_round, int jobs) {
  if (n_seeds < 0) throw std::domain_error("run_batch: n_seeds must be >= 0");
  std::vector<EpisodeSummary> out(static_cast<size_t>(n_seeds));
  parallel_for(jobs, out.size(), [&](size_t s) {
    Trajectory traj =
        run_episode(kind, env, horizon, cfg, seed0 + static_cast<uint64_t>(s));
    out[s] = summarize(traj, benchmark_per_round);
  });
  return out;
}

std::string to_string(MetricKind m) {
  switch (m) {
    case MetricKind::kRegret:
      return "regret";
    case MetricKind::kRosViolation:
      return "ros_violation";
    case MetricKind::kEnduranceGap:
      return "endurance_gap";
  }
  throw std::logic_error("to_string: unknown metric");
}

double metric_value(MetricKind m, const EpisodeSummary& s) {
  switch (m) {
    case MetricKind::kRegret:
      return s.benchmark - s.reward;
    case MetricKind::kRosViolation:
      return s.ros_violation;
    case MetricKind::kEnduranceGap:
      return static_cast<double>(s.endurance_gap);
  }
  throw std::logic_error("metric_value: unknown metric");
}

ScalingStudy scaling_study(PacerKind kind, const Env& env,
                           const std::vector<int>& horizons, int n_seeds,
                           const EpisodeConfig& cfg,
                           const std::vector<MetricKind>& metrics,
                           uint64_t seed0, int jobs) {
  if (horizons.size() < 3) {
    throw ConfigError(
        "scaling_study: need at least 3 horizons spanning two decades");
  }
  for (size_t t = 0; t < horizons.size(); ++t) {
    if (horizons[t] < 2)
      throw ConfigError("scaling_study: horizons must be >= 2");
    if (t > 0 && horizons[t] <= horizons[t - 1])
      throw ConfigError("scaling_study: horizons must be strictly increasing");
  }
  double span = static_cast<double>(horizons.back()) /
                static_cast<double>(horizons.front());
  if (span < 100.0 * (1.0 - 1e-12)) {
    throw ConfigError(
        "scaling_study: need at least 3 horizons spanning two decades "
        "(largest/smallest >= 100)");
  }
  if (n_seeds < 1) throw ConfigError("scaling_study: n_seeds must be >= 1");
  if (metrics.empty())
    throw ConfigError("scaling_study: need at least one metric");

  ScalingStudy study;
  study.horizons = horizons;
  study.benchmark_per_round = env_benchmark(env).value_per_round;
  study.episodes.resize(horizons.size());
  for (size_t t = 0; t < horizons.size(); ++t) {
    study.episodes[t] = run_batch(kind, env, horizons[t], cfg, n_seeds, seed0,
                                  study.benchmark_per_round, jobs);
  }

  std::vector<double> log_t(horizons.size());
  for (size_t t = 0; t < horizons.size(); ++t)
    log_t[t] = std::log(static_cast<double>(horizons[t]));

  // Sublinear growth reads as slope < 1 in log-log space. Means are floored
  // at 1 before the log so that metrics an algorithm drives to ~0 (or below,
  // for signed violations) register as flat rather than as noise blowups.
  auto slope_of_means = [&](const std::vector<double>& means) {
    std::vector<double> y(means.size());
    for (size_t t = 0; t < means.size(); ++t)
      y[t] = std::log(std::max(means[t], 1.0));
    return ols_slope(log_t, y);
  };

  for (size_t mi = 0; mi < metrics.size(); ++mi) {
    MetricKind m = metrics[mi];
    ScalingReport rep;
    rep.metric = m;

    std::vector<std::vector<double>> values(horizons.size());
    rep.means.resize(horizons.size());
    bool any_positive = false;
    for (size_t t = 0; t < horizons.size(); ++t) {
      values[t].resize(static_cast<size_t>(n_seeds));
      for (int s = 0; s < n_seeds; ++s)
        values[t][static_cast<size_t>(s)] =
            metric_value(m, study.episodes[t][static_cast<size_t>(s)]);
      rep.means[t] = mean_of(values[t]);
      if (rep.means[t] > 0.0) any_positive = true;
    }
    rep.metric_nonpositive = !any_positive;
    rep.slope = slope_of_means(rep.means);

    constexpr int kReplicates = 2000;
    CounterRng rng(seed0, kBootStream, mi);
    std::vector<double> slopes;
    slopes.reserve(kReplicates);
    std::vector<double> boot_means(horizons.size());
    for (int b = 0; b < kReplicates; ++b) {
      for (size_t t = 0; t < horizons.size(); ++t) {
        double acc = 0.0;
        for (int s = 0; s < n_seeds; ++s) {
          size_t pick = static_cast<size_t>(rng.next_unit() * n_seeds);
          if (pick >= values[t].size()) pick = values[t].size() - 1;
          acc += values[t][pick];
        }
        boot_means[t] = acc / static_cast<double>(n_seeds);
      }
      slopes.push_back(slope_of_means(boot_means));
    }
    rep.ci_lo = percentile(slopes, 0.025);
    rep.ci_hi = percentile(slopes, 0.975);
    study.reports.push_back(rep);
  }
  return study;
}

DemoReport sequential_failure_demo(PacerKind kind, double lambda0, double mu0,
                                   int horizon, double alpha, double eta,
                                   double c, uint64_t seed) {
  if (horizon < 1)
    throw ConfigError("sequential_failure_demo: horizon must be >= 1");
  if (!(c > 0.0))
    throw ConfigError("sequential_failure_demo: threshold c must be > 0");
  if (!(lambda0 > 0.0) || !(mu0 > 0.0))
    throw ConfigError(
        "sequential_failure_demo: initial multipliers must be > 0");

  DemoReport rep;
  rep.kind = kind;
  rep.lambda0 = lambda0;
  rep.mu0 = mu0;
  rep.horizon = horizon;
  const double t = static_cast<double>(horizon);

  // Leg one: breakeven instance, where the budget is slack and any
  // overspend shows up directly as a return-on-spend violation.
  AdversarialInstance ros_env(AdversarialInstance::Flavor::RosBinding);
  EpisodeConfig cfg;
  cfg.rho = ros_env.rho();
  cfg.alpha = alpha;
  cfg.eta = eta;
  cfg.lambda_init = lambda0;
  cfg.mu_init = mu0;
  Trajectory ros_traj = run_episode(kind, ros_env, horizon, cfg, seed);
  rep.spend_ros_instance = ros_traj.total_spend();
  rep.ros_violation = ros_traj.ros_violation();
  if (rep.spend_ros_instance >= 0.6 * t || rep.ros_violation >= c * t) {
    rep.failure = "ros";
    rep.per_round_magnitude = rep.ros_violation / t;
    return rep;
  }

  // Leg two: tight-budget instance built around the same mu0, where bidding
  // too timidly leaves budget unused and value on the table.
  AdversarialInstance budget_env(AdversarialInstance::Flavor::BudgetBinding,
                                 mu0);
  EpisodeConfig bcfg;
  bcfg.rho = budget_env.rho();
  bcfg.alpha = alpha;
  bcfg.eta = eta;
  bcfg.lambda_init = lambda0;
  bcfg.mu_init = mu0;
  Trajectory budget_traj = run_episode(kind, budget_env, horizon, bcfg, seed);
  rep.optimum = budget_env.opt_value_per_round() * t;
  rep.regret = rep.optimum - budget_traj.total_value();
  rep.value_per_round = budget_traj.total_value() / t;
  if (rep.regret >= c * t) {
    rep.failure = "regret";
    rep.per_round_magnitude = rep.regret / t;
    return rep;
  }
  rep.failure = "none";
  rep.per_round_magnitude = 0.0;
  return rep;
}

ConvergenceProbe convergence_probe(PacerKind kind, const Env& env,
                                   int horizon, int n_seeds,
                                   const EpisodeConfig& cfg, double k_star,
                                   uint64_t seed0, int jobs) {
  if (horizon < 1) throw ConfigError("convergence_probe: horizon must be >= 1");
  if (n_seeds < 1) throw ConfigError("convergence_probe: n_seeds must be >= 1");
  const int quarter = std::max(1, horizon / 4);
  const int start = horizon - quarter;

  std::vector<std::vector<double>> gaps(static_cast<size_t>(n_seeds));
  parallel_for(jobs, gaps.size(), [&](size_t s) {
    Trajectory traj =
        run_episode(kind, env, horizon, cfg, seed0 + static_cast<uint64_t>(s));
    std::vector<double>& g = gaps[s];
    g.reserve(static_cast<size_t>(quarter));
    for (int r = start; r < horizon; ++r) {
      double k = bid_multiplier(kind, traj.lambda[static_cast<size_t>(r)],
                                traj.mu[static_cast<size_t>(r)]);
      g.push_back(std::fabs(k - k_star));
    }
  });

  std::vector<double> pooled;
  pooled.reserve(static_cast<size_t>(n_seeds) * static_cast<size_t>(quarter));
  for (const auto& g : gaps) pooled.insert(pooled.end(), g.begin(), g.end());

  ConvergenceProbe probe;
  probe.k_star = k_star;
  probe.samples = static_cast<int>(pooled.size());
  probe.median_abs_gap = median_in_place(pooled);
  return probe;
}

std::vector<FleetResult> fleet_study(int n_campaigns, int seeds_per_campaign,
                                     const std::vector<PacerKind>& kinds,
                                     const std::vector<double>& step_scales,
                                     uint64_t seed, int jobs,
                                     const std::vector<double>& thresholds) {
  if (n_campaigns < 1)
    throw ConfigError("fleet_study: n_campaigns must be >= 1");
  if (seeds_per_campaign < 1)
    throw ConfigError("fleet_study: seeds_per_campaign must be >= 1");
  if (kinds.empty()) throw ConfigError("fleet_study: need at least one pacer");
  if (step_scales.empty())
    throw ConfigError("fleet_study: need at least one step scale");
  for (double s : step_scales)
    if (!(s > 0.0)) throw ConfigError("fleet_study: step scales must be > 0");
  if (thresholds.empty() || thresholds.front() != 0.0)
    throw ConfigError("fleet_study: thresholds must start at 0");

  std::vector<CampaignLandscape> fleet =
      synthetic_fleet(n_campaigns, seed);
  std::vector<std::unique_ptr<CampaignEnv>> envs;
  std::vector<double> benchmarks;  // total value over the campaign's horizon
  envs.reserve(fleet.size());
  benchmarks.reserve(fleet.size());
  for (const auto& c : fleet) {
    envs.push_back(std::make_unique<CampaignEnv>(c));
    benchmarks.push_back(fluid_benchmark(c).value_per_round *
                         static_cast<double>(c.horizon));
  }

  std::vector<FleetResult> results;
  results.reserve(kinds.size());
  for (PacerKind kind : kinds) {
    FleetResult res;
    res.kind = kind;
    std::vector<std::vector<CampaignResult>> per_pair;
    // Same episode seeds for every pacer and step pair, so comparisons see
    // identical conversion, click, and payment noise.
    for (double alpha_scale : step_scales) {
      for (double eta_scale : step_scales) {
        std::vector<CampaignResult> rows(fleet.size());
        parallel_for(jobs, fleet.size(), [&](size_t i) {
          const CampaignLandscape& c = fleet[i];
          const double root_t = std::sqrt(static_cast<double>(c.horizon));
          EpisodeConfig cfg;
          cfg.rho = envs[i]->rho();
          cfg.alpha = alpha_scale / root_t;
          cfg.eta = eta_scale / root_t;
          uint64_t ep_seed0 = derive_key(seed, kFleetStream, i);
          double sum_reward = 0.0;
          double sum_spend = 0.0;
          for (int s = 0; s < seeds_per_campaign; ++s) {
            Trajectory traj =
                run_episode(kind, *envs[i], c.horizon, cfg,
                            ep_seed0 + static_cast<uint64_t>(s));
            sum_reward += traj.total_value();
            sum_spend += traj.total_spend();
          }
          double reward = sum_reward / seeds_per_campaign;
          double spend = sum_spend / seeds_per_campaign;
          CampaignResult row;
          row.campaign = static_cast<int>(i);
          row.reward = reward;
          row.benchmark = benchmarks[i];
          if (spend <= reward) {
            row.relative_ros_error = 0.0;
          } else if (reward > 0.0) {
            row.relative_ros_error = spend / reward - 1.0;
          } else {
            row.relative_ros_error =
                std::numeric_limits<double>::infinity();
          }
          rows[i] = row;
        });
        std::vector<BucketRow> table = bucket_table(rows, thresholds);
        FleetGridCell cell;
        cell.alpha_scale = alpha_scale;
        cell.eta_scale = eta_scale;
        cell.zero_error_value_share = table.front().value_share;
        cell.zero_error_fraction = table.front().fraction;
        cell.total_value_share = table.back().value_share;
        res.grid.push_back(cell);
        per_pair.push_back(std::move(rows));
      }
    }
    size_t best = 0;
    for (size_t g = 1; g < res.grid.size(); ++g) {
      if (res.grid[g].zero_error_value_share >
          res.grid[best].zero_error_value_share)
        best = g;
    }
    res.best_alpha_scale = res.grid[best].alpha_scale;
    res.best_eta_scale = res.grid[best].eta_scale;
    res.campaigns = std::move(per_pair[best]);
    res.table = bucket_table(res.campaigns, thresholds);
    results.push_back(std::move(res));
  }
  return results;
}

}  // namespace pacing
