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

#include "pacing/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "pacing/campaign.hpp"
#include "pacing/errors.hpp"
#include "pacing/experiments.hpp"
#include "pacing/io.hpp"
#include "pacing/kernels.hpp"
#include "pacing/metrics.hpp"
#include "pacing/oracle.hpp"

#include "CLI11.hpp"
#include "json.hpp"

namespace pacing {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void require_cfg(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

// Per-subcommand option state. Option handles record which flags were
// actually given, so a flag can override a config-file value without
// clobbering it with the flag's default.
struct Shared {
  std::string pacer = "min";
  std::string env = "exponential";
  std::vector<int> t_list;
  double rho = -1.0;
  double alpha = -1.0;
  double eta = -1.0;
  double lambda_init = 1.0;
  double mu_init = -1.0;
  double mu0 = 1.0;
  int seeds = 30;
  int jobs = 1;
  uint64_t seed = 1;
  std::string campaign_file;
  std::string config_path;
  std::string out_dir;
  std::string simd = "auto";
  bool no_assert = false;

  // command-specific extras
  double demo_c = 0.01;
  std::vector<double> inits = {0.5, 1.0, 2.0};
  int campaigns = 200;
  std::vector<double> scales = {0.3, 1.0, 3.0};
  int samples = 1'000'000;

  CLI::Option* o_pacer = nullptr;
  CLI::Option* o_env = nullptr;
  CLI::Option* o_t = nullptr;
  CLI::Option* o_rho = nullptr;
  CLI::Option* o_alpha = nullptr;
  CLI::Option* o_eta = nullptr;
  CLI::Option* o_lambda = nullptr;
  CLI::Option* o_mu_init = nullptr;
  CLI::Option* o_mu0 = nullptr;
  CLI::Option* o_seeds = nullptr;
  CLI::Option* o_seed = nullptr;
  CLI::Option* o_jobs = nullptr;
  CLI::Option* o_campaign = nullptr;
};

void add_common(CLI::App* cmd, Shared& sh, bool episode_flags) {
  sh.o_pacer = cmd->add_option("--pacer", sh.pacer,
                               "pacing architecture: dual-optimal, "
                               "sequential, or min");
  cmd->add_option("--out", sh.out_dir,
                  "output directory (default: $PACER_OUT or ./out)");
  cmd->add_option("--config", sh.config_path, "JSON config file");
  cmd->add_option("--simd", sh.simd, "kernel selection: auto, scalar, avx2");
  sh.o_seed = cmd->add_option("--seed", sh.seed, "first episode seed");
  sh.o_jobs = cmd->add_option("--jobs", sh.jobs, "worker threads");
  if (!episode_flags) return;
  sh.o_env = cmd->add_option(
      "--env", sh.env,
      "environment: exponential, adversarial-ros, adversarial-budget, "
      "campaign");
  sh.o_t = cmd->add_option("--T", sh.t_list, "horizon (rounds)");
  sh.o_rho = cmd->add_option("--rho", sh.rho, "budget per round");
  sh.o_alpha = cmd->add_option("--alpha", sh.alpha, "lambda step size");
  sh.o_eta = cmd->add_option("--eta", sh.eta, "mu step size");
  sh.o_lambda =
      cmd->add_option("--lambda-init", sh.lambda_init, "initial lambda");
  sh.o_mu_init = cmd->add_option("--mu-init", sh.mu_init, "initial mu");
  sh.o_mu0 = cmd->add_option("--mu0", sh.mu0,
                             "tight-budget instance parameter");
  sh.o_seeds = cmd->add_option("--seeds", sh.seeds, "episodes per cell");
  sh.o_campaign =
      cmd->add_option("--campaign", sh.campaign_file, "campaign JSON file");
  cmd->add_flag("--no-assert", sh.no_assert,
                "disable runtime invariant enforcement");
}

bool flag_given(const CLI::Option* o) { return o != nullptr && o->count() > 0; }

// Config file first, then explicit flags on top, then command defaults for
// anything still untouched.
RunConfig build_config(const Shared& sh, const std::string& default_pacer,
                       int default_seeds) {
  json j = json::object();
  if (!sh.config_path.empty()) {
    std::string body = read_text_file(sh.config_path);
    try {
      j = json::parse(body);
    } catch (const json::exception& e) {
      throw ConfigError("config file '" + sh.config_path + "': " + e.what());
    }
  }
  RunConfig cfg = parse_config_raw(j);
  if (!j.contains("pacer") && !flag_given(sh.o_pacer))
    cfg.pacer = default_pacer;
  if (!j.contains("seeds") && !flag_given(sh.o_seeds))
    cfg.seeds = default_seeds;

  if (flag_given(sh.o_pacer)) cfg.pacer = sh.pacer;
  if (flag_given(sh.o_env)) cfg.env = sh.env;
  if (flag_given(sh.o_t)) {
    for (int t : sh.t_list)
      require_cfg(t >= 1, "invalid horizon: T must be >= 1");
    cfg.horizon = sh.t_list.front();
  }
  if (flag_given(sh.o_rho)) {
    require_cfg(std::isfinite(sh.rho) && sh.rho > 0.0,
                "config: rho must be finite and > 0");
    cfg.rho = sh.rho;
  }
  if (flag_given(sh.o_alpha)) {
    require_cfg(std::isfinite(sh.alpha) && sh.alpha >= 0.0,
                "config: alpha must be finite and >= 0");
    cfg.alpha = sh.alpha;
  }
  if (flag_given(sh.o_eta)) {
    require_cfg(std::isfinite(sh.eta) && sh.eta >= 0.0,
                "config: eta must be finite and >= 0");
    cfg.eta = sh.eta;
  }
  if (flag_given(sh.o_lambda)) {
    require_cfg(std::isfinite(sh.lambda_init) && sh.lambda_init > 0.0,
                "config: lambda_init must be finite and > 0");
    cfg.lambda_init = sh.lambda_init;
  }
  if (flag_given(sh.o_mu_init)) {
    require_cfg(std::isfinite(sh.mu_init) && sh.mu_init > 0.0,
                "config: mu_init must be finite and > 0");
    cfg.mu_init = sh.mu_init;
  }
  if (flag_given(sh.o_mu0)) {
    require_cfg(std::isfinite(sh.mu0) && sh.mu0 > 0.0,
                "config: mu0 must be finite and > 0");
    cfg.mu0 = sh.mu0;
  }
  if (flag_given(sh.o_seeds)) {
    require_cfg(sh.seeds >= 1, "config: seeds must be >= 1");
    cfg.seeds = sh.seeds;
  }
  if (flag_given(sh.o_seed)) cfg.seed = sh.seed;
  if (flag_given(sh.o_jobs)) {
    require_cfg(sh.jobs >= 1, "config: jobs must be >= 1");
    cfg.jobs = sh.jobs;
  }
  if (flag_given(sh.o_campaign)) cfg.campaign_file = sh.campaign_file;
  if (sh.no_assert) cfg.enforce_invariants = false;
  pacer_from_string(cfg.pacer);
  return cfg;
}

std::string out_dir_for(const Shared& sh) {
  if (!sh.out_dir.empty()) return sh.out_dir;
  const char* env = std::getenv("PACER_OUT");
  if (env != nullptr && *env != '\0') return env;
  return "out";
}

std::string prepare_out_dir(const Shared& sh) {
  std::string dir = out_dir_for(sh);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory: " + dir);
  return dir;
}

std::vector<int> horizon_list(const Shared& sh) {
  if (flag_given(sh.o_t)) return sh.t_list;
  return {1000, 10000, 100000};
}

const std::vector<std::string> kEpisodeHeader = {
    "pacer",          "env",  "T",
    "seed",           "reward", "spend",
    "ros_violation",  "tau",  "endurance_gap",
    "relative_ros_error", "benchmark"};

std::vector<std::string> episode_row(const std::string& pacer,
                                     const std::string& env_name, int horizon,
                                     uint64_t seed, const EpisodeSummary& s) {
  return {pacer,
          env_name,
          std::to_string(horizon),
          std::to_string(seed),
          format_double(s.reward),
          format_double(s.spend),
          format_double(s.ros_violation),
          std::to_string(s.tau),
          std::to_string(s.endurance_gap),
          format_double(s.relative_ros_error),
          format_double(s.benchmark)};
}

void write_manifest(const std::string& dir, const std::string& command,
                    const RunConfig& cfg,
                    const std::vector<std::string>& outputs) {
  std::vector<std::string> all = outputs;
  all.push_back("manifest.json");
  write_text_file(dir + "/manifest.json",
                  manifest_json(command, cfg, kernel_ops().name, all));
}

int cmd_run(const Shared& sh) {
  RunConfig cfg = build_config(sh, "min", 30);
  if (flag_given(sh.o_t))
    require_cfg(sh.t_list.size() == 1, "run takes a single --T");
  resolve_run_config(cfg);
  std::string dir = prepare_out_dir(sh);

  PacerKind kind = pacer_from_string(cfg.pacer);
  std::unique_ptr<Env> env = make_env(cfg);
  EnvBenchmark bench = env_benchmark(*env);
  std::vector<EpisodeSummary> eps =
      run_batch(kind, *env, cfg.horizon, episode_config(cfg), cfg.seeds,
                cfg.seed, bench.value_per_round, cfg.jobs);

  std::vector<std::vector<std::string>> rows;
  rows.reserve(eps.size());
  for (size_t s = 0; s < eps.size(); ++s)
    rows.push_back(episode_row(cfg.pacer, env->name(), cfg.horizon,
                               cfg.seed + s, eps[s]));
  write_text_file(dir + "/episodes.csv", render_csv(kEpisodeHeader, rows));

  double n = static_cast<double>(eps.size());
  double mean_reward = 0.0, mean_spend = 0.0, mean_viol = 0.0;
  double max_viol = -std::numeric_limits<double>::infinity();
  double mean_tau = 0.0, mean_gap = 0.0, max_rel = 0.0;
  for (const EpisodeSummary& s : eps) {
    mean_reward += s.reward / n;
    mean_spend += s.spend / n;
    mean_viol += s.ros_violation / n;
    max_viol = std::max(max_viol, s.ros_violation);
    mean_tau += s.tau / n;
    mean_gap += s.endurance_gap / n;
    max_rel = std::max(max_rel, s.relative_ros_error);
  }
  RegretEstimate reg = regret_estimate(eps, bench.value_per_round, cfg.horizon);
  std::vector<std::string> summary_header = {
      "pacer",         "env",
      "T",             "seeds",
      "benchmark_per_round", "mean_reward",
      "mean_spend",    "mean_ros_violation",
      "max_ros_violation", "mean_regret",
      "regret_ci_lo",  "regret_ci_hi",
      "mean_tau",      "mean_endurance_gap",
      "max_relative_ros_error"};
  std::vector<std::string> summary_row = {cfg.pacer,
                                          env->name(),
                                          std::to_string(cfg.horizon),
                                          std::to_string(cfg.seeds),
                                          format_double(bench.value_per_round),
                                          format_double(mean_reward),
                                          format_double(mean_spend),
                                          format_double(mean_viol),
                                          format_double(max_viol),
                                          format_double(reg.mean),
                                          format_double(reg.ci_lo),
                                          format_double(reg.ci_hi),
                                          format_double(mean_tau),
                                          format_double(mean_gap),
                                          format_double(max_rel)};
  write_text_file(dir + "/summary.csv",
                  render_csv(summary_header, {summary_row}));
  write_manifest(dir, "run", cfg, {"episodes.csv", "summary.csv"});

  std::cout << "run: pacer=" << cfg.pacer << " env=" << env->name()
            << " T=" << cfg.horizon << " seeds=" << cfg.seeds
            << " mean_reward=" << format_double(mean_reward)
            << " mean_spend=" << format_double(mean_spend)
            << " max_relative_ros_error=" << format_double(max_rel) << "\n"
            << "wrote " << dir << "/episodes.csv, summary.csv, manifest.json"
            << std::endl;
  return kExitOk;
}

int cmd_scale(const Shared& sh) {
  RunConfig cfg = build_config(sh, "min", 30);
  std::vector<int> horizons = horizon_list(sh);
  if (cfg.horizon < 0 && !horizons.empty()) cfg.horizon = horizons.front();
  RunConfig resolved = cfg;
  resolve_run_config(resolved);
  std::string dir = prepare_out_dir(sh);

  PacerKind kind = pacer_from_string(cfg.pacer);
  std::unique_ptr<Env> env = make_env(resolved);
  // Step sizes stay on their per-horizon defaults unless given explicitly.
  EpisodeConfig ecfg;
  ecfg.rho = resolved.rho;
  ecfg.alpha = cfg.alpha;
  ecfg.eta = cfg.eta;
  ecfg.lambda_init = cfg.lambda_init;
  ecfg.mu_init = cfg.mu_init;
  ecfg.enforce_invariants = cfg.enforce_invariants;

  std::vector<MetricKind> metrics = {MetricKind::kRegret,
                                     MetricKind::kRosViolation,
                                     MetricKind::kEnduranceGap};
  ScalingStudy study = scaling_study(kind, *env, horizons, cfg.seeds, ecfg,
                                     metrics, cfg.seed, cfg.jobs);

  std::vector<std::vector<std::string>> ep_rows;
  for (size_t t = 0; t < study.horizons.size(); ++t)
    for (size_t s = 0; s < study.episodes[t].size(); ++s)
      ep_rows.push_back(episode_row(cfg.pacer, env->name(), study.horizons[t],
                                    cfg.seed + s, study.episodes[t][s]));
  write_text_file(dir + "/scale_episodes.csv",
                  render_csv(kEpisodeHeader, ep_rows));

  std::vector<std::string> sum_header = {"pacer", "env",    "T",
                                         "seeds", "metric", "mean"};
  std::vector<std::vector<std::string>> sum_rows;
  for (const ScalingReport& rep : study.reports)
    for (size_t t = 0; t < study.horizons.size(); ++t)
      sum_rows.push_back({cfg.pacer, env->name(),
                          std::to_string(study.horizons[t]),
                          std::to_string(cfg.seeds), to_string(rep.metric),
                          format_double(rep.means[t])});
  write_text_file(dir + "/scale_summary.csv", render_csv(sum_header, sum_rows));

  std::vector<std::string> slope_header = {
      "pacer", "env",   "metric",           "slope",
      "ci_lo", "ci_hi", "metric_nonpositive"};
  std::vector<std::vector<std::string>> slope_rows;
  for (const ScalingReport& rep : study.reports)
    slope_rows.push_back({cfg.pacer, env->name(), to_string(rep.metric),
                          format_double(rep.slope), format_double(rep.ci_lo),
                          format_double(rep.ci_hi),
                          rep.metric_nonpositive ? "1" : "0"});
  write_text_file(dir + "/scale_slopes.csv",
                  render_csv(slope_header, slope_rows));

  RunConfig manifest_cfg = resolved;
  manifest_cfg.alpha = cfg.alpha;
  manifest_cfg.eta = cfg.eta;
  manifest_cfg.mu_init = cfg.mu_init;
  write_manifest(dir, "scale", manifest_cfg,
                 {"scale_episodes.csv", "scale_summary.csv",
                  "scale_slopes.csv"});

  std::cout << "scale: pacer=" << cfg.pacer << " env=" << env->name()
            << " horizons=";
  for (size_t t = 0; t < study.horizons.size(); ++t)
    std::cout << (t ? "," : "") << study.horizons[t];
  std::cout << "\n";
  for (const ScalingReport& rep : study.reports) {
    std::cout << "  " << to_string(rep.metric) << ": slope "
              << format_double(rep.slope) << "  95% CI ["
              << format_double(rep.ci_lo) << ", " << format_double(rep.ci_hi)
              << "]" << (rep.metric_nonpositive ? "  (all means <= 0)" : "")
              << "\n";
  }
  std::cout << "wrote " << dir << "/scale_*.csv, manifest.json" << std::endl;
  return kExitOk;
}

int cmd_demo(const Shared& sh) {
  RunConfig cfg = build_config(sh, "sequential", 1);
  require_cfg(std::isfinite(sh.demo_c) && sh.demo_c > 0.0,
              "config: c must be finite and > 0");
  require_cfg(!sh.inits.empty(), "config: need at least one initial value");
  for (double v : sh.inits)
    require_cfg(std::isfinite(v) && v > 0.0,
                "config: initial multipliers must be > 0");
  std::vector<int> horizons = horizon_list(sh);
  for (int t : horizons)
    require_cfg(t >= 1, "invalid horizon: T must be >= 1");
  std::string dir = prepare_out_dir(sh);
  PacerKind kind = pacer_from_string(cfg.pacer);

  std::vector<std::string> header = {
      "pacer",  "T",       "lambda0",       "mu0",
      "alpha",  "eta",     "c",             "failure",
      "spend_ros", "ros_violation", "regret", "optimum",
      "value_per_round", "per_round_magnitude"};
  std::vector<std::vector<std::string>> rows;
  std::map<int, std::map<std::string, int>> counts;
  for (int horizon : horizons) {
    double root_t = std::sqrt(static_cast<double>(horizon));
    double alpha = cfg.alpha >= 0.0 ? cfg.alpha : 1.0 / root_t;
    double eta = cfg.eta >= 0.0 ? cfg.eta : 1.0 / root_t;
    for (double lambda0 : sh.inits) {
      for (double mu0 : sh.inits) {
        DemoReport rep = sequential_failure_demo(kind, lambda0, mu0, horizon,
                                                 alpha, eta, sh.demo_c,
                                                 cfg.seed);
        counts[horizon][rep.failure]++;
        rows.push_back({cfg.pacer,
                        std::to_string(horizon),
                        format_double(lambda0),
                        format_double(mu0),
                        format_double(alpha),
                        format_double(eta),
                        format_double(sh.demo_c),
                        rep.failure,
                        format_double(rep.spend_ros_instance),
                        format_double(rep.ros_violation),
                        format_double(rep.regret),
                        format_double(rep.optimum),
                        format_double(rep.value_per_round),
                        format_double(rep.per_round_magnitude)});
      }
    }
  }
  write_text_file(dir + "/demo_seq.csv", render_csv(header, rows));

  RunConfig manifest_cfg = cfg;
  manifest_cfg.horizon = horizons.front();
  write_manifest(dir, "demo-seq", manifest_cfg, {"demo_seq.csv"});

  std::cout << "demo-seq: pacer=" << cfg.pacer << " c="
            << format_double(sh.demo_c) << "\n";
  for (const auto& [horizon, by_kind] : counts) {
    std::cout << "  T=" << horizon << ":";
    for (const char* k : {"ros", "regret", "none"}) {
      auto it = by_kind.find(k);
      std::cout << " " << k << "=" << (it == by_kind.end() ? 0 : it->second);
    }
    std::cout << "\n";
  }
  std::cout << "wrote " << dir << "/demo_seq.csv, manifest.json" << std::endl;
  return kExitOk;
}

int cmd_fleet(const Shared& sh) {
  RunConfig cfg = build_config(sh, "min", 10);
  require_cfg(sh.campaigns >= 1, "config: campaigns must be >= 1");
  require_cfg(!sh.scales.empty(), "config: need at least one step scale");
  for (double s : sh.scales)
    require_cfg(std::isfinite(s) && s > 0.0,
                "config: step scales must be > 0");
  std::string dir = prepare_out_dir(sh);

  std::vector<PacerKind> kinds = {PacerKind::DualOptimal, PacerKind::Sequential,
                                  PacerKind::Min};
  std::vector<FleetResult> results = fleet_study(
      sh.campaigns, cfg.seeds, kinds, sh.scales, cfg.seed, cfg.jobs);

  std::vector<std::string> grid_header = {
      "pacer", "alpha_scale", "eta_scale", "zero_error_value_share",
      "zero_error_fraction", "total_value_share", "best"};
  std::vector<std::vector<std::string>> grid_rows;
  std::vector<std::string> bucket_header = {"pacer", "threshold", "fraction",
                                            "value_share"};
  std::vector<std::vector<std::string>> bucket_rows;
  std::vector<std::string> camp_header = {"pacer", "campaign",
                                          "relative_ros_error", "reward",
                                          "benchmark"};
  std::vector<std::vector<std::string>> camp_rows;
  for (const FleetResult& res : results) {
    std::string pacer = to_string(res.kind);
    for (const FleetGridCell& cell : res.grid) {
      bool best = cell.alpha_scale == res.best_alpha_scale &&
                  cell.eta_scale == res.best_eta_scale;
      grid_rows.push_back({pacer, format_double(cell.alpha_scale),
                           format_double(cell.eta_scale),
                           format_double(cell.zero_error_value_share),
                           format_double(cell.zero_error_fraction),
                           format_double(cell.total_value_share),
                           best ? "1" : "0"});
    }
    for (const BucketRow& row : res.table)
      bucket_rows.push_back({pacer, format_double(row.threshold),
                             format_double(row.fraction),
                             format_double(row.value_share)});
    for (const CampaignResult& c : res.campaigns)
      camp_rows.push_back({pacer, std::to_string(c.campaign),
                           format_double(c.relative_ros_error),
                           format_double(c.reward),
                           format_double(c.benchmark)});
  }
  write_text_file(dir + "/fleet_grid.csv", render_csv(grid_header, grid_rows));
  write_text_file(dir + "/fleet_buckets.csv",
                  render_csv(bucket_header, bucket_rows));
  write_text_file(dir + "/fleet_campaigns.csv",
                  render_csv(camp_header, camp_rows));

  RunConfig manifest_cfg = cfg;
  manifest_cfg.env = "campaign";
  manifest_cfg.horizon = 144;
  write_manifest(dir, "fleet", manifest_cfg,
                 {"fleet_grid.csv", "fleet_buckets.csv",
                  "fleet_campaigns.csv"});

  std::cout << "fleet: campaigns=" << sh.campaigns << " seeds=" << cfg.seeds
            << "\n";
  for (const FleetResult& res : results) {
    double zero_share = 0.0;
    for (const FleetGridCell& cell : res.grid) {
      if (cell.alpha_scale == res.best_alpha_scale &&
          cell.eta_scale == res.best_eta_scale)
        zero_share = cell.zero_error_value_share;
    }
    std::cout << "  " << to_string(res.kind) << ": best alpha_scale="
              << format_double(res.best_alpha_scale)
              << " eta_scale=" << format_double(res.best_eta_scale)
              << " zero_error_value_share=" << format_double(zero_share)
              << "\n";
  }
  std::cout << "wrote " << dir << "/fleet_*.csv, manifest.json" << std::endl;
  return kExitOk;
}

int cmd_oracle(const Shared& sh) {
  RunConfig cfg = build_config(sh, "min", 1);
  require_cfg(sh.samples >= 1000, "config: samples must be >= 1000");
  resolve_run_config(cfg);
  std::string dir = prepare_out_dir(sh);
  std::unique_ptr<Env> env = make_env(cfg);

  json out;
  out["env"] = env->name();
  std::ostringstream text;
  text << "env: " << env->name() << "\n";
  if (cfg.env == "campaign") {
    const auto& campaign =
        static_cast<const CampaignEnv&>(*env).landscape();
    FluidBenchmark fluid = fluid_benchmark(campaign);
    out["k_star"] = fluid.k_star;
    out["value_per_round"] = fluid.value_per_round;
    out["spend_per_round"] = fluid.spend_per_round;
    out["binding"] = to_string(fluid.binding);
    text << "k* = " << format_double(fluid.k_star) << "\n"
         << "value per round at k* = " << format_double(fluid.value_per_round)
         << "\n"
         << "spend per round at k* = " << format_double(fluid.spend_per_round)
         << "\n"
         << "binding constraint = " << to_string(fluid.binding) << "\n";
  } else {
    CrossingPoints cp = crossing_points(*env, 1e-4, sh.samples, 1);
    EnvBenchmark bench = env_benchmark(*env, sh.samples, 1);
    out["k_ros"] = cp.ros.k;
    out["k_ros_se"] = cp.ros.se;
    out["k_budget"] = cp.budget.k;
    out["k_budget_se"] = cp.budget.se;
    out["samples"] = cp.samples;
    out["k_star"] = bench.k_star;
    out["value_per_round"] = bench.value_per_round;
    text << "k_R = " << format_double(cp.ros.k) << " (se "
         << format_double(cp.ros.se) << ")\n"
         << "k_B = " << format_double(cp.budget.k) << " (se "
         << format_double(cp.budget.se) << ")\n"
         << "k* = " << format_double(bench.k_star) << "\n"
         << "value per round at k* = " << format_double(bench.value_per_round)
         << "\n";
  }
  write_text_file(dir + "/oracle.json", out.dump(2) + "\n");
  write_manifest(dir, "oracle", cfg, {"oracle.json"});
  std::cout << text.str() << "wrote " << dir << "/oracle.json, manifest.json"
            << std::endl;
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Repeated-auction pacing simulator: dual-based budget and "
               "return-on-spend control"};
  app.require_subcommand(1);

  Shared sh_run, sh_scale, sh_demo, sh_fleet, sh_oracle;

  CLI::App* c_run = app.add_subcommand(
      "run", "episodes of one pacer on one environment");
  add_common(c_run, sh_run, true);

  CLI::App* c_scale = app.add_subcommand(
      "scale", "metric growth across horizons, with bootstrap slopes");
  add_common(c_scale, sh_scale, true);

  CLI::App* c_demo = app.add_subcommand(
      "demo-seq",
      "stress grid on the two adversarial instances (spend blowup vs "
      "leftover budget)");
  add_common(c_demo, sh_demo, false);
  sh_demo.o_t = c_demo->add_option("--T", sh_demo.t_list, "horizons");
  sh_demo.o_alpha =
      c_demo->add_option("--alpha", sh_demo.alpha, "lambda step size");
  sh_demo.o_eta = c_demo->add_option("--eta", sh_demo.eta, "mu step size");
  c_demo->add_option("--c", sh_demo.demo_c,
                     "per-round failure threshold (default 0.01)");
  c_demo->add_option("--inits", sh_demo.inits,
                     "initial multiplier grid for lambda0 and mu0");

  CLI::App* c_fleet = app.add_subcommand(
      "fleet", "all three pacers on a synthetic campaign fleet, with a "
               "step-scale grid search");
  add_common(c_fleet, sh_fleet, false);
  sh_fleet.o_seeds = c_fleet->add_option("--seeds", sh_fleet.seeds,
                                         "episodes per campaign");
  c_fleet->add_option("--campaigns", sh_fleet.campaigns, "fleet size");
  c_fleet->add_option("--scales", sh_fleet.scales,
                      "step-size scales (each pair scale/sqrt(T))");

  CLI::App* c_oracle = app.add_subcommand(
      "oracle", "expected-gradient crossings and fluid benchmark of an "
                "environment");
  add_common(c_oracle, sh_oracle, false);
  sh_oracle.o_env = c_oracle->add_option(
      "--env", sh_oracle.env,
      "environment: exponential, adversarial-ros, adversarial-budget, "
      "campaign");
  sh_oracle.o_rho = c_oracle->add_option("--rho", sh_oracle.rho,
                                         "budget per round");
  sh_oracle.o_mu0 = c_oracle->add_option("--mu0", sh_oracle.mu0,
                                         "tight-budget instance parameter");
  sh_oracle.o_campaign = c_oracle->add_option(
      "--campaign", sh_oracle.campaign_file, "campaign JSON file");
  c_oracle->add_option("--samples", sh_oracle.samples,
                       "Monte Carlo sample count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    const Shared& active = c_run->parsed()     ? sh_run
                           : c_scale->parsed() ? sh_scale
                           : c_demo->parsed()  ? sh_demo
                           : c_fleet->parsed() ? sh_fleet
                                               : sh_oracle;
    set_kernel_override(kernel_kind_from_string(active.simd));
    kernel_ops();  // fail now if the requested kernel is unavailable

    if (c_run->parsed()) return cmd_run(sh_run);
    if (c_scale->parsed()) return cmd_scale(sh_scale);
    if (c_demo->parsed()) return cmd_demo(sh_demo);
    if (c_fleet->parsed()) return cmd_fleet(sh_fleet);
    return cmd_oracle(sh_oracle);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitConfig;
  } catch (const AssumptionViolation& e) {
    std::cerr << "assumption violated: " << e.what() << std::endl;
    return kExitAssumption;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violated: " << e.what() << std::endl;
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
}

}  // namespace pacing
