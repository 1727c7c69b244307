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

#include "pacing/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "pacing/errors.hpp"
#include "pacing/kernels.hpp"
#include "pacing/rng.hpp"

namespace pacing {

namespace {

// Independent stream tags so gradient batches, crossing batches, and dual
// batches never share uniforms for the same seed.
constexpr uint64_t kGradStream = 0x47524144ULL;
constexpr uint64_t kCrossStream = 0x43524f53ULL;
constexpr uint64_t kDualStream = 0x4455414cULL;

double scan_upper(double rho) { return 4.0 * std::max(1.0, 1.0 / rho); }

GradientEstimate exact_estimate(double rho, double value, double payment,
                                double alloc) {
  GradientEstimate g;
  g.g_budget = rho - payment;
  g.g_ros = value - payment;
  g.value_per_round = value;
  g.win_rate = alloc;
  return g;
}

// Deterministic expected curves where they exist; empty otherwise.
std::function<GradientEstimate(double)> exact_evaluator(const Env& env) {
  if (const auto* adv = dynamic_cast<const AdversarialInstance*>(&env)) {
    const double rho = adv->rho();
    return [rho](double k) {
      const double alloc = std::min(k / 4.0, 1.0);
      const double pay = std::min(k * k / 8.0, 2.0);
      return exact_estimate(rho, alloc, pay, alloc);  // v = 1, value = alloc
    };
  }
  if (const auto* ce = dynamic_cast<const CampaignEnv*>(&env)) {
    const CampaignLandscape& c = ce->landscape();
    const double rho = ce->rho();
    const double vbar = c.value_scale();
    const double rounds = static_cast<double>(c.horizon);
    return [&c, rho, vbar, rounds](double k) {
      const double clicks = c.clicks_at(k) / rounds;
      return exact_estimate(rho, vbar * clicks, c.cost_at(k) / rounds,
                            clicks);
    };
  }
  return nullptr;
}

struct SampleBatch {
  std::vector<double> values;
  std::vector<double> bids;
};

// One frozen batch of (v, d) pairs for the stochastic second-price
// environment, drawn through the runtime-selected kernel.
std::shared_ptr<SampleBatch> draw_batch(const ExponentialSecondPriceEnv& env,
                                        int n, uint64_t key) {
  auto batch = std::make_shared<SampleBatch>();
  batch->values.resize(static_cast<size_t>(n));
  batch->bids.resize(static_cast<size_t>(n));
  const KernelOps& ops = kernel_ops();
  ops.exponential_fill(key, 0, env.value_mean(), batch->values.data(),
                       static_cast<size_t>(n));
  ops.exponential_fill(key, static_cast<uint64_t>(n), env.bid_mean(),
                       batch->bids.data(), static_cast<size_t>(n));
  return batch;
}

GradientEstimate estimate_from_sums(const GradientSums& s, int n,
                                    double rho) {
  const double dn = static_cast<double>(n);
  GradientEstimate g;
  g.g_budget = s.sum_gb / dn;
  g.g_ros = s.sum_gr / dn;
  g.second_moment_budget = s.sumsq_gb / dn;
  g.second_moment_ros = s.sumsq_gr / dn;
  g.se_budget = std::sqrt(
      std::max(0.0, g.second_moment_budget - g.g_budget * g.g_budget) / dn);
  g.se_ros =
      std::sqrt(std::max(0.0, g.second_moment_ros - g.g_ros * g.g_ros) / dn);
  g.win_rate = static_cast<double>(s.wins) / dn;
  // sum of payments is n*rho - sum_gb; adding the surplus sum gives value.
  g.value_per_round = (s.sum_gr + (dn * rho - s.sum_gb)) / dn;
  g.samples = n;
  return g;
}

// Monte Carlo evaluator over one frozen batch (common random numbers: the
// same draws back every multiplier, so g_budget is exactly monotone in k).
std::function<GradientEstimate(double)> batch_evaluator(
    const ExponentialSecondPriceEnv& env, int n, uint64_t key) {
  auto batch = draw_batch(env, n, key);
  const double rho = env.rho();
  return [batch, n, rho](double k) {
    const GradientSums s = kernel_ops().second_price_gradient_sums(
        batch->values.data(), batch->bids.data(), batch->values.size(), k,
        rho);
    return estimate_from_sums(s, n, rho);
  };
}

// Fallback for environments without closed forms or array batches: draw n
// samples once, evaluate each at bid k*v.
std::function<GradientEstimate(double)> generic_evaluator(const Env& env,
                                                          int n,
                                                          uint64_t key) {
  auto samples = std::make_shared<std::vector<AuctionSample>>();
  samples->reserve(static_cast<size_t>(n));
  CounterRng rng;
  rng.key = key;
  for (int i = 0; i < n; ++i) samples->push_back(env.sample(rng));
  const double rho = env.rho();
  return [samples, n, rho](double k) {
    GradientSums s;
    for (const AuctionSample& sample : *samples) {
      const BidOutcome out = evaluate(sample, k * sample.value);
      const double gb = rho - out.payment;
      const double gr = out.value_gained - out.payment;
      s.sum_gb += gb;
      s.sum_gr += gr;
      s.sumsq_gb = std::fma(gb, gb, s.sumsq_gb);
      s.sumsq_gr = std::fma(gr, gr, s.sumsq_gr);
      s.wins += out.allocation > 0.0 ? 1u : 0u;
    }
    return estimate_from_sums(s, n, rho);
  };
}

std::function<GradientEstimate(double)> make_evaluator(const Env& env, int n,
                                                       uint64_t stream,
                                                       uint64_t seed,
                                                       bool* is_exact) {
  if (auto exact = exact_evaluator(env)) {
    *is_exact = true;
    return exact;
  }
  *is_exact = false;
  const uint64_t key = derive_key(seed, stream);
  if (const auto* exp_env =
          dynamic_cast<const ExponentialSecondPriceEnv*>(&env)) {
    return batch_evaluator(*exp_env, n, key);
  }
  return generic_evaluator(env, n, key);
}

Crossing bisect_crossing(const std::function<GradientEstimate(double)>& eval,
                         bool budget_curve, double lo, double hi, double glo,
                         double tol, double probe_step) {
  const auto g_of = [&](double k) {
    const GradientEstimate e = eval(k);
    return budget_curve ? e.g_budget : e.g_ros;
  };
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g_of(mid);
    if (gm == 0.0) {
      lo = hi = mid;
      break;
    }
    if ((gm > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  Crossing c;
  c.k = 0.5 * (lo + hi);
  const double left = std::max(c.k - probe_step, 1e-12);
  const double right = c.k + probe_step;
  c.slope = (g_of(right) - g_of(left)) / (right - left);
  const GradientEstimate at = eval(c.k);
  const double se_g = budget_curve ? at.se_budget : at.se_ros;
  c.se = std::fabs(c.slope) > 0.0
             ? se_g / std::fabs(c.slope)
             : std::numeric_limits<double>::infinity();
  return c;
}

CrossingPoints find_crossings(
    const std::function<GradientEstimate(double)>& eval, double scan_max,
    double tol, int samples_reported, const std::string& env_name) {
  constexpr int kScanPoints = 200;
  std::vector<double> ks(kScanPoints), gb(kScanPoints), gr(kScanPoints);
  for (int i = 0; i < kScanPoints; ++i) {
    ks[i] = scan_max * static_cast<double>(i + 1) / kScanPoints;
    const GradientEstimate e = eval(ks[i]);
    gb[i] = e.g_budget;
    gr[i] = e.g_ros;
  }

  const auto locate = [&](const std::vector<double>& g,
                          const char* curve) -> std::pair<double, double> {
    std::vector<std::pair<double, double>> brackets;
    for (int i = 0; i < kScanPoints; ++i) {
      if (g[i] == 0.0) brackets.emplace_back(ks[i], ks[i]);
    }
    for (int i = 0; i + 1 < kScanPoints; ++i) {
      if (g[i] * g[i + 1] < 0.0) brackets.emplace_back(ks[i], ks[i + 1]);
    }
    if (brackets.empty()) {
      std::ostringstream os;
      os << curve << " gradient of env '" << env_name
         << "' has no crossing on (0, " << scan_max << "]";
      throw AssumptionViolation(os.str());
    }
    if (brackets.size() > 1) {
      std::ostringstream os;
      os << curve << " gradient of env '" << env_name << "' crosses zero "
         << brackets.size() << " times on (0, " << scan_max
         << "]: single-crossing assumption violated";
      throw AssumptionViolation(os.str());
    }
    return brackets.front();
  };

  const auto [blo, bhi] = locate(gb, "budget");
  const auto [rlo, rhi] = locate(gr, "ros");
  const double step = scan_max / kScanPoints;

  CrossingPoints cp;
  cp.budget = bisect_crossing(eval, true, blo, bhi,
                              eval(std::max(blo, 1e-12)).g_budget, tol, step);
  cp.ros = bisect_crossing(eval, false, rlo, rhi,
                           eval(std::max(rlo, 1e-12)).g_ros, tol, step);
  cp.samples = samples_reported;
  return cp;
}

}  // namespace

GradientEstimate expected_gradients(const Env& env, double mult, int n,
                                    uint64_t seed) {
  if (mult < 0.0) {
    throw std::domain_error("expected_gradients: negative multiplier");
  }
  if (mult == 0.0) {
    // Bid zero wins nothing anywhere: g_budget = rho exactly, g_ros = 0.
    GradientEstimate g;
    g.g_budget = env.rho();
    return g;
  }
  bool exact = false;
  auto eval = make_evaluator(env, n, kGradStream, seed, &exact);
  if (!exact && n <= 0) {
    throw std::domain_error("expected_gradients: need a positive sample count");
  }
  return eval(mult);
}

CrossingPoints crossing_points(const Env& env, double tol, int n,
                               uint64_t seed) {
  if (!(tol > 0.0)) throw std::domain_error("crossing_points: tol must be > 0");
  bool exact = false;
  auto eval = make_evaluator(env, n, kCrossStream, seed, &exact);
  if (!exact && n <= 0) {
    throw std::domain_error("crossing_points: need a positive sample count");
  }
  return find_crossings(eval, scan_upper(env.rho()), tol, exact ? 0 : n,
                        env.name());
}

DualValue dual_function(const Env& env, double lambda, double mu, int n,
                        uint64_t seed) {
  if (lambda < 0.0 || mu < 0.0) {
    throw std::domain_error("dual_function: multipliers must be >= 0");
  }
  if (lambda == 0.0 && mu == 0.0) {
    throw std::domain_error(
        "dual_function: unbounded at lambda = mu = 0 (no price on spend)");
  }
  const double rho = env.rho();

  if (dynamic_cast<const AdversarialInstance*>(&env) != nullptr) {
    // Inner maximum over the bid of (1+lambda) * min(b/4, 1)
    // - (lambda+mu) * min(b^2/8, 2); interior optimum at b = k below 4,
    // otherwise the saturated plateau.
    const double k = (1.0 + lambda) / (lambda + mu);
    const double inner = k <= 4.0
                             ? (1.0 + lambda) * (1.0 + lambda) /
                                   (8.0 * (lambda + mu))
                             : (1.0 + lambda) - 2.0 * (lambda + mu);
    return {rho * mu + inner, 0.0};
  }

  if (const auto* ce = dynamic_cast<const CampaignEnv*>(&env)) {
    // The inner objective is piecewise linear in the multiplier and flat
    // beyond the last knot, so its maximum sits on a knot.
    const CampaignLandscape& c = ce->landscape();
    const double rounds = static_cast<double>(c.horizon);
    const double vbar = c.value_scale();
    double best = 0.0;
    for (const auto& knot : c.knots) {
      const double inner = ((1.0 + lambda) * vbar * knot.clicks -
                            (lambda + mu) * knot.cost) /
                           rounds;
      best = std::max(best, inner);
    }
    return {rho * mu + best, 0.0};
  }

  if (const auto* le = dynamic_cast<const ListEnv*>(&env)) {
    // Exact average over the finite stream. Second-price rounds have the
    // closed inner maximum; anything else is maximized on a bid grid.
    const double bid_hi = scan_upper(rho);
    double sum = 0.0;
    for (const AuctionSample& s : le->samples()) {
      double inner = 0.0;
      if (const auto* sp = std::get_if<SecondPrice>(&s.mechanism)) {
        inner = std::max(0.0, (1.0 + lambda) * s.value -
                                  (lambda + mu) * sp->competing_bid);
      } else {
        constexpr int kGrid = 1024;
        const double top = bid_hi * std::max(1.0, s.value);
        for (int i = 0; i <= kGrid; ++i) {
          const double b = top * static_cast<double>(i) / kGrid;
          const BidOutcome out = evaluate(s, b);
          inner = std::max(inner, (1.0 + lambda) * out.value_gained -
                                      (lambda + mu) * out.payment);
        }
      }
      sum += inner;
    }
    return {rho * mu + sum / static_cast<double>(le->samples().size()), 0.0};
  }

  const auto* exp_env = dynamic_cast<const ExponentialSecondPriceEnv*>(&env);
  if (exp_env == nullptr) {
    throw AssumptionViolation("dual_function: no evaluation rule for env '" +
                              env.name() + "'");
  }
  if (n <= 0) {
    throw std::domain_error("dual_function: need a positive sample count");
  }
  auto batch = draw_batch(*exp_env, n, derive_key(seed, kDualStream));
  double sum = 0.0;
  double sumsq = 0.0;
  for (size_t i = 0; i < batch->values.size(); ++i) {
    const double inner =
        std::max(0.0, (1.0 + lambda) * batch->values[i] -
                          (lambda + mu) * batch->bids[i]);
    sum += inner;
    sumsq = std::fma(inner, inner, sumsq);
  }
  const double dn = static_cast<double>(n);
  const double mean = sum / dn;
  const double var = std::max(0.0, sumsq / dn - mean * mean);
  return {rho * mu + mean, std::sqrt(var / dn)};
}

std::string to_string(BindingConstraint b) {
  switch (b) {
    case BindingConstraint::kBudget:
      return "budget";
    case BindingConstraint::kRos:
      return "ros";
    default:
      return "none";
  }
}

FluidBenchmark fluid_benchmark(const std::function<double(double)>& conv,
                               const std::function<double(double)>& spend,
                               double rho, double k_max, double tol) {
  if (!(rho > 0.0)) throw std::domain_error("fluid_benchmark: rho must be > 0");
  if (!(k_max > 0.0) || !(tol > 0.0)) {
    throw std::domain_error("fluid_benchmark: k_max and tol must be > 0");
  }
  const auto feasible = [&](double k) {
    const double s = spend(k);
    return s <= rho && conv(k) >= s;
  };
  if (!feasible(0.0)) {
    throw AssumptionViolation("fluid_benchmark: infeasible at multiplier 0");
  }
  FluidBenchmark out;
  if (feasible(k_max)) {
    out.k_star = k_max;
    out.value_per_round = conv(k_max);
    out.spend_per_round = spend(k_max);
    out.binding = BindingConstraint::kNone;
    return out;
  }
  double lo = 0.0;
  double hi = k_max;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  out.k_star = lo;
  out.value_per_round = conv(lo);
  out.spend_per_round = spend(lo);
  const double probe = std::min(k_max, lo + tol);
  out.binding = spend(probe) > rho ? BindingConstraint::kBudget
                                   : BindingConstraint::kRos;
  return out;
}

FluidBenchmark fluid_benchmark(const CampaignLandscape& campaign) {
  campaign.validate();
  const double rounds = static_cast<double>(campaign.horizon);
  const double vbar = campaign.value_scale();
  const double rho = campaign.budget / rounds;
  return fluid_benchmark(
      [&](double k) { return vbar * campaign.clicks_at(k) / rounds; },
      [&](double k) { return campaign.cost_at(k) / rounds; }, rho,
      campaign.max_mult());
}

OfflineOpt offline_opt_small(const std::vector<AuctionSample>& stream,
                             double rho, double resolution) {
  constexpr size_t kMaxRounds = 20;
  if (stream.size() > kMaxRounds) {
    throw std::domain_error(
        "offline_opt_small: subset enumeration only supports up to 20 "
        "rounds");
  }
  if (!(rho > 0.0)) {
    throw std::domain_error("offline_opt_small: rho must be > 0");
  }
  const size_t n = stream.size();
  const double budget = rho * static_cast<double>(n);
  OfflineOpt result;
  if (n == 0) return result;

  const bool all_second_price =
      std::all_of(stream.begin(), stream.end(), [](const AuctionSample& s) {
        return std::holds_alternative<SecondPrice>(s.mechanism);
      });

  constexpr double kEps = 1e-9;
  if (all_second_price) {
    std::vector<double> v(n), d(n);
    for (size_t i = 0; i < n; ++i) {
      v[i] = stream[i].value;
      d[i] = std::get<SecondPrice>(stream[i].mechanism).competing_bid;
    }
    double best = 0.0;
    for (uint32_t mask = 0; mask < (1u << n); ++mask) {
      double sv = 0.0;
      double sd = 0.0;
      for (size_t i = 0; i < n; ++i) {
        if (mask & (1u << i)) {
          sv += v[i];
          sd += d[i];
        }
      }
      if (sd <= budget + kEps && sd <= sv + kEps) best = std::max(best, sv);
    }
    result.value = best;
    return result;
  }

  // Mixed mechanisms: per-round option menus over a bid grid, then a
  // dynamic program over spend rounded UP to `resolution` units. Rounding
  // up can only shrink the feasible set, so the result never exceeds the
  // true optimum.
  if (!(resolution > 0.0)) {
    throw std::domain_error("offline_opt_small: resolution must be > 0");
  }
  const size_t max_units =
      static_cast<size_t>(std::ceil(budget / resolution)) + 1;
  if (max_units > 4'000'000) {
    throw std::domain_error(
        "offline_opt_small: resolution too fine for this budget");
  }
  constexpr int kBidGrid = 160;
  const double neg = -std::numeric_limits<double>::infinity();
  std::vector<double> best_value(max_units + 1, neg);
  best_value[0] = 0.0;
  for (const AuctionSample& s : stream) {
    std::vector<std::pair<size_t, double>> options = {{0, 0.0}};
    const double top = scan_upper(rho) * std::max(1.0, s.value);
    for (int gi = 1; gi <= kBidGrid; ++gi) {
      const double b = top * static_cast<double>(gi) / kBidGrid;
      const BidOutcome out = evaluate(s, b);
      if (out.payment > budget + kEps) continue;
      const size_t units = static_cast<size_t>(
          std::ceil(std::max(0.0, out.payment) / resolution - 1e-12));
      options.emplace_back(units, out.value_gained);
    }
    std::vector<double> next(max_units + 1, neg);
    for (size_t u = 0; u <= max_units; ++u) {
      if (best_value[u] == neg) continue;
      for (const auto& [du, dv] : options) {
        const size_t nu = u + du;
        if (nu > max_units) continue;
        next[nu] = std::max(next[nu], best_value[u] + dv);
      }
    }
    best_value.swap(next);
  }
  double best = 0.0;
  for (size_t u = 0; u <= max_units; ++u) {
    if (best_value[u] == neg) continue;
    const double spend = static_cast<double>(u) * resolution;
    if (spend <= budget + kEps && spend <= best_value[u] + kEps) {
      best = std::max(best, best_value[u]);
    }
  }
  result.value = best;
  if (result.value == 0.0 && budget > 0.0 && resolution > budget) {
    result.warning =
        "resolution exceeds the budget; the optimum may be underestimated";
  }
  return result;
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol) {
  struct Impl {
    const std::function<double(double)>& f;
    double recurse(double a, double fa, double m, double fm, double b,
                   double fb, double whole, double tol, int depth) const {
      const double lm = 0.5 * (a + m);
      const double rm = 0.5 * (m + b);
      const double flm = f(lm);
      const double frm = f(rm);
      const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      const double delta = left + right - whole;
      if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
      }
      return recurse(a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1) +
             recurse(m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1);
    }
  };
  if (!(tol > 0.0)) throw std::domain_error("adaptive_simpson: tol must be > 0");
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return Impl{f}.recurse(a, fa, m, fm, b, fb, whole, tol, 48);
}

ExpectedCurvePoint exponential_env_quadrature(
    const ExponentialSecondPriceEnv& env, double k, double tol) {
  if (k < 0.0) {
    throw std::domain_error("exponential_env_quadrature: negative multiplier");
  }
  ExpectedCurvePoint p;
  if (k == 0.0) return p;
  const double mv = env.value_mean();
  const double md = env.bid_mean();
  const double hi = 40.0 * mv;
  const auto density = [mv](double v) { return std::exp(-v / mv) / mv; };
  p.alloc = adaptive_simpson(
      [&](double v) { return density(v) * (1.0 - std::exp(-k * v / md)); },
      0.0, hi, tol);
  p.payment = adaptive_simpson(
      [&](double v) {
        const double kv = k * v / md;
        return density(v) * md * (1.0 - std::exp(-kv) * (1.0 + kv));
      },
      0.0, hi, tol);
  p.value_won = adaptive_simpson(
      [&](double v) {
        return density(v) * v * (1.0 - std::exp(-k * v / md));
      },
      0.0, hi, tol);
  return p;
}

CrossingPoints exponential_env_quadrature_crossings(
    const ExponentialSecondPriceEnv& env, double tol) {
  const double rho = env.rho();
  const auto eval = [&env, rho](double k) {
    const ExpectedCurvePoint p = exponential_env_quadrature(env, k);
    GradientEstimate g;
    g.g_budget = rho - p.payment;
    g.g_ros = p.value_won - p.payment;
    g.value_per_round = p.value_won;
    return g;
  };
  return find_crossings(eval, scan_upper(rho), tol, 0,
                        env.name() + "-quadrature");
}

EnvBenchmark env_benchmark(const Env& env, int n, uint64_t seed) {
  if (const auto* adv = dynamic_cast<const AdversarialInstance*>(&env)) {
    return {adv->opt_bid(), adv->opt_value_per_round()};
  }
  if (const auto* ce = dynamic_cast<const CampaignEnv*>(&env)) {
    const FluidBenchmark fb = fluid_benchmark(ce->landscape());
    return {fb.k_star, fb.value_per_round};
  }
  if (dynamic_cast<const ExponentialSecondPriceEnv*>(&env) != nullptr) {
    const CrossingPoints cp = crossing_points(env, 1e-4, n, seed);
    const double k_star = std::min(cp.ros.k, cp.budget.k);
    return {k_star, expected_gradients(env, k_star, n, seed).value_per_round};
  }
  throw AssumptionViolation("env_benchmark: no benchmark rule for env '" +
                            env.name() + "'");
}

}  // namespace pacing
