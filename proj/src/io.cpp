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

#include "pacing/io.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pacing/campaign.hpp"
#include "pacing/errors.hpp"

namespace pacing {

namespace {

using nlohmann::json;

CampaignLandscape load_campaign_file(const std::string& path) {
  std::string body = read_text_file(path);
  json j;
  try {
    j = json::parse(body);
  } catch (const json::exception& e) {
    throw ConfigError("campaign file '" + path + "': " + e.what());
  }
  return campaign_from_json(j);
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

PacerKind pacer_from_string(const std::string& name) {
  if (name == "dual-optimal") return PacerKind::DualOptimal;
  if (name == "sequential") return PacerKind::Sequential;
  if (name == "min") return PacerKind::Min;
  throw ConfigError("unknown pacer kind '" + name +
                    "' (choices: dual-optimal, sequential, min)");
}

RunConfig parse_config_raw(const json& j) {
  require(j.is_object(), "config: expected a JSON object");
  static const char* kKnown[] = {"pacer",   "env",  "T",
                                 "rho",     "alpha", "eta",
                                 "lambda_init", "mu_init", "seeds",
                                 "seed",    "jobs", "mu0",
                                 "campaign", "enforce_invariants"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : kKnown) known = known || it.key() == k;
    require(known, "config: unknown key '" + it.key() + "'");
  }

  RunConfig cfg;
  try {
    if (j.contains("pacer")) cfg.pacer = j.at("pacer").get<std::string>();
    if (j.contains("env")) cfg.env = j.at("env").get<std::string>();
    if (j.contains("T")) {
      require(j.at("T").is_number_integer(),
              "invalid horizon: T must be an integer");
      cfg.horizon = j.at("T").get<int>();
      require(cfg.horizon >= 1, "invalid horizon: T must be >= 1");
    }
    if (j.contains("rho")) {
      cfg.rho = j.at("rho").get<double>();
      require(cfg.rho > 0.0 && std::isfinite(cfg.rho),
              "config: rho must be finite and > 0");
    }
    if (j.contains("alpha")) {
      cfg.alpha = j.at("alpha").get<double>();
      require(cfg.alpha >= 0.0 && std::isfinite(cfg.alpha),
              "config: alpha must be finite and >= 0");
    }
    if (j.contains("eta")) {
      cfg.eta = j.at("eta").get<double>();
      require(cfg.eta >= 0.0 && std::isfinite(cfg.eta),
              "config: eta must be finite and >= 0");
    }
    if (j.contains("lambda_init")) {
      cfg.lambda_init = j.at("lambda_init").get<double>();
      require(cfg.lambda_init > 0.0 && std::isfinite(cfg.lambda_init),
              "config: lambda_init must be finite and > 0");
    }
    if (j.contains("mu_init")) {
      cfg.mu_init = j.at("mu_init").get<double>();
      require(cfg.mu_init > 0.0 && std::isfinite(cfg.mu_init),
              "config: mu_init must be finite and > 0");
    }
    if (j.contains("seeds")) {
      cfg.seeds = j.at("seeds").get<int>();
      require(cfg.seeds >= 1, "config: seeds must be >= 1");
    }
    if (j.contains("seed")) cfg.seed = j.at("seed").get<uint64_t>();
    if (j.contains("jobs")) {
      cfg.jobs = j.at("jobs").get<int>();
      require(cfg.jobs >= 1, "config: jobs must be >= 1");
    }
    if (j.contains("mu0")) {
      cfg.mu0 = j.at("mu0").get<double>();
      require(cfg.mu0 > 0.0 && std::isfinite(cfg.mu0),
              "config: mu0 must be finite and > 0");
    }
    if (j.contains("campaign"))
      cfg.campaign_file = j.at("campaign").get<std::string>();
    if (j.contains("enforce_invariants"))
      cfg.enforce_invariants = j.at("enforce_invariants").get<bool>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: malformed field: ") + e.what());
  }

  // Validate the names early so a bad config fails before any work.
  pacer_from_string(cfg.pacer);
  require(cfg.env == "exponential" || cfg.env == "adversarial-ros" ||
              cfg.env == "adversarial-budget" || cfg.env == "campaign",
          "unknown env '" + cfg.env +
              "' (choices: exponential, adversarial-ros, adversarial-budget, "
              "campaign)");
  return cfg;
}

RunConfig parse_config(const json& j) {
  RunConfig cfg = parse_config_raw(j);
  resolve_run_config(cfg);
  return cfg;
}

void resolve_run_config(RunConfig& cfg) {
  if (cfg.resolved) return;
  pacer_from_string(cfg.pacer);

  const bool rho_given = cfg.rho >= 0.0;
  if (cfg.env == "campaign") {
    require(!cfg.campaign_file.empty(),
            "campaign environment needs a campaign file");
    CampaignLandscape c = load_campaign_file(cfg.campaign_file);
    if (cfg.horizon < 0) cfg.horizon = c.horizon;
    require(!rho_given, "rho is fixed by the campaign file");
    cfg.rho = c.budget / static_cast<double>(c.horizon);
  } else if (cfg.env == "exponential") {
    if (cfg.horizon < 0) cfg.horizon = 10000;
    if (!rho_given) cfg.rho = ExponentialSecondPriceEnv().rho();
  } else if (cfg.env == "adversarial-ros" || cfg.env == "adversarial-budget") {
    if (cfg.horizon < 0) cfg.horizon = 10000;
    require(!rho_given, "rho is fixed by the '" + cfg.env + "' environment");
    auto flavor = cfg.env == "adversarial-ros"
                      ? AdversarialInstance::Flavor::RosBinding
                      : AdversarialInstance::Flavor::BudgetBinding;
    cfg.rho = AdversarialInstance(flavor, cfg.mu0).rho();
  } else {
    throw ConfigError("unknown env '" + cfg.env + "'");
  }
  require(cfg.horizon >= 1, "invalid horizon: T must be >= 1");

  const double root_t = std::sqrt(static_cast<double>(cfg.horizon));
  if (cfg.alpha < 0.0) cfg.alpha = 1.0 / root_t;
  if (cfg.eta < 0.0) cfg.eta = 1.0 / root_t;
  if (cfg.mu_init < 0.0) cfg.mu_init = cfg.rho;
  cfg.resolved = true;
}

json config_to_json(const RunConfig& cfg) {
  json j;
  j["pacer"] = cfg.pacer;
  j["env"] = cfg.env;
  j["T"] = cfg.horizon;
  j["rho"] = cfg.rho;
  j["alpha"] = cfg.alpha;
  j["eta"] = cfg.eta;
  j["lambda_init"] = cfg.lambda_init;
  j["mu_init"] = cfg.mu_init;
  j["seeds"] = cfg.seeds;
  j["seed"] = cfg.seed;
  j["jobs"] = cfg.jobs;
  j["mu0"] = cfg.mu0;
  j["campaign"] = cfg.campaign_file;
  j["enforce_invariants"] = cfg.enforce_invariants;
  return j;
}

std::unique_ptr<Env> make_env(const RunConfig& cfg) {
  if (cfg.env == "exponential") {
    ExponentialSecondPriceEnv base;
    double rho = cfg.rho >= 0.0 ? cfg.rho : base.rho();
    return std::make_unique<ExponentialSecondPriceEnv>(base.value_mean(),
                                                       base.bid_mean(), rho);
  }
  if (cfg.env == "adversarial-ros") {
    return std::make_unique<AdversarialInstance>(
        AdversarialInstance::Flavor::RosBinding);
  }
  if (cfg.env == "adversarial-budget") {
    return std::make_unique<AdversarialInstance>(
        AdversarialInstance::Flavor::BudgetBinding, cfg.mu0);
  }
  if (cfg.env == "campaign") {
    require(!cfg.campaign_file.empty(),
            "campaign environment needs a campaign file");
    return std::make_unique<CampaignEnv>(load_campaign_file(cfg.campaign_file));
  }
  throw ConfigError(
      "unknown env '" + cfg.env +
      "' (choices: exponential, adversarial-ros, adversarial-budget, "
      "campaign)");
}

EpisodeConfig episode_config(const RunConfig& cfg) {
  EpisodeConfig e;
  e.rho = cfg.rho;
  e.alpha = cfg.alpha;
  e.eta = cfg.eta;
  e.lambda_init = cfg.lambda_init;
  e.mu_init = cfg.mu_init;
  e.enforce_invariants = cfg.enforce_invariants;
  return e;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string render_csv(const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream out;
  for (size_t c = 0; c < header.size(); ++c) {
    if (c) out << ',';
    out << header[c];
  }
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw std::logic_error("render_csv: row width does not match header");
    for (size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      out << row[c];
    }
    out << '\n';
  }
  return out.str();
}

uint64_t fnv1a64(std::string_view bytes) {
  uint64_t h = 14695981039346656037ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(uint64_t x) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(x));
  return buf;
}

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string manifest_json(const std::string& command, const RunConfig& cfg,
                          const std::string& kernel_name,
                          const std::vector<std::string>& outputs) {
  json config = config_to_json(cfg);
  json m;
  m["command"] = command;
  m["config"] = config;
  m["content_hash"] = hex64(fnv1a64(config.dump()));
  m["kernel"] = kernel_name;
  std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  m["created"] = stamp;
  m["outputs"] = outputs;
  return m.dump(2) + "\n";
}

}  // namespace pacing
