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

// Configuration parsing, environment construction, deterministic CSV
// rendering, and the run manifest. Every data file body is a pure function
// of the configuration; wall-clock state appears only in manifest.json.

#ifndef PACING_IO_HPP_
#define PACING_IO_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "pacing/envs.hpp"
#include "pacing/pacing.hpp"

#include "json.hpp"

namespace pacing {

PacerKind pacer_from_string(const std::string& name);

// One invocation's settings. Negative numeric fields are "not given":
// resolve_run_config substitutes the environment and horizon defaults.
struct RunConfig {
  std::string pacer = "min";
  std::string env = "exponential";
  int horizon = -1;               // rounds; default 10000 (campaign: its day)
  double rho = -1.0;              // budget per round; default: environment's
  double alpha = -1.0;            // lambda step; default 1/sqrt(T)
  double eta = -1.0;              // mu step; default 1/sqrt(T)
  double lambda_init = 1.0;
  double mu_init = -1.0;          // default: rho
  int seeds = 30;                 // episodes per cell
  uint64_t seed = 1;              // first episode seed
  int jobs = 1;
  double mu0 = 1.0;               // tight-budget stress instance parameter
  std::string campaign_file;      // landscape JSON, env "campaign" only
  bool enforce_invariants = true;
  bool resolved = false;          // set by resolve_run_config
};

// Strict parse: the value must be a JSON object, every key must be known
// (pacer, env, T, rho, alpha, eta, lambda_init, mu_init, seeds, seed, jobs,
// mu0, campaign), and every given value well-typed and in range.
RunConfig parse_config_raw(const nlohmann::json& j);

// parse_config_raw followed by resolve_run_config.
RunConfig parse_config(const nlohmann::json& j);

// Fills the defaulted fields in place: horizon (10000, or the campaign's
// own day length), rho (the environment's rate; only the stochastic
// second-price environment accepts an override), alpha and eta
// (1/sqrt(horizon)), mu_init (rho).
void resolve_run_config(RunConfig& cfg);

// Canonical JSON for manifests and hashing; keys sorted, defaults included.
nlohmann::json config_to_json(const RunConfig& cfg);

// Environment named by the resolved config (exponential, adversarial-ros,
// adversarial-budget, campaign).
std::unique_ptr<Env> make_env(const RunConfig& cfg);

// Episode settings implied by the resolved config.
EpisodeConfig episode_config(const RunConfig& cfg);

// Shortest round-trip decimal ("%.17g"); infinities render as "inf"/"-inf".
std::string format_double(double x);

// data[r][c] rendered under the header; cells must already be strings.
std::string render_csv(const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows);

uint64_t fnv1a64(std::string_view bytes);
std::string hex64(uint64_t x);

void write_text_file(const std::string& path, const std::string& body);
std::string read_text_file(const std::string& path);

// manifest.json body: command, canonical config, FNV-1a hash of that
// config's dump, kernel name, creation timestamp, output file list. The
// timestamp is the only nondeterministic field any command writes.
std::string manifest_json(const std::string& command, const RunConfig& cfg,
                          const std::string& kernel_name,
                          const std::vector<std::string>& outputs);

}  // namespace pacing

#endif  // PACING_IO_HPP_
