// Copyright 2026 The fednormec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FEDNORMEC_HARNESS_HPP_
#define FEDNORMEC_HARNESS_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fednormec/baselines.hpp"
#include "fednormec/fed_core.hpp"
#include "fednormec/privacy.hpp"
#include "fednormec/problems.hpp"
#include "fednormec/theory.hpp"

namespace fednormec {

// Environment variable that, when set, roots every relative output_dir.
inline constexpr const char* kOutputRootEnv = "FEDNORMEC_OUT_ROOT";

// Schedule request as it appears in a config file; problem-derived constants
// (L, f(x0), f^inf, Delta^inf, M, d) are filled in at run time.
struct ScheduleRequest {
  ScheduleKind kind = ScheduleKind::kManual;
  double d1 = 1.0;
  double d2 = 1.0;
  double alpha = 0.5;
  double sampled_clients = 1.0;
  PrivacyBudget budget;
};

// Everything a run needs, parsed from one JSON config document.
struct ExperimentSpec {
  SuiteSpec suite;
  std::string algorithm = "fed-alpha-normec";  // or "dp-fedavg"
  RunConfig run;
  ScheduleRequest schedule;  // kManual -> use `run` verbatim
  int replicates = 1;
  std::string output_dir = "fednormec-out";
  std::uint64_t seed = 42;
  // Optional sweep axes; used by the sweep driver, ignored by single runs.
  std::vector<double> sweep_p;
  std::vector<double> sweep_beta;
  // "fixed" keeps run.sigma_dp for every cell; "experiment" recalibrates each
  // cell as p * beta * sqrt(K log(1/delta)) / epsilon from sweep_budget.
  std::string sweep_sigma_rule = "fixed";
  PrivacyBudget sweep_budget;
};

// Parses and validates a JSON config. Unknown keys, type mismatches and
// constraint violations all raise ConfigError carrying the path to the
// offending key. Defaults (alpha = 0.01, p = 1, T = 1, ...) are filled in.
ExperimentSpec parse_config(const std::string& text);

// Canonical serialization; parse(serialize(spec)) == spec.
std::string serialize_config(const ExperimentSpec& spec);

// FNV-1a over the canonical serialization; recorded in outputs.
std::uint64_t spec_hash(const ExperimentSpec& spec);

// Problem + fully resolved run parameters (schedule applied when requested).
struct ResolvedExperiment {
  FederationProblem problem;
  RunConfig run;
  Schedule schedule;  // kind == kManual when no corollary was requested
  bool has_schedule = false;
};

ResolvedExperiment resolve_experiment(const ExperimentSpec& spec);

struct RunArtifacts {
  std::filesystem::path directory;
  std::vector<std::filesystem::path> metrics_csv;  // one per replicate
  std::filesystem::path summary_json;
  bool diverged = false;
};

// Runs all replicates (replicate r uses seed + r), writing one metrics CSV
// per replicate plus summary.json (and schedule.json / bound.json where
// applicable). Partial CSVs are still written when a replicate diverges.
RunArtifacts run_experiment(const ExperimentSpec& spec);

// Cartesian sweep over sweep_p x sweep_beta: one cell directory per
// combination plus a long-format communications.csv whose x-axis is the
// total client->server transmissions k*p*M.
RunArtifacts run_sweep(const ExperimentSpec& spec);

// Evaluates the convergence-bound report for the spec's resolved run.
BoundReport evaluate_bound(const ExperimentSpec& spec);
std::string bound_report_json(const BoundReport& report);

// CSV schema, stable and versioned (metrics_format_version in summary.json).
std::string metrics_csv_header();
void write_metrics_csv(const std::filesystem::path& path,
                       const std::vector<RoundRecord>& records);

}  // namespace fednormec

#endif  // FEDNORMEC_HARNESS_HPP_
