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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "fednormec/errors.hpp"
#include "fednormec/harness.hpp"
#include "fednormec/verify.hpp"

namespace {

// Exit codes: 0 ok, 2 config/usage error, 3 verification failure,
// 4 runtime divergence. 1 is reserved for unexpected failures.
constexpr int kOk = 0;
constexpr int kUnexpected = 1;
constexpr int kConfigError = 2;
constexpr int kVerifyFailure = 3;
constexpr int kDiverged = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw fednormec::ConfigError(path, "cannot open config file");
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fednormec::ExperimentSpec load_spec(const std::string& path,
                                    const std::optional<std::uint64_t>& seed,
                                    const std::optional<std::string>& out) {
  fednormec::ExperimentSpec spec = fednormec::parse_config(read_file(path));
  if (seed) {
    spec.seed = *seed;
  }
  if (out) {
    spec.output_dir = *out;
  }
  return spec;
}

void print_artifacts(const fednormec::RunArtifacts& artifacts) {
  std::cout << "output directory: " << artifacts.directory.string() << "\n";
  for (const auto& p : artifacts.metrics_csv) {
    std::cout << "  metrics: " << p.string() << "\n";
  }
  std::cout << "  summary: " << artifacts.summary_json.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic simulator for normalized error-compensated "
               "federated optimization with differential privacy"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::string> out_override;
  std::string suite;

  CLI::App* cmd_run = app.add_subcommand("run", "Run one experiment config");
  cmd_run->add_option("config", config_path, "JSON config file")->required();
  cmd_run->add_option("--seed", seed_override, "Override the config seed");
  cmd_run->add_option("--out", out_override, "Override the output directory");

  CLI::App* cmd_sweep =
      app.add_subcommand("sweep", "Run the config's p x beta sweep");
  cmd_sweep->add_option("config", config_path, "JSON config file")->required();
  cmd_sweep->add_option("--seed", seed_override, "Override the config seed");
  cmd_sweep->add_option("--out", out_override, "Override the output directory");

  CLI::App* cmd_verify = app.add_subcommand(
      "verify", "Run a property suite: lemmas|sampling|convergence|bounds|all");
  cmd_verify->add_option("suite", suite, "Suite name")->required();

  CLI::App* cmd_bound = app.add_subcommand(
      "bound", "Evaluate the convergence-bound report for a config");
  cmd_bound->add_option("config", config_path, "JSON config file")->required();
  cmd_bound->add_option("--seed", seed_override, "Override the config seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (cmd_run->parsed()) {
      const auto spec = load_spec(config_path, seed_override, out_override);
      const auto artifacts = fednormec::run_experiment(spec);
      print_artifacts(artifacts);
      if (artifacts.diverged) {
        std::cerr << "a replicate diverged; partial trajectory persisted\n";
        return kDiverged;
      }
      return kOk;
    }
    if (cmd_sweep->parsed()) {
      const auto spec = load_spec(config_path, seed_override, out_override);
      const auto artifacts = fednormec::run_sweep(spec);
      print_artifacts(artifacts);
      return artifacts.diverged ? kDiverged : kOk;
    }
    if (cmd_verify->parsed()) {
      const fednormec::VerifyReport report = fednormec::run_verify(suite);
      for (const auto& c : report.checks) {
        std::printf("[%s] %-28s %s (%.2fs)\n", c.pass ? "PASS" : "FAIL",
                    c.name.c_str(), c.detail.c_str(), c.elapsed_s);
      }
      std::cout << fednormec::verify_report_json(report);
      return report.all_pass() ? kOk : kVerifyFailure;
    }
    if (cmd_bound->parsed()) {
      const auto spec = load_spec(config_path, seed_override, std::nullopt);
      const auto report = fednormec::evaluate_bound(spec);
      std::cout << fednormec::bound_report_json(report);
      return kOk;
    }
  } catch (const fednormec::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const fednormec::InvalidInputError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kConfigError;
  } catch (const fednormec::InvalidProblemError& e) {
    std::cerr << "invalid problem: " << e.what() << "\n";
    return kConfigError;
  } catch (const fednormec::ScheduleInfeasibleError& e) {
    std::cerr << "schedule infeasible: " << e.what() << "\n";
    return kConfigError;
  } catch (const fednormec::DivergedLocalUpdateError& e) {
    std::cerr << "diverged: " << e.what() << "\n";
    return kDiverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUnexpected;
  }
  return kUnexpected;
}
