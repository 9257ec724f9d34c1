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

#include "fednormec/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <utility>

#include "json.hpp"

#include "fednormec/errors.hpp"

namespace fednormec {

namespace {

using nlohmann::json;

void require_known_keys(const json& obj, const std::string& path,
                        const std::set<std::string>& allowed) {
  if (!obj.is_object()) {
    throw ConfigError(path.empty() ? "/" : path, "expected an object");
  }
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.contains(it.key())) {
      throw ConfigError(path + "/" + it.key(), "unknown key");
    }
  }
}

double get_number(const json& obj, const std::string& path,
                  const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) {
    throw ConfigError(path + "/" + key, "expected a number");
  }
  return obj[key].get<double>();
}

int get_int(const json& obj, const std::string& path, const std::string& key,
            int fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer()) {
    throw ConfigError(path + "/" + key, "expected an integer");
  }
  return obj[key].get<int>();
}

bool get_bool(const json& obj, const std::string& path, const std::string& key,
              bool fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_boolean()) {
    throw ConfigError(path + "/" + key, "expected a boolean");
  }
  return obj[key].get<bool>();
}

std::string get_string(const json& obj, const std::string& path,
                       const std::string& key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_string()) {
    throw ConfigError(path + "/" + key, "expected a string");
  }
  return obj[key].get<std::string>();
}

std::vector<double> get_number_list(const json& obj, const std::string& path,
                                    const std::string& key) {
  std::vector<double> out;
  if (!obj.contains(key)) return out;
  if (!obj[key].is_array()) {
    throw ConfigError(path + "/" + key, "expected a list of numbers");
  }
  for (const auto& v : obj[key]) {
    if (!v.is_number()) {
      throw ConfigError(path + "/" + key, "expected a list of numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

SuiteSpec parse_suite(const json& obj) {
  require_known_keys(obj, "/problem",
                     {"family", "clients", "components", "dim",
                      "hetero_scale"});
  SuiteSpec s;
  const std::string family =
      get_string(obj, "/problem", "family", "quadratic-hetero");
  try {
    s.family = suite_family_from_name(family);
  } catch (const InvalidInputError& e) {
    throw ConfigError("/problem/family", e.what());
  }
  s.clients = get_int(obj, "/problem", "clients", 20);
  s.components = get_int(obj, "/problem", "components", 2);
  s.dim = get_int(obj, "/problem", "dim", 10);
  s.hetero_scale = get_number(obj, "/problem", "hetero_scale", 1.0);
  if (s.clients < 1) throw ConfigError("/problem/clients", "must be >= 1");
  if (s.components < 1) throw ConfigError("/problem/components", "must be >= 1");
  if (s.dim < 1) throw ConfigError("/problem/dim", "must be >= 1");
  if (!(s.hetero_scale >= 0.0)) {
    throw ConfigError("/problem/hetero_scale", "must be >= 0");
  }
  return s;
}

RunConfig parse_run(const json& obj) {
  require_known_keys(obj, "/run",
                     {"gamma", "beta", "eta", "alpha", "p", "sigma_dp",
                      "rounds", "local", "private", "server_normalize",
                      "degenerate_tol", "theory_check", "init", "x0"});
  RunConfig r;
  r.gamma = get_number(obj, "/run", "gamma", r.gamma);
  r.beta = get_number(obj, "/run", "beta", r.beta);
  r.eta = get_number(obj, "/run", "eta", r.eta);
  r.alpha = get_number(obj, "/run", "alpha", 0.01);
  r.participation = get_number(obj, "/run", "p", 1.0);
  r.sigma_dp = get_number(obj, "/run", "sigma_dp", 0.0);
  r.rounds = get_int(obj, "/run", "rounds", 0);
  r.dp_enabled = get_bool(obj, "/run", "private", false);
  r.server_normalize = get_bool(obj, "/run", "server_normalize", true);
  r.degenerate_tol = get_number(obj, "/run", "degenerate_tol", 1e-12);
  r.theory_check = get_bool(obj, "/run", "theory_check", false);
  if (obj.contains("local")) {
    const json& loc = obj["local"];
    require_known_keys(loc, "/run/local", {"mode", "steps"});
    const std::string mode = get_string(loc, "/run/local", "mode", "gd");
    if (mode == "gd") {
      r.local_mode = LocalMode::kGd;
    } else if (mode == "ig") {
      r.local_mode = LocalMode::kIg;
    } else {
      throw ConfigError("/run/local/mode", "must be \"gd\" or \"ig\"");
    }
    r.local_steps = get_int(loc, "/run/local", "steps", 1);
  }
  if (obj.contains("init")) {
    const json& init = obj["init"];
    require_known_keys(init, "/run/init", {"strategy", "offset"});
    const std::string strategy =
        get_string(init, "/run/init", "strategy", "exact-residual");
    try {
      r.init = memory_init_from_name(strategy);
    } catch (const InvalidInputError& e) {
      throw ConfigError("/run/init/strategy", e.what());
    }
    r.init_offset = get_number(init, "/run/init", "offset", 0.0);
  }
  if (obj.contains("x0")) {
    const auto values = get_number_list(obj, "/run", "x0");
    r.x0 = Vec(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) {
      r.x0[static_cast<int>(j)] = values[j];
    }
  }
  try {
    validate_run_config(r);
  } catch (const ConfigError& e) {
    throw ConfigError("/run/" + e.path(), e.reason());
  }
  return r;
}

ScheduleRequest parse_schedule(const json& obj) {
  require_known_keys(obj, "/schedule",
                     {"name", "d1", "d2", "alpha", "sampled_clients",
                      "budget"});
  ScheduleRequest s;
  const std::string name = get_string(obj, "/schedule", "name", "manual");
  try {
    s.kind = schedule_kind_from_name(name);
  } catch (const InvalidInputError& e) {
    throw ConfigError("/schedule/name", e.what());
  }
  s.d1 = get_number(obj, "/schedule", "d1", 1.0);
  s.d2 = get_number(obj, "/schedule", "d2", 1.0);
  s.alpha = get_number(obj, "/schedule", "alpha", 0.5);
  s.sampled_clients = get_number(obj, "/schedule", "sampled_clients", 1.0);
  if (obj.contains("budget")) {
    const json& b = obj["budget"];
    require_known_keys(b, "/schedule/budget", {"epsilon", "delta", "c"});
    s.budget.epsilon = get_number(b, "/schedule/budget", "epsilon", 1.0);
    s.budget.delta = get_number(b, "/schedule/budget", "delta", 1e-5);
    s.budget.accountant_scale = get_number(b, "/schedule/budget", "c", 1.0);
  }
  return s;
}

json suite_to_json(const SuiteSpec& s) {
  return json{{"family", suite_family_name(s.family)},
              {"clients", s.clients},
              {"components", s.components},
              {"dim", s.dim},
              {"hetero_scale", s.hetero_scale}};
}

json run_to_json(const RunConfig& r) {
  json j{{"gamma", r.gamma},
         {"beta", r.beta},
         {"eta", r.eta},
         {"alpha", r.alpha},
         {"p", r.participation},
         {"sigma_dp", r.sigma_dp},
         {"rounds", r.rounds},
         {"private", r.dp_enabled},
         {"server_normalize", r.server_normalize},
         {"degenerate_tol", r.degenerate_tol},
         {"theory_check", r.theory_check},
         {"local",
          {{"mode", r.local_mode == LocalMode::kIg ? "ig" : "gd"},
           {"steps", r.local_steps}}},
         {"init",
          {{"strategy", memory_init_name(r.init)},
           {"offset", r.init_offset}}}};
  if (r.x0.size() > 0) {
    j["x0"] = std::vector<double>(r.x0.data(), r.x0.data() + r.x0.size());
  }
  return j;
}

json schedule_request_to_json(const ScheduleRequest& s) {
  return json{{"name", schedule_kind_name(s.kind)},
              {"d1", s.d1},
              {"d2", s.d2},
              {"alpha", s.alpha},
              {"sampled_clients", s.sampled_clients},
              {"budget",
               {{"epsilon", s.budget.epsilon},
                {"delta", s.budget.delta},
                {"c", s.budget.accountant_scale}}}};
}

json schedule_to_json(const Schedule& s) {
  return json{{"name", schedule_kind_name(s.kind)},
              {"gamma", s.gamma},
              {"beta", s.beta},
              {"eta", s.eta},
              {"alpha", s.alpha},
              {"memory_radius", s.memory_radius},
              {"sigma_dp", s.sigma_dp},
              {"p", s.participation},
              {"rounds", s.rounds},
              {"warnings", s.warnings}};
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::filesystem::path resolve_output_dir(const std::string& dir) {
  std::filesystem::path p(dir);
  if (p.is_relative()) {
    if (const char* root = std::getenv(kOutputRootEnv)) {
      return std::filesystem::path(root) / p;
    }
  }
  return p;
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out << text;
}

FedAvgConfig fedavg_config_from_run(const RunConfig& r) {
  FedAvgConfig f;
  f.eta = r.eta;
  f.gamma = r.gamma;
  f.alpha = r.alpha;
  f.participation = r.participation;
  f.sigma_dp = r.sigma_dp;
  f.local_mode = r.local_mode;
  f.local_steps = r.local_steps;
  f.dp_enabled = r.dp_enabled;
  f.seed = r.seed;
  f.rounds = r.rounds;
  f.x0 = r.x0;
  return f;
}

struct ReplicateOutcome {
  std::vector<RoundRecord> records;
  double min_grad_norm = 0.0;
  bool diverged = false;
  std::string error;
};

ReplicateOutcome run_one(const ResolvedExperiment& resolved,
                         const std::string& algorithm, std::uint64_t seed) {
  ReplicateOutcome out;
  if (algorithm == "dp-fedavg") {
    FedAvgConfig cfg = fedavg_config_from_run(resolved.run);
    cfg.seed = seed;
    RunResult r = run_fedavg(resolved.problem, cfg);
    out.records = std::move(r.records);
    out.min_grad_norm = r.min_grad_norm;
    out.diverged = r.diverged;
    out.error = r.error;
  } else {
    RunConfig cfg = resolved.run;
    cfg.seed = seed;
    RunResult r = run_training(resolved.problem, cfg);
    out.records = std::move(r.records);
    out.min_grad_norm = r.min_grad_norm;
    out.diverged = r.diverged;
    out.error = r.error;
  }
  return out;
}

json bound_to_json(const BoundReport& report) {
  json conds = json::array();
  for (const auto& c : report.side_conditions) {
    conds.push_back(
        {{"name", c.name}, {"satisfied", c.satisfied}, {"margin", c.margin}});
  }
  return json{{"init_term", report.init_term},
              {"memory_term", report.memory_term},
              {"noise_term", report.noise_term},
              {"drift_term", report.drift_term},
              {"eta_term", report.eta_term},
              {"total", report.total},
              {"side_conditions", conds},
              {"advisory", report.advisory}};
}

BoundReport bound_for_resolved(const ResolvedExperiment& resolved) {
  const FederationProblem& problem = resolved.problem;
  const RunConfig& run = resolved.run;
  const Vec x0 =
      run.x0.size() > 0 ? run.x0 : Vec(Vec::Zero(problem.dim()));
  const auto memories =
      init_memories(problem, x0, run.local_op(), run.init, run.init_offset);
  const double r0 = compute_R(memories, problem, x0, run.local_op());
  TheoremInputs in;
  in.f0 = problem.value(x0);
  in.f_inf = problem.f_inf();
  in.smoothness = problem.smoothness();
  in.delta_inf = problem.delta_inf();
  in.mean_delta_inf_i = problem.mean_delta_inf_i();
  in.clients = problem.num_clients();
  in.advisory = problem.heterogeneity_approximate();
  TheoremConfig cfg;
  cfg.eta = run.eta;
  cfg.beta = run.beta;
  cfg.alpha = run.alpha;
  cfg.memory_radius = r0;
  cfg.gamma = run.gamma;
  cfg.participation = run.participation;
  cfg.sigma_dp = run.dp_enabled ? run.sigma_dp : 0.0;
  cfg.rounds = run.rounds;
  cfg.local_steps = run.local_steps;
  return run.local_mode == LocalMode::kIg ? theorem_ig_bound(in, cfg)
                                          : theorem1_bound(in, cfg);
}

// Writes metrics CSVs and summary.json for all replicates of one resolved
// experiment into `dir`; shared by single runs and sweep cells.
RunArtifacts run_replicates(const ExperimentSpec& spec,
                            const ResolvedExperiment& resolved,
                            const std::filesystem::path& dir,
                            std::vector<ReplicateOutcome>* outcomes_out) {
  std::filesystem::create_directories(dir);
  RunArtifacts artifacts;
  artifacts.directory = dir;

  write_text_file(dir / "config.json", serialize_config(spec));
  if (resolved.has_schedule) {
    write_text_file(dir / "schedule.json",
                    schedule_to_json(resolved.schedule).dump(2) + "\n");
  }

  std::vector<double> min_grads;
  json replicate_info = json::array();
  bool any_diverged = false;
  for (int r = 0; r < spec.replicates; ++r) {
    ReplicateOutcome outcome =
        run_one(resolved, spec.algorithm, spec.seed + static_cast<std::uint64_t>(r));
    char name[64];
    std::snprintf(name, sizeof(name), "metrics_rep%03d.csv", r);
    const auto csv_path = dir / name;
    write_metrics_csv(csv_path, outcome.records);
    artifacts.metrics_csv.push_back(csv_path);
    min_grads.push_back(outcome.min_grad_norm);
    any_diverged = any_diverged || outcome.diverged;
    replicate_info.push_back({{"replicate", r},
                              {"seed", spec.seed + static_cast<std::uint64_t>(r)},
                              {"min_grad_norm", outcome.min_grad_norm},
                              {"rounds_completed", outcome.records.size()},
                              {"diverged", outcome.diverged},
                              {"error", outcome.error}});
    if (outcomes_out != nullptr) {
      outcomes_out->push_back(std::move(outcome));
    }
  }

  double mean = 0.0;
  for (double v : min_grads) mean += v;
  mean /= static_cast<double>(min_grads.size());
  double var = 0.0;
  if (min_grads.size() > 1) {
    for (double v : min_grads) var += (v - mean) * (v - mean);
    var /= static_cast<double>(min_grads.size() - 1);
  }

  json summary{{"format_version", 1},
               {"spec_hash", spec_hash(spec)},
               {"algorithm", spec.algorithm},
               {"replicates", spec.replicates},
               {"min_grad_norm_mean", mean},
               {"min_grad_norm_std", std::sqrt(var)},
               {"diverged", any_diverged},
               {"replicate_info", replicate_info}};
  if (resolved.has_schedule) {
    summary["schedule"] = schedule_to_json(resolved.schedule);
  }
  if (spec.algorithm == "fed-alpha-normec") {
    try {
      const BoundReport bound = bound_for_resolved(resolved);
      summary["bound"] = bound_to_json(bound);
      write_text_file(dir / "bound.json", bound_to_json(bound).dump(2) + "\n");
    } catch (const std::exception& e) {
      // A diverging operator makes R_0 unevaluable; the run artifacts still
      // stand on their own.
      summary["bound_error"] = e.what();
    }
  }
  artifacts.summary_json = dir / "summary.json";
  write_text_file(artifacts.summary_json, summary.dump(2) + "\n");
  artifacts.diverged = any_diverged;
  return artifacts;
}

}  // namespace

ExperimentSpec parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("/", std::string("not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ConfigError("/", "config must be a JSON object");
  }
  require_known_keys(doc, "",
                     {"problem", "algorithm", "run", "schedule", "replicates",
                      "output_dir", "seed", "sweep"});
  ExperimentSpec spec;
  if (doc.contains("problem")) {
    spec.suite = parse_suite(doc["problem"]);
  }
  spec.algorithm = get_string(doc, "", "algorithm", "fed-alpha-normec");
  if (spec.algorithm != "fed-alpha-normec" && spec.algorithm != "dp-fedavg") {
    throw ConfigError("/algorithm",
                      "must be \"fed-alpha-normec\" or \"dp-fedavg\"");
  }
  if (doc.contains("run")) {
    spec.run = parse_run(doc["run"]);
  }
  if (doc.contains("schedule")) {
    spec.schedule = parse_schedule(doc["schedule"]);
  }
  spec.replicates = get_int(doc, "", "replicates", 1);
  if (spec.replicates < 1) {
    throw ConfigError("/replicates", "must be >= 1");
  }
  spec.output_dir = get_string(doc, "", "output_dir", "fednormec-out");
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_integer() || doc["seed"].get<long long>() < 0) {
      throw ConfigError("/seed", "expected a nonnegative integer");
    }
    spec.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("sweep")) {
    const json& sw = doc["sweep"];
    require_known_keys(sw, "/sweep", {"p", "beta", "sigma_rule", "budget"});
    spec.sweep_p = get_number_list(sw, "/sweep", "p");
    spec.sweep_beta = get_number_list(sw, "/sweep", "beta");
    spec.sweep_sigma_rule = get_string(sw, "/sweep", "sigma_rule", "fixed");
    if (spec.sweep_sigma_rule != "fixed" &&
        spec.sweep_sigma_rule != "experiment") {
      throw ConfigError("/sweep/sigma_rule",
                        "must be \"fixed\" or \"experiment\"");
    }
    if (sw.contains("budget")) {
      const json& b = sw["budget"];
      require_known_keys(b, "/sweep/budget", {"epsilon", "delta", "c"});
      spec.sweep_budget.epsilon = get_number(b, "/sweep/budget", "epsilon", 1.0);
      spec.sweep_budget.delta = get_number(b, "/sweep/budget", "delta", 1e-5);
      spec.sweep_budget.accountant_scale =
          get_number(b, "/sweep/budget", "c", 1.0);
    }
    for (double p : spec.sweep_p) {
      if (!(p > 0.0) || p > 1.0) {
        throw ConfigError("/sweep/p", "entries must be in (0, 1]");
      }
    }
    for (double b : spec.sweep_beta) {
      if (!(b > 0.0)) {
        throw ConfigError("/sweep/beta", "entries must be > 0");
      }
    }
  }
  return spec;
}

std::string serialize_config(const ExperimentSpec& spec) {
  json doc{{"problem", suite_to_json(spec.suite)},
           {"algorithm", spec.algorithm},
           {"run", run_to_json(spec.run)},
           {"schedule", schedule_request_to_json(spec.schedule)},
           {"replicates", spec.replicates},
           {"output_dir", spec.output_dir},
           {"seed", spec.seed}};
  if (!spec.sweep_p.empty() || !spec.sweep_beta.empty()) {
    doc["sweep"] = json{{"p", spec.sweep_p},
                        {"beta", spec.sweep_beta},
                        {"sigma_rule", spec.sweep_sigma_rule},
                        {"budget",
                         {{"epsilon", spec.sweep_budget.epsilon},
                          {"delta", spec.sweep_budget.delta},
                          {"c", spec.sweep_budget.accountant_scale}}}};
  }
  return doc.dump(2) + "\n";
}

std::uint64_t spec_hash(const ExperimentSpec& spec) {
  const std::string text = serialize_config(spec);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ResolvedExperiment resolve_experiment(const ExperimentSpec& spec) {
  FederationProblem problem = make_suite(spec.suite, spec.seed);
  RunConfig run = spec.run;
  Schedule schedule;
  bool has_schedule = false;
  if (spec.schedule.kind != ScheduleKind::kManual) {
    const Vec x0 =
        run.x0.size() > 0 ? run.x0 : Vec(Vec::Zero(problem.dim()));
    ScheduleConstants constants;
    constants.smoothness = problem.smoothness();
    constants.f0 = problem.value(x0);
    constants.f_inf = problem.f_inf();
    constants.delta_inf = problem.delta_inf();
    constants.clients = problem.num_clients();
    constants.dim = problem.dim();
    constants.d1 = spec.schedule.d1;
    constants.d2 = spec.schedule.d2;
    constants.alpha = spec.schedule.alpha;
    constants.participation = run.participation;
    constants.sampled_clients = spec.schedule.sampled_clients;
    constants.budget = spec.schedule.budget;
    schedule = schedule_from_corollary(spec.schedule.kind, constants,
                                       run.rounds);
    apply_schedule(schedule, &run);
    has_schedule = true;
  }
  validate_run_config(run);
  return ResolvedExperiment{std::move(problem), std::move(run), schedule,
                            has_schedule};
}

std::string metrics_csv_header() {
  return "k,f_value,grad_norm,min_grad_norm,R_k,participants,v_hat_norm,"
         "step_norm,degenerate_flag";
}

void write_metrics_csv(const std::filesystem::path& path,
                       const std::vector<RoundRecord>& records) {
  std::ostringstream out;
  out << metrics_csv_header() << "\n";
  double min_grad = std::numeric_limits<double>::infinity();
  for (const auto& r : records) {
    min_grad = std::min(min_grad, r.grad_norm);
    out << r.round << ',' << format_double(r.f_value) << ','
        << format_double(r.grad_norm) << ',' << format_double(min_grad) << ','
        << format_double(r.memory_gap) << ',' << r.participants << ','
        << format_double(r.v_hat_norm) << ',' << format_double(r.step_norm)
        << ',' << (r.degenerate ? 1 : 0) << "\n";
  }
  write_text_file(path, out.str());
}

RunArtifacts run_experiment(const ExperimentSpec& spec) {
  const ResolvedExperiment resolved = resolve_experiment(spec);
  const auto dir = resolve_output_dir(spec.output_dir);
  return run_replicates(spec, resolved, dir, nullptr);
}

RunArtifacts run_sweep(const ExperimentSpec& spec) {
  if (spec.schedule.kind != ScheduleKind::kManual) {
    throw ConfigError("/sweep",
                      "sweeps vary p and beta directly; use a manual schedule");
  }
  std::vector<double> ps = spec.sweep_p;
  std::vector<double> betas = spec.sweep_beta;
  if (ps.empty()) ps = {spec.run.participation};
  if (betas.empty()) betas = {spec.run.beta};

  const auto root = resolve_output_dir(spec.output_dir);
  std::filesystem::create_directories(root);
  RunArtifacts artifacts;
  artifacts.directory = root;

  std::ostringstream table;
  table << "algorithm,p,beta,replicate,k,transmissions,f_value,grad_norm,"
           "min_grad_norm\n";
  json cells = json::array();
  for (double p : ps) {
    for (double beta : betas) {
      ExperimentSpec cell = spec;
      cell.run.participation = p;
      cell.run.beta = beta;
      if (spec.sweep_sigma_rule == "experiment") {
        cell.run.sigma_dp =
            experiment_sigma(p, beta, cell.run.rounds, spec.sweep_budget);
        cell.run.dp_enabled = cell.run.sigma_dp > 0.0;
      }
      cell.sweep_p.clear();
      cell.sweep_beta.clear();
      char name[64];
      std::snprintf(name, sizeof(name), "p%.3f_beta%.6g", p, beta);
      cell.output_dir = (root / name).string();
      const ResolvedExperiment resolved = resolve_experiment(cell);
      std::vector<ReplicateOutcome> outcomes;
      RunArtifacts cell_art =
          run_replicates(cell, resolved, root / name, &outcomes);
      artifacts.diverged = artifacts.diverged || cell_art.diverged;
      for (auto& path : cell_art.metrics_csv) {
        artifacts.metrics_csv.push_back(std::move(path));
      }
      const double m = static_cast<double>(resolved.problem.num_clients());
      char cell_label[64];
      std::snprintf(cell_label, sizeof(cell_label), "%.6g,%.6g", p, beta);
      for (std::size_t r = 0; r < outcomes.size(); ++r) {
        double min_grad = std::numeric_limits<double>::infinity();
        for (const auto& rec : outcomes[r].records) {
          min_grad = std::min(min_grad, rec.grad_norm);
          table << spec.algorithm << ',' << cell_label << ',' << r << ','
                << rec.round << ','
                << format_double(static_cast<double>(rec.round) * p * m) << ','
                << format_double(rec.f_value) << ','
                << format_double(rec.grad_norm) << ','
                << format_double(min_grad) << "\n";
        }
      }
      cells.push_back({{"p", p}, {"beta", beta}, {"dir", name}});
    }
  }
  write_text_file(root / "communications.csv", table.str());
  json summary{{"format_version", 1},
               {"spec_hash", spec_hash(spec)},
               {"cells", cells}};
  artifacts.summary_json = root / "sweep_summary.json";
  write_text_file(artifacts.summary_json, summary.dump(2) + "\n");
  return artifacts;
}

BoundReport evaluate_bound(const ExperimentSpec& spec) {
  const ResolvedExperiment resolved = resolve_experiment(spec);
  return bound_for_resolved(resolved);
}

std::string bound_report_json(const BoundReport& report) {
  return bound_to_json(report).dump(2) + "\n";
}

}  // namespace fednormec
