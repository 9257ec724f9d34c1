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

#include "fednormec/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <utility>

#include "json.hpp"

#include "fednormec/baselines.hpp"
#include "fednormec/errors.hpp"
#include "fednormec/fed_core.hpp"
#include "fednormec/harness.hpp"
#include "fednormec/local_ops.hpp"
#include "fednormec/privacy.hpp"
#include "fednormec/problems.hpp"
#include "fednormec/rng.hpp"
#include "fednormec/theory.hpp"
#include "fednormec/vec.hpp"

namespace fednormec {

namespace {

using Clock = std::chrono::steady_clock;

CheckResult timed(const std::string& name,
                  const std::function<std::pair<bool, std::string>()>& body) {
  CheckResult r;
  r.name = name;
  const auto start = Clock::now();
  try {
    auto [pass, detail] = body();
    r.pass = pass;
    r.detail = std::move(detail);
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.elapsed_s = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Random PSD curvature without the eigen-decomposition; the Gershgorin row
// bound serves as the smoothness constant where only an upper bound is
// needed.
QuadraticComponent random_quadratic(RngStream& stream, int d,
                                    double center_scale) {
  Eigen::MatrixXd g(d, d);
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      g(r, c) = stream.gaussian() * s;
    }
  }
  Eigen::MatrixXd a = g.transpose() * g;
  a += 0.1 * Eigen::MatrixXd::Identity(d, d);
  Vec center(d);
  for (int j = 0; j < d; ++j) {
    center[j] = center_scale * stream.gaussian();
  }
  return QuadraticComponent{std::move(a), std::move(center), 0.0};
}

double gershgorin_bound(const Eigen::MatrixXd& a) {
  return a.cwiseAbs().rowwise().sum().maxCoeff();
}

Vec random_vec(RngStream& stream, int d, double scale) {
  Vec x(d);
  for (int j = 0; j < d; ++j) {
    x[j] = scale * stream.gaussian();
  }
  return x;
}

// The heterogeneous 1-D pair used by the bias comparison: f_1 = (x-1)^2/2 and
// f_2 = 9(x+1)^2/2, so L = 9, x* = -0.8, Delta^inf = 0.9.
FederationProblem witness_problem() {
  Eigen::MatrixXd a1(1, 1), a2(1, 1);
  a1 << 1.0;
  a2 << 9.0;
  Vec c1(1), c2(1);
  c1 << 1.0;
  c2 << -1.0;
  std::vector<ClientProblem> clients;
  clients.emplace_back(
      std::vector<Component>{QuadraticComponent{a1, c1, 0.0}}, 0);
  clients.emplace_back(
      std::vector<Component>{QuadraticComponent{a2, c2, 0.0}}, 1);
  return FederationProblem(std::move(clients));
}

}  // namespace

bool VerifyReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.pass; });
}

namespace checks {

CheckResult sensitivity_bound() {
  return timed("sensitivity_bound", []() -> std::pair<bool, std::string> {
    RngStream stream(9001, 0, 0, StreamPurpose::kDataGen);
    constexpr int kSamples = 1'000'000;
    double worst = 0.0;
    for (int i = 0; i < kSamples; ++i) {
      const int d = 1 + static_cast<int>(stream.next_u64() % 8);
      const double vscale = std::pow(10.0, 6.0 * stream.uniform() - 3.0);
      Vec v = random_vec(stream, d, vscale);
      double alpha = 0.0;
      if (stream.uniform() >= 0.2) {
        alpha = std::abs(stream.gaussian()) *
                std::pow(10.0, 4.0 * stream.uniform() - 2.0);
      }
      const double n = smoothed_normalize(v, alpha).norm();
      worst = std::max(worst, n);
      if (n > 1.0 + 1e-12) {
        return {false, "norm " + fmt(n) + " exceeds 1+1e-12"};
      }
      if (alpha > 0.0 && !(n < 1.0)) {
        return {false, "alpha > 0 not strictly below 1 (norm " + fmt(n) + ")"};
      }
    }
    return {true, "1e6 samples, max norm " + fmt(worst)};
  });
}

CheckResult memory_boundedness() {
  return timed("memory_boundedness", []() -> std::pair<bool, std::string> {
    const FederationProblem problem = make_suite(
        SuiteSpec{SuiteFamily::kQuadraticHetero, 20, 2, 50, 1.0}, 7);
    const double l = problem.smoothness();
    RunConfig cfg;
    cfg.gamma = 0.5 / l;
    cfg.beta = 0.2;
    cfg.alpha = 0.5;
    cfg.init = MemoryInitStrategy::kResidualPlusOffset;
    cfg.init_offset = 0.5;
    cfg.participation = 1.0;
    cfg.sigma_dp = 0.0;
    cfg.rounds = 2000;
    cfg.local_steps = 1;
    cfg.seed = 1;
    cfg.eta = eta_max(l, problem.delta_inf(), cfg.beta, cfg.alpha, 0.5,
                      cfg.gamma, cfg.rounds, LocalMode::kGd, 1)
                  .value;
    const RunResult result = run_training(problem, cfg);
    if (result.diverged) {
      return {false, "run diverged: " + result.error};
    }
    double max_gap = 0.0;
    for (const auto& rec : result.records) {
      max_gap = std::max(max_gap, rec.memory_gap);
    }
    const bool pass = max_gap <= 0.5 + 1e-9;
    return {pass, "max R_k = " + fmt(max_gap) + " vs R_0 = 0.5 (eta = " +
                      fmt(cfg.eta) + ")"};
  });
}

CheckResult ef21_fixed_point() {
  return timed("ef21_fixed_point", []() -> std::pair<bool, std::string> {
    const FederationProblem problem = make_suite(
        SuiteSpec{SuiteFamily::kQuadraticHetero, 3, 2, 6, 1.0}, 5);
    RunConfig cfg;
    cfg.gamma = 0.5 / problem.smoothness();
    cfg.beta = 0.3;
    cfg.alpha = 0.5;
    cfg.local_steps = 2;
    RngStream stream(11, 0, 0, StreamPurpose::kDataGen);
    const Vec x = random_vec(stream, problem.dim(), 1.0);
    const auto memories = init_memories(
        problem, x, cfg.local_op(), MemoryInitStrategy::kExactResidual, 0.0);
    for (int i = 0; i < problem.num_clients(); ++i) {
      ClientState state{memories[i], i};
      const Vec before = state.memory;
      for (int rep = 0; rep < 5; ++rep) {
        const ClientRoundResult r =
            client_round(state, problem.client(i), x, cfg);
        if (r.delta.norm() != 0.0) {
          return {false, "delta not exactly zero at the fixed point"};
        }
        if ((state.memory.array() != before.array()).any()) {
          return {false, "memory moved at the fixed point"};
        }
      }
    }
    return {true, "delta = 0 and memories bit-stable over 5 rounds"};
  });
}

CheckResult rate_scaling() {
  return timed("rate_scaling", []() -> std::pair<bool, std::string> {
    double ratio_sum = 0.0;
    constexpr int kSeeds = 10;
    for (int s = 0; s < kSeeds; ++s) {
      const FederationProblem problem = make_suite(
          SuiteSpec{SuiteFamily::kQuadraticHomo, 20, 2, 20, 1.0},
          101 + static_cast<std::uint64_t>(s));
      ScheduleConstants constants;
      constants.smoothness = problem.smoothness();
      constants.f0 = problem.value(Vec::Zero(problem.dim()));
      constants.f_inf = problem.f_inf();
      constants.delta_inf = problem.delta_inf();
      constants.clients = problem.num_clients();
      constants.dim = problem.dim();
      constants.d1 = 1.0;
      constants.d2 = 1.0;
      constants.alpha = 0.5;
      constants.participation = 1.0;
      double min_grad[2] = {0.0, 0.0};
      const int budgets[2] = {100, 1600};
      for (int b = 0; b < 2; ++b) {
        const Schedule sched = schedule_from_corollary(
            ScheduleKind::kNonprivate, constants, budgets[b]);
        RunConfig cfg;
        cfg.seed = 900 + static_cast<std::uint64_t>(s);
        apply_schedule(sched, &cfg);
        const RunResult result = run_training(problem, cfg);
        if (result.diverged) {
          return {false, "run diverged: " + result.error};
        }
        min_grad[b] = result.min_grad_norm;
      }
      ratio_sum += min_grad[1] / min_grad[0];
    }
    const double mean_ratio = ratio_sum / kSeeds;
    const bool pass = mean_ratio >= 0.4 && mean_ratio <= 0.85;
    return {pass, "mean min-grad ratio K=1600/K=100 over 10 seeds: " +
                      fmt(mean_ratio) + " (predicted ~0.63)"};
  });
}

CheckResult noise_drift_bound() {
  return timed("noise_drift_bound", []() -> std::pair<bool, std::string> {
    const FederationProblem problem =
        make_suite(SuiteSpec{SuiteFamily::kQuadraticHomo, 20, 1, 1, 1.0}, 3);
    RunConfig cfg;
    cfg.gamma = 0.5 / problem.smoothness();
    cfg.beta = 0.05;
    cfg.alpha = 0.5;
    cfg.eta = 0.01;
    cfg.participation = 0.5;
    cfg.sigma_dp = 1.0;
    cfg.dp_enabled = true;
    cfg.rounds = 500;
    cfg.init = MemoryInitStrategy::kZero;
    constexpr int kReplicates = 200;
    double drift_sum = 0.0;
    for (int rep = 0; rep < kReplicates; ++rep) {
      cfg.seed = 1000 + static_cast<std::uint64_t>(rep);
      const RunResult result = run_training(problem, cfg);
      if (result.diverged) {
        return {false, "run diverged: " + result.error};
      }
      Vec mean_mem = Vec::Zero(problem.dim());
      for (const auto& c : result.clients) {
        mean_mem += c.memory;
      }
      mean_mem /= static_cast<double>(problem.num_clients());
      drift_sum += (mean_mem - result.server.v_hat).norm();
    }
    const double mean_drift = drift_sum / kReplicates;
    const double b = participation_variance(cfg.participation, cfg.sigma_dp);
    const double bound = noise_bound(cfg.beta, cfg.rounds, b,
                                     problem.num_clients(), 0.0);
    const bool pass = mean_drift <= bound && mean_drift >= 0.1 * bound;
    return {pass, "mean drift " + fmt(mean_drift) + " vs bound " + fmt(bound) +
                      " (B = " + fmt(b) + ", 200 replicates, d = 1)"};
  });
}

CheckResult sampling_statistics() {
  return timed("sampling_statistics", []() -> std::pair<bool, std::string> {
    constexpr int kRounds = 100'000;
    constexpr int kClients = 20;
    constexpr double kP = 0.25;
    long long hits = 0;
    for (int k = 0; k < kRounds; ++k) {
      hits += sample_participation(42, k, kP, kClients).count;
    }
    const double freq =
        static_cast<double>(hits) / (static_cast<double>(kRounds) * kClients);
    if (std::abs(freq - kP) > 0.005) {
      return {false, "participation frequency " + fmt(freq) + " off from 0.25"};
    }
    // Unbiasedness of the inverse-probability weight: E[q delta] = delta.
    Vec delta(5);
    delta << 0.3, -0.1, 0.05, 0.2, -0.25;
    constexpr int kDraws = 200'000;
    Vec acc = Vec::Zero(5);
    for (int k = 0; k < kDraws; ++k) {
      const Participation part = sample_participation(43, k, kP, 1);
      acc += part.weights[0] * delta;
    }
    acc /= static_cast<double>(kDraws);
    const double rel = (acc - delta).norm() / delta.norm();
    const bool pass = rel <= 0.01;
    return {pass, "frequency " + fmt(freq) + ", E[q delta] relative error " +
                      fmt(rel)};
  });
}

CheckResult ig_gd_consistency() {
  return timed("ig_gd_consistency", []() -> std::pair<bool, std::string> {
    RngStream stream(77, 0, 0, StreamPurpose::kDataGen);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      const int d = 6;
      const QuadraticComponent q = random_quadratic(stream, d, 1.0);
      std::vector<Component> comps(3, q);  // identical components
      const ClientProblem client(std::move(comps), 0);
      const Vec x = random_vec(stream, d, 2.0);
      const double gamma = 0.05 + 0.3 * stream.uniform();
      const Vec via_ig = local_ig(client, x, gamma);
      const Vec via_gd = local_gd(client, x, 3, gamma);
      worst = std::max(worst, (via_ig - via_gd).norm());
      if (worst > 1e-12) {
        return {false, "IG vs GD(T=N) mismatch " + fmt(worst)};
      }
      const Vec one_step = local_gd(client, x, 1, gamma);
      const Vec direct = x - gamma * client.gradient(x);
      if ((one_step - direct).norm() != 0.0) {
        return {false, "T=1 GD differs from x - gamma grad f_i(x)"};
      }
    }
    return {true, "1000 states, max |IG - GD(T=N)| = " + fmt(worst)};
  });
}

CheckResult recursion_lemmas() {
  return timed("recursion_lemmas", []() -> std::pair<bool, std::string> {
    RngStream stream(1234, 0, 0, StreamPurpose::kDataGen);
    double min_slack = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 1000; ++trial) {
      const int d = 8;
      const int m = 5;
      const int n = 3;
      std::vector<ClientProblem> clients;
      double l_bound = 0.0;
      for (int i = 0; i < m; ++i) {
        std::vector<Component> comps;
        for (int j = 0; j < n; ++j) {
          QuadraticComponent q = random_quadratic(stream, d, 1.0);
          l_bound = std::max(l_bound, gershgorin_bound(q.curvature));
          comps.push_back(std::move(q));
        }
        clients.emplace_back(std::move(comps), i);
      }
      const FederationProblem problem(std::move(clients));
      const double gamma =
          (0.1 + 0.9 * stream.uniform()) * 0.5 / l_bound;  // gamma <= 1/(2L)
      const Vec x = random_vec(stream, d, 2.0);
      const int steps = 2 + trial % 5;

      // Local GD: inner-path bound and multi-step drift bound.
      {
        const ClientProblem& client = problem.client(0);
        LocalTrace trace;
        const Vec tx = local_gd(client, x, steps, gamma, &trace);
        const Vec grad = client.gradient(x);
        double path = 0.0;
        for (int j = 0; j < steps; ++j) {
          path += (x - trace.iterates[j]).norm();
        }
        path /= static_cast<double>(steps);
        const double slack3 = 2.0 * gamma * grad.norm() - path;
        const double slack5 = 2.0 * l_bound * gamma * gamma * grad.norm() -
                              ((x - gamma * grad) - tx).norm();
        min_slack = std::min({min_slack, slack3, slack5});
      }

      // Local IG: averaged drift bound against the traced inner path.
      {
        double lhs = 0.0;
        double rhs_path = 0.0;
        for (int i = 0; i < m; ++i) {
          LocalTrace trace;
          const Vec tx = local_ig(problem.client(i), x, gamma, &trace);
          lhs += (tx - (x - gamma * problem.client(i).gradient(x))).norm();
          double path = 0.0;
          for (int j = 0; j < n; ++j) {
            path += (trace.iterates[j] - x).norm();
          }
          rhs_path += path / static_cast<double>(n);
        }
        const double slack_ig =
            gamma * l_bound * rhs_path / m - lhs / m;
        min_slack = std::min(min_slack, slack_ig);
      }
      if (min_slack < -1e-12) {
        return {false, "lemma slack went negative: " + fmt(min_slack)};
      }
    }
    return {true, "1000 trials, min slack " + fmt(min_slack)};
  });
}

CheckResult bias_witness() {
  return timed("bias_witness", []() -> std::pair<bool, std::string> {
    const FederationProblem problem = witness_problem();
    const double l = problem.smoothness();  // 9
    Vec x0(1);
    x0 << -0.5;

    RunConfig ec;
    ec.gamma = 0.5 / l;
    ec.beta = 0.015;
    ec.alpha = 0.01;
    ec.init = MemoryInitStrategy::kResidualPlusOffset;
    ec.init_offset = 0.5;
    ec.rounds = 2000;
    ec.local_steps = 1;
    ec.x0 = x0;
    ec.seed = 12;
    ec.eta = eta_max(l, problem.delta_inf(), ec.beta, ec.alpha, 0.5, ec.gamma,
                     ec.rounds, LocalMode::kGd, 1)
                 .value;
    const RunResult ec_run = run_training(problem, ec);

    // Equal round and per-round step budget; the baseline couples eta = gamma.
    FedAvgConfig fa;
    fa.eta = ec.eta;
    fa.gamma = ec.eta;
    fa.alpha = 0.01;
    fa.rounds = 2000;
    fa.local_steps = 1;
    fa.x0 = x0;
    fa.seed = 12;
    const RunResult fa_run = run_fedavg(problem, fa);

    if (ec_run.diverged || fa_run.diverged) {
      return {false, "a witness run diverged"};
    }
    const double ec_final = ec_run.records.back().grad_norm;
    const double fa_final = fa_run.records.back().grad_norm;
    const double ratio = fa_final / ec_final;
    const bool pass = ratio >= 10.0;
    return {pass, "final grad norms: dp-fedavg " + fmt(fa_final) +
                      " vs fed-alpha-normec " + fmt(ec_final) + " (ratio " +
                      fmt(ratio) + ")"};
  });
}

CheckResult theory_consistency() {
  return timed("theory_consistency", []() -> std::pair<bool, std::string> {
    // Algebraic identity between the two printed forms of B.
    const double sigma = 0.7;
    for (int i = 1; i <= 10; ++i) {
      const double p = 0.1 * i;
      const double theorem_form = 2.0 * (p - 1.0) * (p - 1.0) / p +
                                  2.0 * (1.0 - p) + 2.0 * sigma * sigma / p;
      const double lemma_form = participation_variance(p, sigma);
      if (std::abs(theorem_form - lemma_form) >
          1e-12 * std::max(1.0, lemma_form)) {
        return {false, "B forms disagree at p = " + fmt(p)};
      }
    }

    const FederationProblem problem = make_suite(
        SuiteSpec{SuiteFamily::kQuadraticHetero, 20, 2, 50, 1.0}, 7);
    const double l = problem.smoothness();

    TheoremInputs in;
    in.f0 = problem.value(Vec::Zero(problem.dim()));
    in.f_inf = problem.f_inf();
    in.smoothness = l;
    in.delta_inf = problem.delta_inf();
    in.mean_delta_inf_i = problem.mean_delta_inf_i();
    in.clients = problem.num_clients();

    // Deterministic full-participation run at eta = eta_max.
    RunConfig cfg;
    cfg.gamma = 0.5 / l;
    cfg.beta = 0.2;
    cfg.alpha = 0.5;
    cfg.init = MemoryInitStrategy::kResidualPlusOffset;
    cfg.init_offset = 0.5;
    cfg.rounds = 2000;
    cfg.seed = 1;
    cfg.eta = eta_max(l, in.delta_inf, cfg.beta, cfg.alpha, 0.5, cfg.gamma,
                      cfg.rounds, LocalMode::kGd, 1)
                  .value;
    TheoremConfig tc{cfg.eta, cfg.beta, cfg.alpha, 0.5,
                     cfg.gamma, 1.0,     0.0,       cfg.rounds, 1};
    const BoundReport det_bound = theorem1_bound(in, tc);
    if (!det_bound.all_satisfied()) {
      return {false, "side conditions unexpectedly violated (deterministic)"};
    }
    const RunResult det_run = run_training(problem, cfg);
    if (det_run.min_grad_norm > det_bound.total) {
      return {false, "deterministic run exceeds its bound: " +
                         fmt(det_run.min_grad_norm) + " > " +
                         fmt(det_bound.total)};
    }

    // Stochastic run: 20-replicate mean against the bound.
    RunConfig st = cfg;
    st.participation = 0.5;
    st.sigma_dp = 0.1;
    st.dp_enabled = true;
    st.rounds = 500;
    st.eta = eta_max(l, in.delta_inf, st.beta, st.alpha, 0.5, st.gamma,
                     st.rounds, LocalMode::kGd, 1)
                 .value;
    TheoremConfig stc{st.eta, st.beta, st.alpha, 0.5,
                      st.gamma, 0.5,    0.1,      st.rounds, 1};
    const BoundReport st_bound = theorem1_bound(in, stc);
    if (!st_bound.all_satisfied()) {
      return {false, "side conditions unexpectedly violated (stochastic)"};
    }
    double mean_min = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
      st.seed = 300 + static_cast<std::uint64_t>(rep);
      const RunResult r = run_training(problem, st);
      if (r.diverged) {
        return {false, "stochastic run diverged"};
      }
      mean_min += r.min_grad_norm;
    }
    mean_min /= 20.0;
    if (mean_min > st_bound.total) {
      return {false, "stochastic mean " + fmt(mean_min) + " exceeds bound " +
                         fmt(st_bound.total)};
    }

    // The corollary-schedule runs from the rate-scaling criterion also carry
    // satisfied side conditions; check one against its bound at both budgets.
    const FederationProblem homo = make_suite(
        SuiteSpec{SuiteFamily::kQuadraticHomo, 20, 2, 20, 1.0}, 101);
    ScheduleConstants constants;
    constants.smoothness = homo.smoothness();
    constants.f0 = homo.value(Vec::Zero(homo.dim()));
    constants.f_inf = homo.f_inf();
    constants.delta_inf = homo.delta_inf();
    constants.clients = homo.num_clients();
    constants.dim = homo.dim();
    constants.d1 = 1.0;
    constants.d2 = 1.0;
    constants.alpha = 0.5;
    for (int budget : {100, 1600}) {
      const Schedule sched = schedule_from_corollary(ScheduleKind::kNonprivate,
                                                     constants, budget);
      RunConfig sc;
      sc.seed = 901;
      apply_schedule(sched, &sc);
      TheoremInputs hin;
      hin.f0 = constants.f0;
      hin.f_inf = constants.f_inf;
      hin.smoothness = constants.smoothness;
      hin.delta_inf = constants.delta_inf;
      hin.clients = constants.clients;
      const TheoremConfig scc{sc.eta, sc.beta, sc.alpha,
                              sched.memory_radius, sc.gamma, 1.0,
                              0.0, budget, 1};
      const BoundReport sb = theorem1_bound(hin, scc);
      if (!sb.all_satisfied()) {
        return {false, "corollary schedule violates its side conditions"};
      }
      const RunResult sr = run_training(homo, sc);
      if (sr.min_grad_norm > sb.total) {
        return {false, "corollary run at K=" + std::to_string(budget) +
                           " exceeds its bound"};
      }
    }
    const bool pass = true;
    return {pass, "B identity ok; det " + fmt(det_run.min_grad_norm) + " <= " +
                      fmt(det_bound.total) + "; stochastic mean " +
                      fmt(mean_min) + " <= " + fmt(st_bound.total) +
                      "; corollary runs within bound"};
  });
}

CheckResult amplification_monotonicity() {
  return timed("amplification_monotonicity",
               []() -> std::pair<bool, std::string> {
    PrivacyBudget budget{2.0, 1e-6, 1.3};
    const int rounds = 250;
    const double base = calibrate_sigma(budget, 1.0, rounds);
    for (int i = 1; i <= 20; ++i) {
      const double p = 0.05 * i;
      const double scaled = calibrate_sigma(budget, p, rounds) / p;
      if (std::abs(scaled - base) > 1e-12 * base) {
        return {false, "sigma(p)/p not constant at p = " + fmt(p)};
      }
    }
    ScheduleConstants constants;
    constants.smoothness = 1.0;
    constants.f0 = 1.0;
    constants.f_inf = 0.0;
    constants.clients = 20;
    constants.dim = 10;
    constants.budget = PrivacyBudget{4.0, 1e-5, 1.0};
    const double bhats[5] = {20.0, 10.0, 5.0, 2.0, 1.0};
    double prev = std::numeric_limits<double>::infinity();
    for (double bhat : bhats) {
      const double ub = utility_bound_one_step_dp(constants, bhat);
      if (!(ub < prev)) {
        return {false, "utility bound not decreasing at B-hat = " + fmt(bhat)};
      }
      prev = ub;
    }
    return {true, "sigma linear in p; utility bound strictly decreasing in "
                  "B-hat"};
  });
}

CheckResult reproducibility() {
  return timed("reproducibility", []() -> std::pair<bool, std::string> {
    const std::string config = R"({
      "problem": {"family": "quadratic-hetero", "clients": 5, "components": 2,
                  "dim": 10, "hetero_scale": 1.0},
      "algorithm": "fed-alpha-normec",
      "run": {"gamma": 0.5, "beta": 0.1, "eta": 0.01, "alpha": 0.01,
              "p": 0.5, "sigma_dp": 0.1, "private": true, "rounds": 60,
              "local": {"mode": "gd", "steps": 2},
              "init": {"strategy": "zero", "offset": 0.0}},
      "replicates": 2,
      "seed": 2024,
      "output_dir": "unused"
    })";
    ExperimentSpec spec = parse_config(config);
    const auto base = std::filesystem::temp_directory_path() /
                      "fednormec_repro_check";
    std::filesystem::remove_all(base);
    ExperimentSpec a = spec;
    a.output_dir = (base / "a").string();
    ExperimentSpec b = spec;
    b.output_dir = (base / "b").string();
    const RunArtifacts ra = run_experiment(a);
    const RunArtifacts rb = run_experiment(b);
    if (ra.metrics_csv.size() != rb.metrics_csv.size()) {
      return {false, "replicate counts differ"};
    }
    for (std::size_t i = 0; i < ra.metrics_csv.size(); ++i) {
      std::ifstream fa(ra.metrics_csv[i], std::ios::binary);
      std::ifstream fb(rb.metrics_csv[i], std::ios::binary);
      std::stringstream sa, sb;
      sa << fa.rdbuf();
      sb << fb.rdbuf();
      if (sa.str() != sb.str() || sa.str().empty()) {
        return {false, "CSV bytes differ for replicate " + std::to_string(i)};
      }
    }
    std::filesystem::remove_all(base);
    return {true, std::to_string(ra.metrics_csv.size()) +
                      " CSV pairs byte-identical"};
  });
}

CheckResult aggregation_identity() {
  return timed("aggregation_identity", []() -> std::pair<bool, std::string> {
    const FederationProblem problem = make_suite(
        SuiteSpec{SuiteFamily::kQuadraticHetero, 8, 2, 12, 1.0}, 21);
    RunConfig cfg;
    cfg.gamma = 0.5 / problem.smoothness();
    cfg.beta = 0.25;
    cfg.alpha = 0.5;
    cfg.eta = 0.01;
    cfg.init = MemoryInitStrategy::kZero;
    const int m = problem.num_clients();
    auto memories = init_memories(problem, Vec::Zero(problem.dim()),
                                  cfg.local_op(), cfg.init, 0.0);
    std::vector<ClientState> states(m);
    for (int i = 0; i < m; ++i) states[i] = ClientState{memories[i], i};
    ServerState server = init_server(Vec::Zero(problem.dim()), memories);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      std::vector<Vec> transmitted(m);
      for (int i = 0; i < m; ++i) {
        const ClientRoundResult r =
            client_round(states[i], problem.client(i), server.x, cfg);
        transmitted[i] = r.delta;  // p = 1, q = 1, no noise
      }
      server_aggregate(server, transmitted, cfg.beta, m);
      server_step(server, cfg.eta, true, cfg.degenerate_tol);
      Vec mean_mem = Vec::Zero(problem.dim());
      for (const auto& s : states) mean_mem += s.memory;
      mean_mem /= static_cast<double>(m);
      worst = std::max(worst, (mean_mem - server.v_hat).norm());
    }
    const bool pass = worst <= 1e-12;
    return {pass,
            "max || v_hat - mean v_i || over 50 rounds = " + fmt(worst)};
  });
}

CheckResult transmit_second_moment() {
  return timed("transmit_second_moment", []() -> std::pair<bool, std::string> {
    constexpr double kP = 0.5;
    constexpr double kSigma = 1.0;
    Vec delta(1);
    delta << 1.0;  // worst-case payload norm
    constexpr int kDraws = 200'000;
    double acc = 0.0;
    for (int k = 0; k < kDraws; ++k) {
      const Participation part = sample_participation(99, k, kP, 1);
      RngStream noise(99, k, 0, StreamPurpose::kDpNoise);
      Vec sent(1);
      if (part.mask[0]) {
        sent = transmit(delta, part.weights[0], true, kSigma, noise);
      } else {
        sent = Vec::Zero(1);
      }
      acc += (delta - sent).squaredNorm();
    }
    const double second_moment = acc / kDraws;
    const double b = participation_variance(kP, kSigma);
    const bool pass = second_moment <= b;
    return {pass, "MC second moment " + fmt(second_moment) +
                      " <= B = " + fmt(b)};
  });
}

CheckResult avg_gradient_norm_lemma() {
  return timed("avg_gradient_norm_lemma", []() -> std::pair<bool, std::string> {
    const FederationProblem problem = make_suite(
        SuiteSpec{SuiteFamily::kQuadraticHetero, 10, 2, 8, 1.0}, 17);
    const double l = problem.smoothness();
    const double dinf = problem.delta_inf();
    if (!(dinf > 0.0)) {
      return {false, "suite unexpectedly has Delta^inf = 0"};
    }
    RngStream stream(55, 0, 0, StreamPurpose::kDataGen);
    double min_slack = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 1000; ++trial) {
      const Vec x = random_vec(stream, problem.dim(), 2.0);
      double mean_grad = 0.0;
      for (int i = 0; i < problem.num_clients(); ++i) {
        mean_grad += problem.client(i).gradient(x).norm();
      }
      mean_grad /= problem.num_clients();
      const double rhs =
          std::sqrt(2.0 * l / dinf) * (problem.value(x) - problem.f_inf()) +
          std::sqrt(2.0 * l * dinf);
      min_slack = std::min(min_slack, rhs - mean_grad);
    }
    const bool pass = min_slack >= -1e-9;
    return {pass, "1000 points, min slack " + fmt(min_slack)};
  });
}

CheckResult ig_inner_path_lemma() {
  return timed("ig_inner_path_lemma", []() -> std::pair<bool, std::string> {
    // Averaged IG inner-path bound:
    //   (1/M) sum_i (1/N) sum_j ||x_i^{.,j} - x||
    //     <= 2 sqrt(2) L gamma (f(x)-f^inf)/sqrt(L Delta^inf)
    //        + sqrt(2) gamma sqrt(L Delta^inf)
    //        + 2 gamma sqrt(L mean_i Delta^inf_i).
    const FederationProblem problem = make_suite(
        SuiteSpec{SuiteFamily::kQuadraticHetero, 10, 3, 8, 1.0}, 29);
    const double l = problem.smoothness();
    const double dinf = problem.delta_inf();
    const double mean_dinf_i = problem.mean_delta_inf_i();
    if (!(dinf > 0.0)) {
      return {false, "suite unexpectedly has Delta^inf = 0"};
    }
    RngStream stream(83, 0, 0, StreamPurpose::kDataGen);
    double min_slack = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 1000; ++trial) {
      const double gamma = (0.1 + 0.9 * stream.uniform()) * 0.5 / l;
      const Vec x = random_vec(stream, problem.dim(), 2.0);
      double lhs = 0.0;
      for (int i = 0; i < problem.num_clients(); ++i) {
        LocalTrace trace;
        local_ig(problem.client(i), x, gamma, &trace);
        const int n = problem.client(i).num_components();
        double path = 0.0;
        for (int j = 0; j < n; ++j) {
          path += (trace.iterates[j] - x).norm();
        }
        lhs += path / n;
      }
      lhs /= problem.num_clients();
      const double gap = problem.value(x) - problem.f_inf();
      const double rhs =
          2.0 * std::sqrt(2.0) * l * gamma * gap / std::sqrt(l * dinf) +
          std::sqrt(2.0) * gamma * std::sqrt(l * dinf) +
          2.0 * gamma * std::sqrt(l * mean_dinf_i);
      min_slack = std::min(min_slack, rhs - lhs);
    }
    const bool pass = min_slack >= -1e-9;
    return {pass, "1000 points, min slack " + fmt(min_slack)};
  });
}

CheckResult local_op_lipschitz_pairs() {
  return timed("local_op_lipschitz_pairs",
               []() -> std::pair<bool, std::string> {
    RngStream stream(31, 0, 0, StreamPurpose::kDataGen);
    double worst = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
      const int d = 8;
      std::vector<Component> comps;
      double l_bound = 0.0;
      for (int j = 0; j < 3; ++j) {
        QuadraticComponent q = random_quadratic(stream, d, 1.0);
        l_bound = std::max(l_bound, gershgorin_bound(q.curvature));
        comps.push_back(std::move(q));
      }
      const ClientProblem client(std::move(comps), 0);
      const double gamma = (0.1 + 0.9 * stream.uniform()) * 0.5 / l_bound;
      const int steps = 1 + trial % 6;
      const Vec x = random_vec(stream, d, 2.0);
      const double eta = 0.01 + stream.uniform();
      Vec dir = random_vec(stream, d, 1.0);
      dir *= eta / dir.norm();
      const Vec y = x + dir;
      const double dist =
          (local_gd(client, x, steps, gamma) - local_gd(client, y, steps, gamma))
              .norm();
      const double dist_ig =
          (local_ig(client, x, gamma) - local_ig(client, y, gamma)).norm();
      worst = std::max({worst, dist / eta, dist_ig / eta});
      if (dist > 2.0 * eta + 1e-12 || dist_ig > 2.0 * eta + 1e-12) {
        return {false, "||T(x)-T(y)|| exceeds 2 eta (gd " + fmt(dist) +
                           ", ig " + fmt(dist_ig) + ")"};
      }
    }
    return {true, "500 pairs, max ratio ||T(x)-T(y)||/||x-y|| = " + fmt(worst)};
  });
}

CheckResult memory_boundedness_lemma_eta() {
  return timed("memory_boundedness_lemma_eta",
               []() -> std::pair<bool, std::string> {
    const FederationProblem problem = make_suite(
        SuiteSpec{SuiteFamily::kQuadraticHetero, 10, 2, 20, 1.0}, 13);
    const double l = problem.smoothness();
    RunConfig cfg;
    cfg.gamma = 0.5 / l;
    cfg.beta = 0.2;
    cfg.alpha = 0.5;
    cfg.init = MemoryInitStrategy::kResidualPlusOffset;
    cfg.init_offset = 0.5;
    cfg.local_steps = 4;  // rho = 2 case: multi-step operator
    cfg.rounds = 800;
    cfg.seed = 6;
    // Lemma-form eta <= gamma beta R / (3 (alpha + R)).
    cfg.eta = cfg.gamma * cfg.beta * 0.5 / (3.0 * (cfg.alpha + 0.5));
    const RunResult result = run_training(problem, cfg);
    if (result.diverged) {
      return {false, "run diverged: " + result.error};
    }
    double max_gap = 0.0;
    for (const auto& rec : result.records) {
      max_gap = std::max(max_gap, rec.memory_gap);
    }
    const bool pass = max_gap <= 0.5 + 1e-9;
    return {pass, "T = 4, max R_k = " + fmt(max_gap) + " vs R_0 = 0.5"};
  });
}

}  // namespace checks

std::vector<CheckResult> acceptance_criteria() {
  return {
      checks::sensitivity_bound(),          // 1
      checks::memory_boundedness(),         // 2
      checks::ef21_fixed_point(),           // 3
      checks::rate_scaling(),               // 4
      checks::noise_drift_bound(),          // 5
      checks::sampling_statistics(),        // 6
      checks::ig_gd_consistency(),          // 7
      checks::recursion_lemmas(),           // 8
      checks::bias_witness(),               // 9
      checks::theory_consistency(),         // 10
      checks::amplification_monotonicity(), // 11
      checks::reproducibility(),            // 12
  };
}

VerifyReport run_verify(const std::string& suite) {
  VerifyReport report;
  report.suite = suite;
  auto add = [&report](CheckResult r) { report.checks.push_back(std::move(r)); };
  const bool all = suite == "all";
  if (suite == "lemmas" || all) {
    add(checks::sensitivity_bound());
    add(checks::ig_gd_consistency());
    add(checks::recursion_lemmas());
    add(checks::local_op_lipschitz_pairs());
    add(checks::avg_gradient_norm_lemma());
    add(checks::ig_inner_path_lemma());
  }
  if (suite == "sampling" || all) {
    add(checks::sampling_statistics());
    add(checks::transmit_second_moment());
  }
  if (suite == "convergence" || all) {
    add(checks::memory_boundedness());
    add(checks::memory_boundedness_lemma_eta());
    add(checks::ef21_fixed_point());
    add(checks::aggregation_identity());
    add(checks::rate_scaling());
    add(checks::bias_witness());
  }
  if (suite == "bounds" || all) {
    add(checks::noise_drift_bound());
    add(checks::theory_consistency());
    add(checks::amplification_monotonicity());
  }
  if (all) {
    add(checks::reproducibility());
  }
  if (report.checks.empty()) {
    throw ConfigError("suite", "unknown verify suite '" + suite +
                                   "' (expected lemmas, sampling, "
                                   "convergence, bounds, or all)");
  }
  return report;
}

std::string verify_report_json(const VerifyReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"pass", c.pass},
                      {"detail", c.detail},
                      {"elapsed_s", c.elapsed_s}});
  }
  nlohmann::json doc{{"suite", report.suite},
                     {"pass", report.all_pass()},
                     {"checks", checks}};
  return doc.dump(2) + "\n";
}

}  // namespace fednormec
