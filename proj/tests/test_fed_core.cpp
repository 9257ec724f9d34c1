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

#include "fednormec/fed_core.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "fednormec/errors.hpp"
#include "fednormec/theory.hpp"

using namespace fednormec;

namespace {

// Two scalar quadratics (x-1)^2/2 and (x+1)^2/2; L = 1.
FederationProblem mirrored_pair() {
  Eigen::MatrixXd a(1, 1);
  a << 1.0;
  Vec c1(1), c2(1);
  c1 << 1.0;
  c2 << -1.0;
  std::vector<ClientProblem> clients;
  clients.emplace_back(std::vector<Component>{QuadraticComponent{a, c1, 0.0}},
                       0);
  clients.emplace_back(std::vector<Component>{QuadraticComponent{a, c2, 0.0}},
                       1);
  return FederationProblem(std::move(clients));
}

}  // namespace

TEST_CASE("hand-traced round: deltas, memories, aggregate, step") {
  const FederationProblem problem = mirrored_pair();
  RunConfig cfg;
  cfg.gamma = 0.5;  // = 1/(2L)
  cfg.beta = 0.5;
  cfg.alpha = 1.0;
  cfg.eta = 0.125;
  cfg.local_steps = 1;
  Vec x(1);
  x << 2.0;

  // Residuals are the gradients at x = 2: 1 and 3.
  std::vector<ClientState> states{{Vec::Zero(1), 0}, {Vec::Zero(1), 1}};
  const ClientRoundResult r0 = client_round(states[0], problem.client(0), x, cfg);
  const ClientRoundResult r1 = client_round(states[1], problem.client(1), x, cfg);
  CHECK(r0.delta[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r1.delta[0] == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(states[0].memory[0] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(states[1].memory[0] == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(r0.memory_gap == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r1.memory_gap == doctest::Approx(3.0).epsilon(1e-15));

  ServerState server;
  server.x = x;
  server.v_hat = Vec::Zero(1);
  server_aggregate(server, {r0.delta, r1.delta}, cfg.beta, 2);
  CHECK(server.v_hat[0] == doctest::Approx(0.3125).epsilon(1e-15));

  const StepResult step = server_step(server, cfg.eta, true, 1e-12);
  CHECK_FALSE(step.degenerate);
  CHECK(server.x[0] == doctest::Approx(2.0 - cfg.eta).epsilon(1e-15));
  CHECK(step.step_norm == cfg.eta);
}

TEST_CASE("every transmitted innovation has norm at most one") {
  const FederationProblem problem = mirrored_pair();
  RunConfig cfg;
  cfg.gamma = 0.5;
  cfg.beta = 0.9;
  cfg.alpha = 0.05;
  RngStream s(65, 0, 0, StreamPurpose::kDataGen);
  for (int trial = 0; trial < 500; ++trial) {
    Vec x(1);
    x << 10.0 * s.gaussian();
    ClientState state{Vec(1), 0};
    state.memory << 5.0 * s.gaussian();
    const ClientRoundResult r = client_round(state, problem.client(0), x, cfg);
    CHECK(r.delta.norm() <= 1.0 + 1e-12);
  }
}

TEST_CASE("participation sampling") {
  SUBCASE("p = 1 samples everyone with unit weight") {
    const Participation part = sample_participation(1, 0, 1.0, 10);
    CHECK(part.count == 10);
    for (int i = 0; i < 10; ++i) {
      CHECK(part.mask[i] == 1);
      CHECK(part.weights[i] == 1.0);
    }
  }
  SUBCASE("invalid probabilities are rejected") {
    CHECK_THROWS_AS(sample_participation(1, 0, 0.0, 5), InvalidInputError);
    CHECK_THROWS_AS(sample_participation(1, 0, 1.5, 5), InvalidInputError);
  }
  SUBCASE("same key reproduces the same mask") {
    const Participation a = sample_participation(7, 3, 0.4, 25);
    const Participation b = sample_participation(7, 3, 0.4, 25);
    CHECK(a.mask == b.mask);
  }
}

TEST_CASE("transmit") {
  Vec delta(3);
  delta << 0.1, -0.2, 0.3;

  SUBCASE("silent clients send zero and draw no noise") {
    RngStream used(5, 1, 2, StreamPurpose::kDpNoise);
    const Vec sent = transmit(delta, 0.0, true, 1.0, used);
    CHECK(sent.norm() == 0.0);
    RngStream fresh(5, 1, 2, StreamPurpose::kDpNoise);
    CHECK(used.gaussian() == fresh.gaussian());
  }
  SUBCASE("sigma = 0 private equals non-private") {
    RngStream a(5, 1, 2, StreamPurpose::kDpNoise);
    RngStream b(5, 1, 2, StreamPurpose::kDpNoise);
    const Vec priv = transmit(delta, 2.0, true, 0.0, a);
    const Vec open = transmit(delta, 2.0, false, 0.0, b);
    CHECK((priv - open).norm() == 0.0);
  }
  SUBCASE("weighting scales the payload") {
    RngStream s(5, 1, 2, StreamPurpose::kDpNoise);
    const Vec sent = transmit(delta, 4.0, false, 0.0, s);
    CHECK((sent - 4.0 * delta).norm() == 0.0);
  }
}

TEST_CASE("server aggregation and step") {
  ServerState server;
  server.x = Vec::Zero(2);
  server.v_hat = Vec::Ones(2);

  SUBCASE("all-zero payloads leave v_hat unchanged") {
    server_aggregate(server, {Vec::Zero(2), Vec::Zero(2)}, 0.5, 2);
    CHECK((server.v_hat - Vec::Ones(2)).norm() == 0.0);
  }
  SUBCASE("zero aggregate flags a degenerate round") {
    server.v_hat = Vec::Zero(2);
    const StepResult r = server_step(server, 0.1, true, 1e-12);
    CHECK(r.degenerate);
    CHECK(server.x.norm() == 0.0);
  }
  SUBCASE("normalized step has exact length eta") {
    const StepResult r = server_step(server, 0.25, true, 1e-12);
    CHECK_FALSE(r.degenerate);
    CHECK(server.x.norm() == doctest::Approx(0.25).epsilon(1e-12));
  }
  SUBCASE("unnormalized step is x - eta v_hat") {
    const StepResult r = server_step(server, 0.25, false, 1e-12);
    CHECK((server.x + 0.25 * Vec::Ones(2)).norm() == 0.0);
    CHECK(r.step_norm == doctest::Approx(0.25 * std::sqrt(2.0)).epsilon(1e-12));
  }
}

TEST_CASE("memory initialization strategies and R_0") {
  const FederationProblem problem = mirrored_pair();
  const LocalOpConfig op{LocalMode::kGd, 1, 0.5};
  Vec x0(1);
  x0 << 2.0;

  SUBCASE("exact residual gives R_0 = 0") {
    const auto mem = init_memories(problem, x0, op,
                                   MemoryInitStrategy::kExactResidual, 0.0);
    CHECK(compute_R(mem, problem, x0, op) == 0.0);
  }
  SUBCASE("residual plus offset gives R_0 = D") {
    const auto mem = init_memories(
        problem, x0, op, MemoryInitStrategy::kResidualPlusOffset, 0.5);
    CHECK(compute_R(mem, problem, x0, op) ==
          doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("zero init with T = 1 gives R_0 = max gradient norm") {
    const auto mem =
        init_memories(problem, x0, op, MemoryInitStrategy::kZero, 0.0);
    double expect = 0.0;
    for (int i = 0; i < problem.num_clients(); ++i) {
      expect = std::max(expect, problem.client(i).gradient(x0).norm());
    }
    CHECK(compute_R(mem, problem, x0, op) ==
          doctest::Approx(expect).epsilon(1e-12));
  }
  SUBCASE("server memory starts at the client mean") {
    const auto mem =
        init_memories(problem, x0, op, MemoryInitStrategy::kZero, 0.0);
    const ServerState server = init_server(x0, mem);
    CHECK(server.v_hat.norm() == 0.0);
    CHECK(server.round == 0);
  }
}

TEST_CASE("run_training basics") {
  const FederationProblem problem = mirrored_pair();
  RunConfig cfg;
  cfg.gamma = 0.5;
  cfg.beta = 0.2;
  cfg.alpha = 0.5;
  cfg.eta = 0.05;
  cfg.rounds = 0;
  Vec x0(1);
  x0 << 2.0;
  cfg.x0 = x0;

  SUBCASE("K = 0 executes exactly one round") {
    const RunResult r = run_training(problem, cfg);
    CHECK(r.records.size() == 1);
    CHECK(r.records[0].round == 0);
    CHECK(r.records[0].participants == 2);
  }
  SUBCASE("identical seeds give identical trajectories") {
    RunConfig c2 = cfg;
    c2.rounds = 40;
    c2.participation = 0.5;
    c2.sigma_dp = 0.3;
    c2.dp_enabled = true;
    c2.seed = 99;
    const RunResult a = run_training(problem, c2);
    const RunResult b = run_training(problem, c2);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t k = 0; k < a.records.size(); ++k) {
      CHECK(a.records[k].f_value == b.records[k].f_value);
      CHECK(a.records[k].grad_norm == b.records[k].grad_norm);
      CHECK(a.records[k].memory_gap == b.records[k].memory_gap);
      CHECK(a.records[k].participants == b.records[k].participants);
      CHECK(a.records[k].v_hat_norm == b.records[k].v_hat_norm);
    }
    CHECK((a.server.x - b.server.x).norm() == 0.0);
  }
  SUBCASE("config validation names the offending field") {
    RunConfig bad = cfg;
    bad.participation = 1.5;
    CHECK_THROWS_WITH_AS(run_training(problem, bad), "p: must be in (0, 1]",
                         ConfigError);
  }
  SUBCASE("theory mode rejects an oversized beta") {
    RunConfig bad = cfg;
    bad.theory_check = true;
    bad.init = MemoryInitStrategy::kExactResidual;  // R_0 = 0
    bad.beta = 1.0;
    bad.alpha = 0.5;  // beta/(alpha+0) = 2 >= 1
    CHECK_THROWS_AS(run_training(problem, bad), ConfigError);
  }
  SUBCASE("theory mode rejects eta above eta_max") {
    RunConfig bad = cfg;
    bad.theory_check = true;
    bad.init = MemoryInitStrategy::kResidualPlusOffset;
    bad.init_offset = 0.5;
    bad.eta = 10.0;
    CHECK_THROWS_AS(run_training(problem, bad), ConfigError);
  }
  SUBCASE("divergence is reported with a partial trajectory") {
    RunConfig diverging = cfg;
    diverging.gamma = 1e160;
    diverging.local_steps = 2;
    diverging.rounds = 10;
    diverging.init = MemoryInitStrategy::kZero;
    const RunResult r = run_training(problem, diverging);
    CHECK(r.diverged);
    CHECK(!r.error.empty());
    CHECK(r.records.size() >= 1);
    CHECK(r.records.size() < 11);
  }
  SUBCASE("divergence during memory init is reported too") {
    RunConfig diverging = cfg;
    diverging.gamma = 1e160;
    diverging.local_steps = 2;
    diverging.rounds = 10;
    diverging.init = MemoryInitStrategy::kExactResidual;
    const RunResult r = run_training(problem, diverging);
    CHECK(r.diverged);
    CHECK(r.error.find("memory init") != std::string::npos);
    CHECK(r.records.empty());
  }
}

TEST_CASE("IG rounds run end-to-end with bounded memories") {
  const FederationProblem problem =
      make_suite(SuiteSpec{SuiteFamily::kQuadraticHetero, 6, 3, 10, 1.0}, 23);
  RunConfig cfg;
  cfg.gamma = 0.5 / problem.smoothness();
  cfg.beta = 0.2;
  cfg.alpha = 0.5;
  cfg.local_mode = LocalMode::kIg;
  cfg.init = MemoryInitStrategy::kResidualPlusOffset;
  cfg.init_offset = 0.5;
  cfg.rounds = 300;
  cfg.seed = 3;
  // Lemma-form stepsize, rho = 2.
  cfg.eta = cfg.gamma * cfg.beta * 0.5 / (3.0 * (cfg.alpha + 0.5));
  const RunResult r = run_training(problem, cfg);
  CHECK_FALSE(r.diverged);
  REQUIRE(r.records.size() == 301);
  for (const auto& rec : r.records) {
    CHECK(rec.memory_gap <= 0.5 + 1e-9);
    CHECK(std::isfinite(rec.f_value));
  }
  CHECK(r.min_grad_norm < r.records.front().grad_norm);
}

TEST_CASE("logistic suites train without heterogeneity oracles") {
  const FederationProblem problem =
      make_suite(SuiteSpec{SuiteFamily::kLogisticBlobs, 5, 4, 8, 1.0}, 31);
  CHECK(problem.heterogeneity_approximate());
  RunConfig cfg;
  cfg.gamma = 0.5 / problem.smoothness();
  cfg.beta = 0.2;
  cfg.alpha = 0.5;
  cfg.eta = 0.01;
  cfg.rounds = 200;
  cfg.init = MemoryInitStrategy::kZero;
  const RunResult r = run_training(problem, cfg);
  CHECK_FALSE(r.diverged);
  CHECK(r.min_grad_norm < r.records.front().grad_norm);
  for (const auto& rec : r.records) {
    CHECK(std::isfinite(rec.grad_norm));
  }
}

TEST_CASE("non-participants keep updating memories but stay silent") {
  const FederationProblem problem = mirrored_pair();
  RunConfig cfg;
  cfg.gamma = 0.5;
  cfg.beta = 0.2;
  cfg.alpha = 0.5;
  cfg.eta = 0.01;
  cfg.rounds = 5;
  cfg.participation = 1e-9;  // nobody realistically participates
  cfg.seed = 4;
  Vec x0(1);
  x0 << 2.0;
  cfg.x0 = x0;
  cfg.init = MemoryInitStrategy::kZero;
  const RunResult r = run_training(problem, cfg);
  for (const auto& rec : r.records) {
    CHECK(rec.participants == 0);
    CHECK(rec.degenerate);  // v_hat stays zero, steps are skipped
  }
  // Memories still moved every round (lines 5-7 run for all clients).
  CHECK(r.clients[0].memory.norm() > 0.0);
  CHECK(r.clients[1].memory.norm() > 0.0);
}
