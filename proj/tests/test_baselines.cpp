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

#include "fednormec/baselines.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "fednormec/errors.hpp"
#include "fednormec/local_ops.hpp"
#include "fednormec/problems.hpp"

using namespace fednormec;

namespace {

FederationProblem scalar_pair(double l2) {
  Eigen::MatrixXd a1(1, 1), a2(1, 1);
  a1 << 1.0;
  a2 << l2;
  Vec c1(1), c2(1);
  c1 << 1.0;
  c2 << -1.0;
  std::vector<ClientProblem> clients;
  clients.emplace_back(std::vector<Component>{QuadraticComponent{a1, c1, 0.0}},
                       0);
  clients.emplace_back(std::vector<Component>{QuadraticComponent{a2, c2, 0.0}},
                       1);
  return FederationProblem(std::move(clients));
}

}  // namespace

TEST_CASE("clients at their fixed points leave the model unchanged") {
  const FederationProblem problem =
      make_suite(SuiteSpec{SuiteFamily::kQuadraticHomo, 4, 2, 5, 0.0}, 2);
  // Shared center is the origin (scale 0), so T_i(0) = 0 for every client.
  FedAvgConfig cfg;
  cfg.eta = 0.1;
  cfg.gamma = 0.5;
  cfg.alpha = 0.01;
  const FedAvgRound r =
      dp_fedavg_round(Vec::Zero(problem.dim()), problem, cfg, 0);
  CHECK(r.x_next.norm() == 0.0);
  CHECK_FALSE(r.degenerate);
}

TEST_CASE("single client with alpha = 0 steps eta along the unit update") {
  Eigen::MatrixXd a(1, 1);
  a << 1.0;
  Vec c(1);
  c << 1.0;
  std::vector<ClientProblem> clients;
  clients.emplace_back(std::vector<Component>{QuadraticComponent{a, c, 0.0}},
                       0);
  const FederationProblem problem(std::move(clients));
  FedAvgConfig cfg;
  cfg.eta = 0.07;
  cfg.gamma = 0.4;
  cfg.alpha = 0.0;
  Vec x(1);
  x << 3.0;
  const FedAvgRound r = dp_fedavg_round(x, problem, cfg, 0);
  const Vec tx = local_gd(problem.client(0), x, 1, cfg.gamma);
  const Vec direction = (x - tx) / (x - tx).norm();
  CHECK((r.x_next - (x - cfg.eta * direction)).norm() <= 1e-15);
}

TEST_CASE("pure normalization stalls exactly between mirrored clients") {
  // Inside (-1, 1) the two normalized updates are opposite unit signs, so
  // their sum is exactly zero: the iterate never moves.
  const FederationProblem problem = scalar_pair(9.0);
  FedAvgConfig cfg;
  cfg.eta = 1.0 / 18.0;
  cfg.gamma = 1.0 / 18.0;
  cfg.alpha = 0.0;
  Vec x(1);
  x << -0.5;
  for (int k = 0; k < 5; ++k) {
    const FedAvgRound r = dp_fedavg_round(x, problem, cfg, k);
    CHECK(r.x_next[0] == -0.5);
    x = r.x_next;
  }
}

TEST_CASE("empty participant sets skip the update") {
  const FederationProblem problem = scalar_pair(1.0);
  FedAvgConfig cfg;
  cfg.eta = 0.1;
  cfg.gamma = 0.5;
  cfg.participation = 0.01;
  cfg.seed = 5;
  Vec x(1);
  x << 2.0;
  bool saw_empty = false;
  for (int k = 0; k < 600 && !saw_empty; ++k) {
    const FedAvgRound r = dp_fedavg_round(x, problem, cfg, k);
    if (r.participants == 0) {
      saw_empty = true;
      CHECK(r.degenerate);
      CHECK(r.x_next[0] == x[0]);
    }
  }
  CHECK(saw_empty);
}

TEST_CASE("per-participant payloads have norm at most one") {
  const FederationProblem problem = scalar_pair(9.0);
  FedAvgConfig cfg;
  cfg.eta = 0.05;
  cfg.gamma = 0.5;
  cfg.alpha = 0.01;
  Vec x(1);
  x << 50.0;  // huge raw updates, the bound must still hold
  const FedAvgRound r = dp_fedavg_round(x, problem, cfg, 0);
  // Both payloads bounded by 1, so their mean is too.
  CHECK(r.payload_norm <= 1.0 + 1e-12);
}

TEST_CASE("homogeneous noiseless run decreases like normalized descent") {
  const FederationProblem problem =
      make_suite(SuiteSpec{SuiteFamily::kQuadraticHomo, 5, 2, 6, 1.0}, 8);
  FedAvgConfig cfg;
  cfg.eta = 0.005;
  cfg.gamma = 0.5 / problem.smoothness();
  cfg.alpha = 1e-9;
  cfg.rounds = 400;
  const RunResult r = run_fedavg(problem, cfg);
  const double floor = cfg.eta * problem.smoothness() / 2.0;
  for (std::size_t k = 0; k + 1 < r.records.size(); ++k) {
    const bool at_floor = r.records[k].grad_norm <= floor * (1.0 + 1e-6);
    const bool decreasing =
        r.records[k + 1].grad_norm <= r.records[k].grad_norm + 1e-12;
    CHECK((at_floor || decreasing));
  }
}

TEST_CASE("run_fedavg basics") {
  const FederationProblem problem = scalar_pair(1.0);
  FedAvgConfig cfg;
  cfg.eta = 0.05;
  cfg.gamma = 0.5;
  cfg.rounds = 0;
  Vec x0(1);
  x0 << 2.0;
  cfg.x0 = x0;

  SUBCASE("K = 0 emits one record") {
    const RunResult r = run_fedavg(problem, cfg);
    CHECK(r.records.size() == 1);
    CHECK(r.records[0].memory_gap == 0.0);
  }
  SUBCASE("identical seeds reproduce the trajectory") {
    FedAvgConfig c2 = cfg;
    c2.rounds = 30;
    c2.participation = 0.5;
    c2.sigma_dp = 0.2;
    c2.dp_enabled = true;
    c2.seed = 77;
    const RunResult a = run_fedavg(problem, c2);
    const RunResult b = run_fedavg(problem, c2);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t k = 0; k < a.records.size(); ++k) {
      CHECK(a.records[k].grad_norm == b.records[k].grad_norm);
      CHECK(a.records[k].step_norm == b.records[k].step_norm);
    }
  }
  SUBCASE("config validation") {
    FedAvgConfig bad = cfg;
    bad.participation = 0.0;
    CHECK_THROWS_AS(run_fedavg(problem, bad), ConfigError);
  }
}
