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

#include "fednormec/local_ops.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "fednormec/errors.hpp"

using namespace fednormec;

namespace {

ClientProblem scalar_quadratic(double curvature, double center) {
  Eigen::MatrixXd a(1, 1);
  a << curvature;
  Vec c(1);
  c << center;
  return ClientProblem({QuadraticComponent{a, c, 0.0}}, 0);
}

}  // namespace

TEST_CASE("one GD step has the closed form x - gamma (x - a)") {
  const ClientProblem client = scalar_quadratic(1.0, 0.7);
  Vec x(1);
  x << 2.0;
  for (double gamma : {0.1, 0.5, 1.0}) {
    const Vec tx = local_gd(client, x, 1, gamma);
    CHECK(tx[0] == doctest::Approx(2.0 - gamma * (2.0 - 0.7)).epsilon(1e-15));
  }
}

TEST_CASE("two inner steps on f = x^2/2: hand-traced value 0.25") {
  const ClientProblem client = scalar_quadratic(1.0, 0.0);
  Vec x(1);
  x << 1.0;
  LocalTrace trace;
  const Vec tx = local_gd(client, x, 2, 1.0, &trace);
  // Inner stepsize 1/2: 1 -> 0.5 -> 0.25.
  CHECK(tx[0] == doctest::Approx(0.25).epsilon(1e-15));
  REQUIRE(trace.iterates.size() == 3);
  CHECK(trace.iterates[0][0] == 1.0);
  CHECK(trace.iterates[1][0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(trace.iterates[2][0] == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("a stationary point is a fixed point for any T") {
  const ClientProblem client = scalar_quadratic(2.0, 1.5);
  Vec x(1);
  x << 1.5;  // gradient is zero here
  for (int steps : {1, 2, 7}) {
    CHECK(local_gd(client, x, steps, 0.2)[0] == 1.5);
  }
}

TEST_CASE("IG hand trace on two scalar components") {
  // f_{i,0} = x^2/2, f_{i,1} = (x-2)^2/2, gamma = 1, start 2:
  // inner stepsize 1/2: 2 -> 1 -> 1.5.
  Eigen::MatrixXd a(1, 1);
  a << 1.0;
  Vec c0(1), c1(1);
  c0 << 0.0;
  c1 << 2.0;
  const ClientProblem client(
      {QuadraticComponent{a, c0, 0.0}, QuadraticComponent{a, c1, 0.0}}, 0);
  Vec x(1);
  x << 2.0;
  LocalTrace trace;
  const Vec tx = local_ig(client, x, 1.0, &trace);
  CHECK(tx[0] == doctest::Approx(1.5).epsilon(1e-15));
  REQUIRE(trace.iterates.size() == 3);
  CHECK(trace.iterates[1][0] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("IG with a single component is one gradient step") {
  const ClientProblem client = scalar_quadratic(3.0, -1.0);
  Vec x(1);
  x << 0.5;
  const double gamma = 0.1;
  const Vec tx = local_ig(client, x, gamma);
  CHECK(tx[0] ==
        doctest::Approx(0.5 - gamma * 3.0 * (0.5 + 1.0)).epsilon(1e-14));
}

TEST_CASE("residual_to_update") {
  const ClientProblem client = scalar_quadratic(1.0, 0.0);
  Vec x(1);
  x << 2.0;

  SUBCASE("fixed point gives the zero update") {
    CHECK(residual_to_update(x, x, 0.3).norm() == 0.0);
  }
  SUBCASE("one GD step recovers the gradient exactly") {
    const double gamma = 0.37;
    const Vec tx = local_gd(client, x, 1, gamma);
    const Vec r = residual_to_update(x, tx, gamma);
    CHECK((r - client.gradient(x)).norm() <= 1e-12);
  }
  SUBCASE("halving gamma requires recomputation, not rescaling") {
    // With T = 2 the operator is nonlinear in gamma: the residual of a fresh
    // gamma/2 run differs from the gamma run's residual.
    const double gamma = 0.8;
    const Vec r_full =
        residual_to_update(x, local_gd(client, x, 2, gamma), gamma);
    const Vec r_half =
        residual_to_update(x, local_gd(client, x, 2, gamma / 2.0), gamma / 2.0);
    CHECK((r_full - r_half).norm() > 1e-3);
  }
}

TEST_CASE("divergent local updates surface as errors") {
  const ClientProblem client = scalar_quadratic(1.0, 0.0);
  Vec x(1);
  x << 1.0;
  CHECK_THROWS_AS(local_gd(client, x, 2, 1e160), DivergedLocalUpdateError);
}

TEST_CASE("argument validation") {
  const ClientProblem client = scalar_quadratic(1.0, 0.0);
  Vec x(1);
  x << 1.0;
  CHECK_THROWS_AS(local_gd(client, x, 0, 0.1), InvalidInputError);
  CHECK_THROWS_AS(local_gd(client, x, 1, 0.0), InvalidInputError);
  CHECK_THROWS_AS(local_gd(client, x, 1, -0.1), InvalidInputError);
  CHECK_THROWS_AS(local_ig(client, x, 0.0), InvalidInputError);
  CHECK_THROWS_AS(residual_to_update(x, x, 0.0), InvalidInputError);
}

TEST_CASE("apply_local_op dispatches on the mode") {
  const ClientProblem client = scalar_quadratic(1.0, 0.0);
  Vec x(1);
  x << 1.0;
  const LocalOpConfig gd{LocalMode::kGd, 2, 0.5};
  const LocalOpConfig ig{LocalMode::kIg, 99 /* ignored */, 0.5};
  CHECK((apply_local_op(client, x, gd) - local_gd(client, x, 2, 0.5)).norm() ==
        0.0);
  CHECK((apply_local_op(client, x, ig) - local_ig(client, x, 0.5)).norm() ==
        0.0);
}
