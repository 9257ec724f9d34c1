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
#include <string>

#include "fednormec/errors.hpp"

namespace fednormec {

namespace {

void check_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw InvalidInputError("local step size gamma must be finite and > 0");
  }
}

void check_finite_iterate(const Vec& x, int client, int step) {
  if (!x.allFinite()) {
    throw DivergedLocalUpdateError(
        "local update diverged at client " + std::to_string(client) +
        ", inner step " + std::to_string(step));
  }
}

}  // namespace

Vec local_gd(const ClientProblem& client, const Vec& x, int steps,
             double gamma, LocalTrace* trace) {
  check_gamma(gamma);
  if (steps < 1) {
    throw InvalidInputError("local GD needs at least one step");
  }
  if (!x.allFinite()) {
    throw InvalidInputError("local_gd: non-finite starting point");
  }
  const double inner = gamma / static_cast<double>(steps);
  Vec z = x;
  if (trace != nullptr) {
    trace->iterates.clear();
    trace->iterates.push_back(z);
  }
  for (int j = 0; j < steps; ++j) {
    z -= inner * client.gradient(z);
    check_finite_iterate(z, client.index(), j);
    if (trace != nullptr) {
      trace->iterates.push_back(z);
    }
  }
  return z;
}

Vec local_ig(const ClientProblem& client, const Vec& x, double gamma,
             LocalTrace* trace) {
  check_gamma(gamma);
  if (!x.allFinite()) {
    throw InvalidInputError("local_ig: non-finite starting point");
  }
  const int n = client.num_components();
  const double inner = gamma / static_cast<double>(n);
  Vec z = x;
  if (trace != nullptr) {
    trace->iterates.clear();
    trace->iterates.push_back(z);
  }
  for (int j = 0; j < n; ++j) {
    z -= inner * client.component_gradient(j, z);
    check_finite_iterate(z, client.index(), j);
    if (trace != nullptr) {
      trace->iterates.push_back(z);
    }
  }
  return z;
}

Vec apply_local_op(const ClientProblem& client, const Vec& x,
                   const LocalOpConfig& cfg, LocalTrace* trace) {
  if (cfg.mode == LocalMode::kIg) {
    return local_ig(client, x, cfg.gamma, trace);
  }
  return local_gd(client, x, cfg.steps, cfg.gamma, trace);
}

Vec residual_to_update(const Vec& x, const Vec& tx, double gamma) {
  check_gamma(gamma);
  return (x - tx) / gamma;
}

}  // namespace fednormec
