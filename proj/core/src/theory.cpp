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

#include "fednormec/theory.hpp"

#include <algorithm>
#include <cmath>

#include "fednormec/errors.hpp"

namespace fednormec {

namespace {

constexpr double kGammaTol = 1e-12;

void append_common_conditions(const TheoremInputs& in, const TheoremConfig& c,
                              LocalMode mode, BoundReport* report) {
  const double l = in.smoothness;
  const double gamma_slack =
      kGammaTol * (0.5 / l) - std::abs(c.gamma - 0.5 / l);
  report->side_conditions.push_back(
      {"gamma = 1/(2L)", gamma_slack >= 0.0, gamma_slack});
  const double ratio = c.beta / (c.alpha + c.memory_radius);
  report->side_conditions.push_back(
      {"beta/(alpha+R) < 1", ratio < 1.0, 1.0 - ratio});
  const EtaMax em =
      eta_max(l, in.delta_inf, c.beta, c.alpha, c.memory_radius, c.gamma,
              c.rounds, mode, c.local_steps);
  report->side_conditions.push_back(
      {"eta <= eta_max (" + em.binding + " branch)", c.eta <= em.value,
       em.value - c.eta});
}

}  // namespace

bool BoundReport::all_satisfied() const {
  return std::all_of(side_conditions.begin(), side_conditions.end(),
                     [](const SideCondition& c) { return c.satisfied; });
}

double participation_variance(double p, double sigma_dp) {
  if (!(p > 0.0) || p > 1.0) {
    throw InvalidInputError("participation probability must be in (0, 1]");
  }
  const double q = 1.0 - 1.0 / p;
  return 2.0 * p * q * q + 2.0 * (1.0 - p) + 2.0 * sigma_dp * sigma_dp / p;
}

BoundReport theorem1_bound(const TheoremInputs& in, const TheoremConfig& c) {
  BoundReport r;
  const double l = in.smoothness;
  const double kp1 = static_cast<double>(c.rounds) + 1.0;
  const double b = participation_variance(c.participation, c.sigma_dp);
  r.init_term = 3.0 * (in.f0 - in.f_inf) / (c.eta * kp1);
  r.memory_term = 2.0 * c.memory_radius;
  r.noise_term = 2.0 * std::sqrt(c.beta * c.beta * b * kp1 /
                                 static_cast<double>(in.clients));
  r.eta_term = 0.5 * c.eta * l;
  r.drift_term = (c.local_steps != 1)
                     ? c.gamma * 8.0 * l * std::sqrt(2.0 * l) *
                           std::sqrt(in.delta_inf)
                     : 0.0;
  r.total = r.init_term + r.memory_term + r.noise_term + r.drift_term +
            r.eta_term;
  r.advisory = in.advisory;
  append_common_conditions(in, c, LocalMode::kGd, &r);
  return r;
}

BoundReport theorem_ig_bound(const TheoremInputs& in, const TheoremConfig& c) {
  BoundReport r;
  const double l = in.smoothness;
  const double kp1 = static_cast<double>(c.rounds) + 1.0;
  const double b = participation_variance(c.participation, c.sigma_dp);
  r.init_term = 3.0 * (in.f0 - in.f_inf) / (c.eta * kp1);
  r.memory_term = 2.0 * c.memory_radius;
  r.noise_term = 2.0 * std::sqrt(c.beta * c.beta * b * kp1 /
                                 static_cast<double>(in.clients));
  r.eta_term = 0.5 * c.eta * l;
  const double root2l = std::sqrt(2.0 * l);
  r.drift_term = c.gamma * 8.0 * l * root2l * std::sqrt(in.delta_inf) +
                 c.gamma * 4.0 * l * root2l * std::sqrt(in.mean_delta_inf_i);
  r.total = r.init_term + r.memory_term + r.noise_term + r.drift_term +
            r.eta_term;
  r.advisory = in.advisory;
  append_common_conditions(in, c, LocalMode::kIg, &r);
  return r;
}

double compute_R(const std::vector<Vec>& memories,
                 const FederationProblem& problem, const Vec& x,
                 const LocalOpConfig& op) {
  if (static_cast<int>(memories.size()) != problem.num_clients()) {
    throw InvalidInputError("compute_R: one memory per client required");
  }
  double r = 0.0;
  for (int i = 0; i < problem.num_clients(); ++i) {
    const Vec tx = apply_local_op(problem.client(i), x, op);
    const Vec residual = residual_to_update(x, tx, op.gamma);
    r = std::max(r, (memories[i] - residual).norm());
  }
  return r;
}

EtaMax eta_max(double smoothness, double delta_inf, double beta, double alpha,
               double memory_radius, double gamma, int rounds, LocalMode mode,
               int local_steps) {
  EtaMax out;
  const double denom = (mode == LocalMode::kIg) ? 6.0 : 4.0;
  const double beta_branch =
      beta * memory_radius /
      (denom * smoothness * (alpha + memory_radius));
  const bool multi_step = (mode == LocalMode::kIg) || local_steps != 1;
  if (!multi_step) {
    out.value = beta_branch;
    out.binding = "beta";
    return out;
  }
  if (delta_inf <= 0.0) {
    out.value = beta_branch;
    out.binding = "beta";
    out.warnings.push_back(
        "Delta^inf = 0 degenerates the heterogeneity branch; using the beta "
        "branch only");
    return out;
  }
  const double hetero_branch =
      delta_inf / (4.0 * smoothness * std::sqrt(2.0 * smoothness) * gamma *
                   (static_cast<double>(rounds) + 1.0));
  if (hetero_branch < beta_branch) {
    out.value = hetero_branch;
    out.binding = "heterogeneity";
  } else {
    out.value = beta_branch;
    out.binding = "beta";
  }
  return out;
}

double noise_bound(double beta, int rounds, double sigma_sq, int clients,
                   double e0_norm) {
  const double kp1 = static_cast<double>(rounds) + 1.0;
  return e0_norm + std::sqrt(beta * beta * kp1 * sigma_sq /
                             static_cast<double>(clients));
}

}  // namespace fednormec
