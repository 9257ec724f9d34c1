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

#ifndef FEDNORMEC_THEORY_HPP_
#define FEDNORMEC_THEORY_HPP_

#include <string>
#include <vector>

#include "fednormec/local_ops.hpp"
#include "fednormec/problems.hpp"
#include "fednormec/vec.hpp"

namespace fednormec {

// Problem-side constants entering the convergence bounds.
struct TheoremInputs {
  double f0 = 0.0;     // f(x^0)
  double f_inf = 0.0;  // global infimum (or its estimate)
  double smoothness = 1.0;
  double delta_inf = 0.0;
  double mean_delta_inf_i = 0.0;  // (1/M) sum_i Delta^inf_i; IG bound only
  int clients = 1;
  bool advisory = false;  // set when the heterogeneity values are approximate
};

// Algorithm-side parameters entering the bounds.
struct TheoremConfig {
  double eta = 0.0;
  double beta = 0.0;
  double alpha = 0.0;
  double memory_radius = 0.0;  // R
  double gamma = 0.0;
  double participation = 1.0;
  double sigma_dp = 0.0;
  int rounds = 0;  // K
  int local_steps = 1;
};

struct SideCondition {
  std::string name;
  bool satisfied = false;
  double margin = 0.0;  // how far inside (positive) or outside (negative)
};

// Right-hand side of a convergence bound, term by term. total is the plain
// sum; the side conditions carry their numeric margins whether or not they
// hold (violations are reported, never thrown).
struct BoundReport {
  double init_term = 0.0;    // 3 (f^0 - f^inf) / (eta (K+1))
  double memory_term = 0.0;  // 2R
  double noise_term = 0.0;   // 2 sqrt(beta^2 B (K+1) / M)
  double drift_term = 0.0;   // heterogeneity drift, gamma-scaled
  double eta_term = 0.0;     // eta L / 2
  double total = 0.0;
  std::vector<SideCondition> side_conditions;
  bool advisory = false;

  bool all_satisfied() const;
};

// Per-client second moment  B = 2p(1 - 1/p)^2 + 2(1 - p) + 2 sigma^2 / p
// combining sampling variance and DP noise.
double participation_variance(double p, double sigma_dp);

// Convergence bound for local GD steps:
//   3(f^0-f^inf)/(eta(K+1)) + 2R + 2 sqrt(beta^2 B (K+1)/M) + eta L/2
//   + gamma * [T != 1] * 8 L sqrt(2L) sqrt(Delta^inf).
// Side conditions: gamma = 1/(2L), beta/(alpha+R) < 1, eta <= eta_max.
BoundReport theorem1_bound(const TheoremInputs& in, const TheoremConfig& cfg);

// IG variant: both heterogeneity terms are always present
// (gamma * 8 L sqrt(2L) sqrt(Delta^inf) and
//  gamma * 4 L sqrt(2L) sqrt(mean_i Delta^inf_i), folded into drift_term) and
// the eta condition uses the 6L denominator.
BoundReport theorem_ig_bound(const TheoremInputs& in, const TheoremConfig& cfg);

// R = max_i || v_i - (x - T_i(x)) / gamma ||; exact max over clients. Used at
// k = 0 for the theorem's R and per round as the R_k diagnostic.
double compute_R(const std::vector<Vec>& memories,
                 const FederationProblem& problem, const Vec& x,
                 const LocalOpConfig& op);

struct EtaMax {
  double value = 0.0;
  std::string binding;  // which branch binds: "beta" or "heterogeneity"
  std::vector<std::string> warnings;
};

// Largest eta admitted by the theorem's condition. The beta branch is
// beta R / (4L (alpha+R)) for GD, beta R / (6L (alpha+R)) for IG. The
// heterogeneity branch (appendix form eta*gamma <= Delta^inf/(4L sqrt(2L)
// (K+1))) enters the proof only through the multi-step drift bound, so it
// applies when the operator takes more than one step; a degenerate
// Delta^inf = 0 there falls back to the beta branch with a warning.
EtaMax eta_max(double smoothness, double delta_inf, double beta, double alpha,
               double memory_radius, double gamma, int rounds,
               LocalMode mode, int local_steps);

// Lemma-style drift bound  E||e^{K+1}|| <= ||e^0|| + sqrt(beta^2 (K+1)
// sigma_sq / M); sigma_sq is the per-client second moment B above.
double noise_bound(double beta, int rounds, double sigma_sq, int clients,
                   double e0_norm);

}  // namespace fednormec

#endif  // FEDNORMEC_THEORY_HPP_
