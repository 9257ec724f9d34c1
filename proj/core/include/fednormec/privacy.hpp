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

#ifndef FEDNORMEC_PRIVACY_HPP_
#define FEDNORMEC_PRIVACY_HPP_

#include <string>
#include <vector>

#include "fednormec/fed_core.hpp"

namespace fednormec {

// Client-level (epsilon, delta)-DP target. accountant_scale is the
// accountant's constant c > 0; the formal epsilon verification behind it is
// out of scope, so c stays an explicit knob (default 1).
struct PrivacyBudget {
  double epsilon = 1.0;
  double delta = 1e-5;
  double accountant_scale = 1.0;

  void validate() const;  // throws InvalidInputError
};

// Subsampling-amplified calibration  sigma_DP = c * p * sqrt((K+1) log(1/delta)) / epsilon.
// Linear in p, monotone in K, decreasing in epsilon.
double calibrate_sigma(const PrivacyBudget& budget, double p, int rounds);

// The experiment-protocol variant  p * beta * sqrt(K log(1/delta)) / epsilon.
// Distinct from calibrate_sigma (K instead of K+1, scaled by beta); the two
// are never interchanged silently.
double experiment_sigma(double p, double beta, int rounds,
                        const PrivacyBudget& budget);

enum class ScheduleKind {
  kNonprivate,  // one local GD step, sigma = 0, O(1/(K+1)^{1/6}) rate
  kOneStepDp,   // one local GD step, subsampled DP utility schedule
  kMultiGd,     // multiple local GD steps, O(1/(K+1)^{1/8}) rate
  kIg,          // cyclic IG pass, O(1/(K+1)^{1/8}) rate
  kManual,      // parameters come straight from the run config
};

ScheduleKind schedule_kind_from_name(const std::string& name);
std::string schedule_kind_name(ScheduleKind kind);

// Problem constants a schedule consumes. d1/d2/alpha are the corollaries'
// free constants.
struct ScheduleConstants {
  double smoothness = 1.0;  // L
  double f0 = 0.0;          // f(x^0)
  double f_inf = 0.0;
  double delta_inf = 0.0;
  int clients = 1;  // M
  int dim = 1;      // d
  double d1 = 1.0;
  double d2 = 1.0;
  double alpha = 0.5;
  double participation = 1.0;   // p for the non-DP schedules
  double sampled_clients = 1.0;  // B-hat for the DP schedule
  PrivacyBudget budget;
};

// Fully derived parameter set. memory_radius is the R the schedule requires;
// runs realize it with the residual-plus-offset memory init (offset = R).
struct Schedule {
  ScheduleKind kind = ScheduleKind::kManual;
  double gamma = 0.0;
  double beta = 0.0;
  double eta = 0.0;
  double alpha = 0.0;
  double memory_radius = 0.0;
  double sigma_dp = 0.0;
  double participation = 1.0;
  int rounds = 0;
  std::vector<std::string> warnings;
};

// Turns (corollary, problem constants, K) into concrete parameters and
// re-checks the source corollary's inequalities numerically. Throws
// ScheduleInfeasibleError naming the violated condition (e.g. Delta^inf = 0
// for the multi-step schedules, whose eta would collapse to zero).
Schedule schedule_from_corollary(ScheduleKind kind,
                                 const ScheduleConstants& constants,
                                 int rounds);

// Copies a schedule's derived parameters into a run config, including the
// implied residual-plus-offset init with D = R.
void apply_schedule(const Schedule& schedule, RunConfig* cfg);

// Evaluated utility bound of the one-step DP corollary,
//   Delta * (d * B_hat / M^2 * log(1/delta) / epsilon^2)^{1/4},
// with alpha = R evaluated at unit constant and Delta = max(alpha, 2)
// sqrt(L) sqrt(f0 - f_inf). Decreasing in B_hat, all else fixed.
double utility_bound_one_step_dp(const ScheduleConstants& constants,
                                 double sampled_clients);

}  // namespace fednormec

#endif  // FEDNORMEC_PRIVACY_HPP_
