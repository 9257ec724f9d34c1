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

#include "fednormec/privacy.hpp"

#include <cmath>
#include <stdexcept>

#include "fednormec/errors.hpp"

namespace fednormec {

void PrivacyBudget::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidInputError("privacy budget: epsilon must be finite and > 0");
  }
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw InvalidInputError("privacy budget: delta must be in (0, 1)");
  }
  if (!(accountant_scale > 0.0) || !std::isfinite(accountant_scale)) {
    throw InvalidInputError("privacy budget: accountant constant must be > 0");
  }
}

double calibrate_sigma(const PrivacyBudget& budget, double p, int rounds) {
  budget.validate();
  if (!(p > 0.0) || p > 1.0) {
    throw InvalidInputError("calibrate_sigma: p must be in (0, 1]");
  }
  if (rounds < 0) {
    throw InvalidInputError("calibrate_sigma: rounds must be >= 0");
  }
  const double kp1 = static_cast<double>(rounds) + 1.0;
  return budget.accountant_scale * p *
         std::sqrt(kp1 * std::log(1.0 / budget.delta)) / budget.epsilon;
}

double experiment_sigma(double p, double beta, int rounds,
                        const PrivacyBudget& budget) {
  budget.validate();
  if (!(p > 0.0) || p > 1.0) {
    throw InvalidInputError("experiment_sigma: p must be in (0, 1]");
  }
  if (beta < 0.0) {
    throw InvalidInputError("experiment_sigma: beta must be >= 0");
  }
  return p * beta *
         std::sqrt(static_cast<double>(rounds) * std::log(1.0 / budget.delta)) /
         budget.epsilon;
}

ScheduleKind schedule_kind_from_name(const std::string& name) {
  if (name == "corollary-nonprivate") return ScheduleKind::kNonprivate;
  if (name == "corollary-one-step-dp") return ScheduleKind::kOneStepDp;
  if (name == "corollary-multi-gd") return ScheduleKind::kMultiGd;
  if (name == "corollary-ig") return ScheduleKind::kIg;
  if (name == "manual") return ScheduleKind::kManual;
  throw InvalidInputError("unknown schedule: " + name);
}

std::string schedule_kind_name(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::kNonprivate:
      return "corollary-nonprivate";
    case ScheduleKind::kOneStepDp:
      return "corollary-one-step-dp";
    case ScheduleKind::kMultiGd:
      return "corollary-multi-gd";
    case ScheduleKind::kIg:
      return "corollary-ig";
    case ScheduleKind::kManual:
      return "manual";
  }
  return "unknown";
}

namespace {

void require_positive_constants(const ScheduleConstants& c) {
  if (!(c.smoothness > 0.0)) {
    throw ScheduleInfeasibleError("schedule needs smoothness L > 0");
  }
  if (!(c.d1 > 0.0) || !(c.d2 > 0.0)) {
    throw ScheduleInfeasibleError("schedule constants D1, D2 must be > 0");
  }
  if (!(c.alpha > 0.0)) {
    throw ScheduleInfeasibleError("schedule normalization alpha must be > 0");
  }
}

void check_memory_ratio(const Schedule& s) {
  if (!(s.beta / (s.alpha + s.memory_radius) < 1.0)) {
    throw ScheduleInfeasibleError(
        "schedule violates beta/(alpha+R) < 1 (beta = " +
        std::to_string(s.beta) + ", alpha+R = " +
        std::to_string(s.alpha + s.memory_radius) + ")");
  }
}

// The constructed eta must satisfy the theorem-side condition it was designed
// for; a failure here is an internal inconsistency, not bad user input.
void recheck_eta(const Schedule& s, double bound, const char* what) {
  if (s.eta > bound * (1.0 + 1e-12)) {
    throw std::logic_error(std::string("schedule recheck failed: ") + what);
  }
}

Schedule nonprivate_schedule(const ScheduleConstants& c, int rounds) {
  require_positive_constants(c);
  const double l = c.smoothness;
  const double kp1 = static_cast<double>(rounds) + 1.0;
  Schedule s;
  s.kind = ScheduleKind::kNonprivate;
  s.rounds = rounds;
  s.participation = c.participation;
  s.gamma = 0.5 / l;
  s.memory_radius = c.d1 / std::pow(kp1, 1.0 / 6.0);
  s.beta = c.d2 / std::pow(kp1, 2.0 / 3.0);
  s.alpha = c.alpha;
  const double eta_hat = c.d1 * c.d2 / (4.0 * l * (c.alpha + c.d1));
  s.eta = eta_hat / std::pow(kp1, 5.0 / 6.0);
  s.sigma_dp = 0.0;
  check_memory_ratio(s);
  recheck_eta(s,
              s.beta * s.memory_radius /
                  (4.0 * l * (s.alpha + s.memory_radius)),
              "eta <= beta R / (4L (alpha+R))");
  return s;
}

Schedule multi_step_schedule(ScheduleKind kind, const ScheduleConstants& c,
                             int rounds) {
  require_positive_constants(c);
  const double l = c.smoothness;
  const double kp1 = static_cast<double>(rounds) + 1.0;
  const double beta_denom = (kind == ScheduleKind::kIg) ? 6.0 : 4.0;
  if (!(c.delta_inf > 0.0)) {
    throw ScheduleInfeasibleError(
        schedule_kind_name(kind) +
        ": Delta^inf = 0 makes the eta branch Delta^inf/(2 sqrt(2L)) "
        "degenerate; the schedule is infeasible on this problem");
  }
  Schedule s;
  s.kind = kind;
  s.rounds = rounds;
  s.participation = c.participation;
  s.gamma = 0.5 / (l * std::pow(kp1, 1.0 / 8.0));
  s.memory_radius = c.d1 / std::pow(kp1, 1.0 / 8.0);
  s.beta = c.d2 / std::pow(kp1, 5.0 / 8.0);
  s.alpha = c.alpha;
  const double eta_hat =
      std::min(c.delta_inf / (2.0 * std::sqrt(2.0 * l)),
               c.d1 * c.d2 / (beta_denom * l * (c.alpha + c.d1)));
  s.eta = eta_hat / std::pow(kp1, 7.0 / 8.0);
  s.sigma_dp = 0.0;
  check_memory_ratio(s);
  recheck_eta(s,
              s.beta * s.memory_radius /
                  (beta_denom * l * (s.alpha + s.memory_radius)),
              "eta <= beta R / (denom L (alpha+R))");
  recheck_eta(s, c.delta_inf / (4.0 * l * std::sqrt(2.0 * l) * s.gamma * kp1),
              "eta gamma <= Delta^inf / (4 L sqrt(2L) (K+1))");
  return s;
}

Schedule one_step_dp_schedule(const ScheduleConstants& c, int rounds) {
  c.budget.validate();
  const double l = c.smoothness;
  if (!(l > 0.0)) {
    throw ScheduleInfeasibleError("schedule needs smoothness L > 0");
  }
  const double m = static_cast<double>(c.clients);
  if (!(c.sampled_clients >= 1.0) || c.sampled_clients > m) {
    throw ScheduleInfeasibleError("sampled clients B-hat must be in [1, M]");
  }
  const double gap = c.f0 - c.f_inf;
  if (!(gap > 0.0)) {
    throw ScheduleInfeasibleError(
        "corollary-one-step-dp needs f(x0) - f^inf > 0");
  }
  const double kp1 = static_cast<double>(rounds) + 1.0;
  Schedule s;
  s.kind = ScheduleKind::kOneStepDp;
  s.rounds = rounds;
  s.participation = c.sampled_clients / m;
  s.gamma = 0.5 / l;
  s.sigma_dp = calibrate_sigma(c.budget, s.participation, rounds);
  const double log_term = std::log(1.0 / c.budget.delta);
  const double cc = c.budget.accountant_scale;
  const double b2 = 2.0 * cc * cc * (c.sampled_clients / m) * log_term /
                    (c.budget.epsilon * c.budget.epsilon);
  const double beta_hat =
      std::sqrt(3.0 * gap / s.gamma) * std::pow(m / b2, 0.25);
  s.beta = beta_hat / kp1;
  const double r = std::pow(static_cast<double>(c.dim), 0.25) *
                   std::sqrt(gap) / std::sqrt(s.gamma) *
                   std::pow(b2 / m, 0.25);
  s.alpha = r;
  s.memory_radius = r;
  s.eta = (1.0 / kp1) * (s.gamma / 2.0) * beta_hat * r / (s.alpha + r);
  const double gamma_bound =
      c.delta_inf * (s.alpha + r) / (std::sqrt(2.0 * l) * beta_hat * r);
  if (!(s.gamma < gamma_bound)) {
    // Degenerate or binding heterogeneity condition; the explicit eta formula
    // already matches the beta branch, so keep it and warn.
    s.warnings.push_back(
        "gamma < Delta^inf (alpha+R) / (sqrt(2L) beta_hat R) does not hold "
        "(Delta^inf = " +
        std::to_string(c.delta_inf) + "); using the explicit eta formula");
  }
  check_memory_ratio(s);
  return s;
}

}  // namespace

Schedule schedule_from_corollary(ScheduleKind kind,
                                 const ScheduleConstants& constants,
                                 int rounds) {
  if (rounds < 0) {
    throw InvalidInputError("schedule needs rounds >= 0");
  }
  switch (kind) {
    case ScheduleKind::kNonprivate:
      return nonprivate_schedule(constants, rounds);
    case ScheduleKind::kOneStepDp:
      return one_step_dp_schedule(constants, rounds);
    case ScheduleKind::kMultiGd:
    case ScheduleKind::kIg:
      return multi_step_schedule(kind, constants, rounds);
    case ScheduleKind::kManual:
      throw InvalidInputError(
          "manual runs take parameters from the config, not a corollary");
  }
  throw InvalidInputError("unknown schedule kind");
}

void apply_schedule(const Schedule& schedule, RunConfig* cfg) {
  cfg->gamma = schedule.gamma;
  cfg->beta = schedule.beta;
  cfg->eta = schedule.eta;
  cfg->alpha = schedule.alpha;
  cfg->sigma_dp = schedule.sigma_dp;
  cfg->dp_enabled = schedule.sigma_dp > 0.0;
  cfg->participation = schedule.participation;
  cfg->rounds = schedule.rounds;
  cfg->init = MemoryInitStrategy::kResidualPlusOffset;
  cfg->init_offset = schedule.memory_radius;
  switch (schedule.kind) {
    case ScheduleKind::kIg:
      cfg->local_mode = LocalMode::kIg;
      break;
    case ScheduleKind::kMultiGd:
      cfg->local_mode = LocalMode::kGd;
      if (cfg->local_steps < 2) {
        cfg->local_steps = 2;
      }
      break;
    case ScheduleKind::kNonprivate:
    case ScheduleKind::kOneStepDp:
      cfg->local_mode = LocalMode::kGd;
      cfg->local_steps = 1;
      break;
    case ScheduleKind::kManual:
      break;
  }
}

double utility_bound_one_step_dp(const ScheduleConstants& c,
                                 double sampled_clients) {
  c.budget.validate();
  const double m = static_cast<double>(c.clients);
  const double gap = c.f0 - c.f_inf;
  const double l = c.smoothness;
  const double gamma = 0.5 / l;
  const double log_term = std::log(1.0 / c.budget.delta);
  const double cc = c.budget.accountant_scale;
  const double b2 = 2.0 * cc * cc * (sampled_clients / m) * log_term /
                    (c.budget.epsilon * c.budget.epsilon);
  const double alpha = std::pow(static_cast<double>(c.dim), 0.25) *
                       std::sqrt(gap) / std::sqrt(gamma) *
                       std::pow(b2 / m, 0.25);
  const double big_delta = std::max(alpha, 2.0) * std::sqrt(l) * std::sqrt(gap);
  return big_delta * std::pow(static_cast<double>(c.dim) * sampled_clients /
                                  (m * m) * log_term /
                                  (c.budget.epsilon * c.budget.epsilon),
                              0.25);
}

}  // namespace fednormec
