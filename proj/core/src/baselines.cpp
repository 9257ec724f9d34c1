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

#include <algorithm>
#include <cmath>
#include <limits>

#include "fednormec/errors.hpp"
#include "fednormec/local_ops.hpp"
#include "fednormec/rng.hpp"
#include "fednormec/vec.hpp"

namespace fednormec {

FedAvgRound dp_fedavg_round(const Vec& x, const FederationProblem& problem,
                            const FedAvgConfig& cfg, int round) {
  const int m = problem.num_clients();
  const Participation part =
      sample_participation(cfg.seed, round, cfg.participation, m);
  FedAvgRound out;
  out.participants = part.count;
  if (part.count == 0) {
    out.x_next = x;
    out.degenerate = true;
    return out;
  }
  Vec sum = Vec::Zero(problem.dim());
  for (int i = 0; i < m; ++i) {
    if (!part.mask[i]) {
      continue;
    }
    const Vec tx = apply_local_op(problem.client(i), x, cfg.local_op());
    sum += smoothed_normalize(x - tx, cfg.alpha);
    if (cfg.dp_enabled && cfg.sigma_dp > 0.0) {
      RngStream noise(cfg.seed, static_cast<std::uint64_t>(round),
                      static_cast<std::uint64_t>(i), StreamPurpose::kDpNoise);
      sum += gaussian_vector(noise, problem.dim(), cfg.sigma_dp);
    }
  }
  const double b = static_cast<double>(part.count);
  out.payload_norm = sum.norm() / b;
  out.x_next = x - (cfg.eta / b) * sum;
  out.step_norm = (out.x_next - x).norm();
  return out;
}

RunResult run_fedavg(const FederationProblem& problem,
                     const FedAvgConfig& cfg) {
  if (!(cfg.eta > 0.0) || !std::isfinite(cfg.eta)) {
    throw ConfigError("eta", "must be finite and > 0");
  }
  if (!(cfg.alpha >= 0.0)) {
    throw ConfigError("alpha", "must be >= 0");
  }
  if (!(cfg.participation > 0.0) || cfg.participation > 1.0) {
    throw ConfigError("p", "must be in (0, 1]");
  }
  if (cfg.rounds < 0) {
    throw ConfigError("rounds", "must be >= 0");
  }
  RunResult result;
  result.server.x = cfg.x0.size() > 0 ? cfg.x0 : Vec(Vec::Zero(problem.dim()));
  result.server.v_hat = Vec::Zero(problem.dim());
  result.min_grad_norm = std::numeric_limits<double>::infinity();
  result.records.reserve(cfg.rounds + 1);
  for (int k = 0; k <= cfg.rounds; ++k) {
    RoundRecord rec;
    rec.round = k;
    rec.f_value = problem.value(result.server.x);
    rec.grad_norm = problem.gradient(result.server.x).norm();
    result.min_grad_norm = std::min(result.min_grad_norm, rec.grad_norm);
    FedAvgRound r;
    try {
      r = dp_fedavg_round(result.server.x, problem, cfg, k);
    } catch (const DivergedLocalUpdateError& e) {
      result.diverged = true;
      result.error = e.what();
      result.records.push_back(rec);
      return result;
    }
    rec.participants = r.participants;
    rec.v_hat_norm = r.payload_norm;
    rec.step_norm = r.step_norm;
    rec.degenerate = r.degenerate;
    result.server.x = r.x_next;
    result.server.round = k + 1;
    result.records.push_back(rec);
  }
  return result;
}

}  // namespace fednormec
