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

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "fednormec/errors.hpp"
#include "fednormec/theory.hpp"

namespace fednormec {

MemoryInitStrategy memory_init_from_name(const std::string& name) {
  if (name == "zero") return MemoryInitStrategy::kZero;
  if (name == "exact-residual") return MemoryInitStrategy::kExactResidual;
  if (name == "residual-plus-offset")
    return MemoryInitStrategy::kResidualPlusOffset;
  throw InvalidInputError("unknown memory init strategy: " + name);
}

std::string memory_init_name(MemoryInitStrategy s) {
  switch (s) {
    case MemoryInitStrategy::kZero:
      return "zero";
    case MemoryInitStrategy::kExactResidual:
      return "exact-residual";
    case MemoryInitStrategy::kResidualPlusOffset:
      return "residual-plus-offset";
  }
  return "unknown";
}

void validate_run_config(const RunConfig& cfg) {
  if (!(cfg.gamma > 0.0) || !std::isfinite(cfg.gamma)) {
    throw ConfigError("gamma", "must be finite and > 0");
  }
  if (!(cfg.beta > 0.0) || !std::isfinite(cfg.beta)) {
    throw ConfigError("beta", "must be finite and > 0");
  }
  if (!(cfg.eta > 0.0) || !std::isfinite(cfg.eta)) {
    throw ConfigError("eta", "must be finite and > 0");
  }
  if (!(cfg.alpha >= 0.0) || !std::isfinite(cfg.alpha)) {
    throw ConfigError("alpha", "must be finite and >= 0");
  }
  if (!(cfg.participation > 0.0) || cfg.participation > 1.0) {
    throw ConfigError("p", "must be in (0, 1]");
  }
  if (!(cfg.sigma_dp >= 0.0) || !std::isfinite(cfg.sigma_dp)) {
    throw ConfigError("sigma_dp", "must be finite and >= 0");
  }
  if (cfg.rounds < 0) {
    throw ConfigError("rounds", "must be >= 0");
  }
  if (cfg.local_steps < 1) {
    throw ConfigError("local.steps", "must be >= 1");
  }
  if (!(cfg.degenerate_tol > 0.0)) {
    throw ConfigError("degenerate_tol", "must be > 0");
  }
  if (cfg.init == MemoryInitStrategy::kResidualPlusOffset &&
      (!std::isfinite(cfg.init_offset) || cfg.init_offset < 0.0)) {
    throw ConfigError("init.offset", "must be finite and >= 0");
  }
}

Participation sample_participation(std::uint64_t seed, int round, double p,
                                   int clients) {
  if (!(p > 0.0) || p > 1.0) {
    throw InvalidInputError("participation probability must be in (0, 1]");
  }
  Participation out;
  out.mask.resize(clients, 0);
  out.weights.resize(clients, 0.0);
  for (int i = 0; i < clients; ++i) {
    RngStream stream(seed, static_cast<std::uint64_t>(round),
                     static_cast<std::uint64_t>(i),
                     StreamPurpose::kParticipation);
    if (stream.uniform() < p) {
      out.mask[i] = 1;
      out.weights[i] = 1.0 / p;
      ++out.count;
    }
  }
  return out;
}

std::vector<Vec> init_memories(const FederationProblem& problem, const Vec& x0,
                               const LocalOpConfig& op,
                               MemoryInitStrategy strategy, double offset) {
  const int m = problem.num_clients();
  std::vector<Vec> memories;
  memories.reserve(m);
  for (int i = 0; i < m; ++i) {
    switch (strategy) {
      case MemoryInitStrategy::kZero:
        memories.push_back(Vec::Zero(problem.dim()));
        break;
      case MemoryInitStrategy::kExactResidual:
      case MemoryInitStrategy::kResidualPlusOffset: {
        const Vec tx = apply_local_op(problem.client(i), x0, op);
        Vec v = residual_to_update(x0, tx, op.gamma);
        if (strategy == MemoryInitStrategy::kResidualPlusOffset) {
          v[0] += offset;
        }
        memories.push_back(std::move(v));
        break;
      }
    }
  }
  return memories;
}

ServerState init_server(const Vec& x0, const std::vector<Vec>& memories) {
  ServerState server;
  server.x = x0;
  server.v_hat = Vec::Zero(x0.size());
  for (const auto& v : memories) {
    server.v_hat += v;
  }
  server.v_hat /= static_cast<double>(memories.size());
  server.round = 0;
  return server;
}

ClientRoundResult client_round(ClientState& state, const ClientProblem& client,
                               const Vec& x, const RunConfig& cfg) {
  const Vec tx = apply_local_op(client, x, cfg.local_op());
  const Vec residual = residual_to_update(x, tx, cfg.gamma);
  ClientRoundResult out;
  out.memory_gap = (state.memory - residual).norm();
  out.delta = smoothed_normalize(residual - state.memory, cfg.alpha);
  state.memory += cfg.beta * out.delta;
  return out;
}

Vec transmit(const Vec& delta, double weight, bool dp_enabled, double sigma_dp,
             RngStream& noise_stream) {
  if (weight == 0.0) {
    return Vec::Zero(delta.size());
  }
  if (dp_enabled && sigma_dp > 0.0) {
    const Vec z =
        gaussian_vector(noise_stream, static_cast<int>(delta.size()), sigma_dp);
    return weight * (delta + z);
  }
  return weight * delta;
}

void server_aggregate(ServerState& server, const std::vector<Vec>& transmitted,
                      double beta, int clients) {
  Vec sum = Vec::Zero(server.v_hat.size());
  for (const auto& t : transmitted) {
    sum += t;
  }
  server.v_hat += (beta / static_cast<double>(clients)) * sum;
}

StepResult server_step(ServerState& server, double eta, bool normalize,
                       double tol) {
  StepResult out;
  if (normalize) {
    const double n = server.v_hat.norm();
    if (n < tol) {
      out.degenerate = true;
      out.step_norm = 0.0;
      server.round += 1;
      return out;
    }
    server.x -= (eta / n) * server.v_hat;
    out.step_norm = eta;
  } else {
    server.x -= eta * server.v_hat;
    out.step_norm = eta * server.v_hat.norm();
  }
  server.round += 1;
  return out;
}

RunResult run_training(const FederationProblem& problem, const RunConfig& cfg) {
  validate_run_config(cfg);
  const int m = problem.num_clients();
  const Vec x0 = cfg.x0.size() > 0 ? cfg.x0 : Vec(Vec::Zero(problem.dim()));
  if (x0.size() != problem.dim()) {
    throw ConfigError("x0", "dimension mismatch with the problem");
  }

  std::vector<Vec> memories;
  try {
    memories =
        init_memories(problem, x0, cfg.local_op(), cfg.init, cfg.init_offset);
  } catch (const DivergedLocalUpdateError& e) {
    RunResult failed;
    failed.diverged = true;
    failed.error = std::string("during memory init: ") + e.what();
    failed.server.x = x0;
    failed.server.v_hat = Vec::Zero(problem.dim());
    return failed;
  }

  if (cfg.theory_check) {
    const double r0 = compute_R(memories, problem, x0, cfg.local_op());
    if (!(cfg.beta / (cfg.alpha + r0) < 1.0)) {
      throw ConfigError("beta", "theory mode: beta/(alpha+R0) must be < 1");
    }
    const EtaMax em =
        eta_max(problem.smoothness(), problem.delta_inf(), cfg.beta, cfg.alpha,
                r0, cfg.gamma, cfg.rounds, cfg.local_mode, cfg.local_steps);
    if (cfg.eta > em.value) {
      throw ConfigError("eta", "theory mode: eta exceeds eta_max = " +
                                   std::to_string(em.value));
    }
  }

  RunResult result;
  result.clients.resize(m);
  for (int i = 0; i < m; ++i) {
    result.clients[i] = ClientState{memories[i], i};
  }
  result.server = init_server(x0, memories);
  result.min_grad_norm = std::numeric_limits<double>::infinity();
  result.records.reserve(cfg.rounds + 1);

  std::vector<Vec> transmitted(m);
  std::vector<Vec> deltas(m);
  for (int k = 0; k <= cfg.rounds; ++k) {
    RoundRecord rec;
    rec.round = k;
    rec.f_value = problem.value(result.server.x);
    rec.grad_norm = problem.gradient(result.server.x).norm();
    result.min_grad_norm = std::min(result.min_grad_norm, rec.grad_norm);

    const Participation part =
        sample_participation(cfg.seed, k, cfg.participation, m);
    rec.participants = part.count;

    double max_gap = 0.0;
    try {
      for (int i = 0; i < m; ++i) {
        ClientRoundResult cr =
            client_round(result.clients[i], problem.client(i), result.server.x,
                         cfg);
        max_gap = std::max(max_gap, cr.memory_gap);
        deltas[i] = std::move(cr.delta);
      }
    } catch (const DivergedLocalUpdateError& e) {
      result.diverged = true;
      result.error = e.what();
      rec.memory_gap = max_gap;
      result.records.push_back(rec);
      return result;
    }
    rec.memory_gap = max_gap;

    for (int i = 0; i < m; ++i) {
      if (part.mask[i]) {
        RngStream noise(cfg.seed, static_cast<std::uint64_t>(k),
                        static_cast<std::uint64_t>(i), StreamPurpose::kDpNoise);
        transmitted[i] = transmit(deltas[i], part.weights[i], cfg.dp_enabled,
                                  cfg.sigma_dp, noise);
      } else {
        transmitted[i] = Vec::Zero(problem.dim());
      }
    }

    server_aggregate(result.server, transmitted, cfg.beta, m);
    rec.v_hat_norm = result.server.v_hat.norm();
    const StepResult step = server_step(result.server, cfg.eta,
                                        cfg.server_normalize,
                                        cfg.degenerate_tol);
    rec.step_norm = step.step_norm;
    rec.degenerate = step.degenerate;
    result.records.push_back(rec);
  }
  return result;
}

}  // namespace fednormec
