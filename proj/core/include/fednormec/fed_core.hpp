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

#ifndef FEDNORMEC_FED_CORE_HPP_
#define FEDNORMEC_FED_CORE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "fednormec/local_ops.hpp"
#include "fednormec/problems.hpp"
#include "fednormec/rng.hpp"
#include "fednormec/vec.hpp"

namespace fednormec {

// EF21 memory v_i. Updated every round for every client; participation only
// gates what gets transmitted.
struct ClientState {
  Vec memory;
  int id = 0;
};

// Global iterate x^k and aggregated memory v_hat^k. v_hat^0 must equal the
// client-memory mean; init_server enforces it.
struct ServerState {
  Vec x;
  Vec v_hat;
  int round = 0;
};

enum class MemoryInitStrategy {
  kZero,            // v_i^0 = 0
  kExactResidual,   // v_i^0 = (x^0 - T_i(x^0)) / gamma, so R_0 = 0
  kResidualPlusOffset,  // residual + (D, 0, ..., 0), so R_0 = D
};

MemoryInitStrategy memory_init_from_name(const std::string& name);
std::string memory_init_name(MemoryInitStrategy s);

struct RunConfig {
  double gamma = 0.5;
  double beta = 0.1;
  double eta = 0.01;
  double alpha = 0.01;
  double participation = 1.0;  // p
  double sigma_dp = 0.0;
  int rounds = 0;  // K; the loop runs k = 0..K, so K = 0 is one round
  LocalMode local_mode = LocalMode::kGd;
  int local_steps = 1;  // T
  bool dp_enabled = false;
  bool server_normalize = true;
  std::uint64_t seed = 0;
  double degenerate_tol = 1e-12;
  // Opt-in validation of the convergence theorem's stepsize conditions at
  // startup; off by default so tuned runs stay expressible.
  bool theory_check = false;
  MemoryInitStrategy init = MemoryInitStrategy::kExactResidual;
  double init_offset = 0.0;  // D for kResidualPlusOffset
  Vec x0;                    // empty -> zeros(d)

  LocalOpConfig local_op() const { return {local_mode, local_steps, gamma}; }
};

// Throws ConfigError naming the offending field.
void validate_run_config(const RunConfig& cfg);

// One row per round k, measured at the iterate x^k before the server step.
struct RoundRecord {
  int round = 0;
  double f_value = 0.0;
  double grad_norm = 0.0;
  // R_k = max_i || v_i^k - (x^k - T_i(x^k)) / gamma ||, pre-update memories.
  double memory_gap = 0.0;
  int participants = 0;
  double v_hat_norm = 0.0;  // || v_hat^{k+1} ||, the vector used for the step
  double step_norm = 0.0;
  bool degenerate = false;
};

struct Participation {
  std::vector<std::uint8_t> mask;
  std::vector<double> weights;  // q_i = 1/p if sampled else 0
  int count = 0;
};

// Each client joins independently with probability p; q_i = 1/p makes the
// aggregate unbiased. p = 1 samples everyone.
Participation sample_participation(std::uint64_t seed, int round, double p,
                                   int clients);

std::vector<Vec> init_memories(const FederationProblem& problem, const Vec& x0,
                               const LocalOpConfig& op,
                               MemoryInitStrategy strategy, double offset);

// v_hat^0 = (1/M) sum_i v_i^0.
ServerState init_server(const Vec& x0, const std::vector<Vec>& memories);

struct ClientRoundResult {
  Vec delta;          // Norm_alpha((x - T_i(x))/gamma - v_i); norm <= 1
  double memory_gap;  // || v_i - residual || before the memory update
};

// Lines 5-7 of the round: local update, normalized innovation, memory update
// v_i <- v_i + beta * delta. Runs for every client whether or not it
// transmits this round.
ClientRoundResult client_round(ClientState& state, const ClientProblem& client,
                               const Vec& x, const RunConfig& cfg);

// What the wire carries: q * delta, or q * (delta + z) with
// z ~ N(0, sigma_dp^2 I) in the private setting. weight = 0 means the client
// is silent: a zero vector, and no noise is drawn.
Vec transmit(const Vec& delta, double weight, bool dp_enabled, double sigma_dp,
             RngStream& noise_stream);

// v_hat <- v_hat + (beta/M) sum over all M slots (silent clients contribute
// zero vectors).
void server_aggregate(ServerState& server, const std::vector<Vec>& transmitted,
                      double beta, int clients);

struct StepResult {
  double step_norm = 0.0;
  bool degenerate = false;
};

// Normalized step of exact length eta along -v_hat; if ||v_hat|| < tol the
// step is skipped and the round flagged degenerate instead of dividing.
// normalize = false takes the plain step x - eta * v_hat.
StepResult server_step(ServerState& server, double eta, bool normalize,
                       double tol);

struct RunResult {
  std::vector<RoundRecord> records;
  std::vector<ClientState> clients;
  ServerState server;
  double min_grad_norm = 0.0;
  bool diverged = false;
  std::string error;
};

// The full training loop, K+1 rounds, deterministic given cfg.seed. A
// diverged local update stops the loop; the partial trajectory is returned
// with the diverged flag set.
RunResult run_training(const FederationProblem& problem, const RunConfig& cfg);

}  // namespace fednormec

#endif  // FEDNORMEC_FED_CORE_HPP_
