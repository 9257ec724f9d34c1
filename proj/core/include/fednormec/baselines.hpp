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

#ifndef FEDNORMEC_BASELINES_HPP_
#define FEDNORMEC_BASELINES_HPP_

#include <cstdint>

#include "fednormec/fed_core.hpp"
#include "fednormec/problems.hpp"

namespace fednormec {

// DP-FedAvg with smoothed normalization: the no-error-feedback comparison
// method. The bounding operator acts on the raw model update x - T_i(x)
// (not rescaled by gamma), and the server averages over the realized
// participant count B.
struct FedAvgConfig {
  double eta = 0.01;
  double gamma = 0.5;
  double alpha = 0.01;  // normalization parameter of the bounding operator
  double participation = 1.0;
  double sigma_dp = 0.0;
  LocalMode local_mode = LocalMode::kGd;
  int local_steps = 1;
  bool dp_enabled = false;
  std::uint64_t seed = 0;
  int rounds = 0;
  Vec x0;

  LocalOpConfig local_op() const { return {local_mode, local_steps, gamma}; }
};

struct FedAvgRound {
  Vec x_next;
  int participants = 0;
  double payload_norm = 0.0;  // || (1/B) sum (Norm(update) + noise) ||
  double step_norm = 0.0;
  bool degenerate = false;  // empty participant set; update skipped
};

//   x' = x - (eta/B) [ sum_{i in S} Norm_alpha(x - T_i(x)) + z_i ]
// with B = |S|; noise is drawn only for participants in the private setting.
// An empty S (probability (1-p)^M) skips the update and flags the round.
FedAvgRound dp_fedavg_round(const Vec& x, const FederationProblem& problem,
                            const FedAvgConfig& cfg, int round);

// Full loop, K+1 rounds, same record schema as the main algorithm
// (memory_gap is 0: there are no memories to track).
RunResult run_fedavg(const FederationProblem& problem, const FedAvgConfig& cfg);

}  // namespace fednormec

#endif  // FEDNORMEC_BASELINES_HPP_
