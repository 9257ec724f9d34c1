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

#ifndef FEDNORMEC_LOCAL_OPS_HPP_
#define FEDNORMEC_LOCAL_OPS_HPP_

#include <vector>

#include "fednormec/problems.hpp"
#include "fednormec/vec.hpp"

namespace fednormec {

enum class LocalMode { kGd, kIg };

// Local fixed-point operator T_i. GD runs `steps` inner gradient steps of
// size gamma/steps on f_i; IG runs one cyclic pass over the N components in
// stored index order (the fixed permutation), step size gamma/N.
struct LocalOpConfig {
  LocalMode mode = LocalMode::kGd;
  int steps = 1;  // T; ignored by IG, which always takes N steps
  double gamma = 0.0;
};

// Inner iterates x^{.,0} = x, ..., x^{.,T}; recorded on request so property
// suites can evaluate the recursion bounds without re-deriving them.
struct LocalTrace {
  std::vector<Vec> iterates;
};

// T inner steps  x <- x - (gamma/T) grad f_i(x); returns the final iterate,
// equivalently x - (gamma/T) * (sum of the T inner gradients). T = 1 is
// exactly x - gamma * grad f_i(x). Throws DivergedLocalUpdateError when an
// inner iterate goes non-finite.
Vec local_gd(const ClientProblem& client, const Vec& x, int steps,
             double gamma, LocalTrace* trace = nullptr);

// Cyclic incremental pass: x <- x - (gamma/N) grad f_{i,j}(x) for
// j = 0..N-1 in stored order.
Vec local_ig(const ClientProblem& client, const Vec& x, double gamma,
             LocalTrace* trace = nullptr);

Vec apply_local_op(const ClientProblem& client, const Vec& x,
                   const LocalOpConfig& cfg, LocalTrace* trace = nullptr);

// Rescaled model update (x - T_i(x)) / gamma; with one GD step this equals
// grad f_i(x) exactly.
Vec residual_to_update(const Vec& x, const Vec& tx, double gamma);

}  // namespace fednormec

#endif  // FEDNORMEC_LOCAL_OPS_HPP_
