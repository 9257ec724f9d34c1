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

#include "fednormec/vec.hpp"

#include <cmath>

#include "fednormec/errors.hpp"

namespace fednormec {

bool is_finite(const Vec& v) { return v.allFinite(); }

double norm(const Vec& v) { return v.norm(); }

Vec smoothed_normalize(const Vec& v, double alpha) {
  if (!std::isfinite(alpha) || alpha < 0.0) {
    throw InvalidInputError("smoothed_normalize: alpha must be finite and >= 0");
  }
  if (!v.allFinite()) {
    throw InvalidInputError("smoothed_normalize: non-finite input entries");
  }
  const double n = v.norm();
  if (n == 0.0) {
    return Vec::Zero(v.size());
  }
  return v / (alpha + n);
}

}  // namespace fednormec
