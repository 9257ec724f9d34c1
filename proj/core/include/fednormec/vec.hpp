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

#ifndef FEDNORMEC_VEC_HPP_
#define FEDNORMEC_VEC_HPP_

#include <Eigen/Core>

namespace fednormec {

// Dense model-coordinate vector. All entries must stay finite; every vector
// in a run shares one dimension d.
using Vec = Eigen::VectorXd;

bool is_finite(const Vec& v);

// Euclidean norm. Zero iff v is the zero vector.
double norm(const Vec& v);

// Smoothed normalization  v -> v / (alpha + ||v||),  alpha >= 0.
//
// Maps the zero vector to itself (also at alpha = 0, where the raw formula is
// 0/0; the limit of the alpha > 0 case). The result always has norm <= 1,
// strictly < 1 when alpha > 0, and is a nonnegative multiple of v.
// Throws InvalidInputError on non-finite entries or alpha < 0.
Vec smoothed_normalize(const Vec& v, double alpha);

}  // namespace fednormec

#endif  // FEDNORMEC_VEC_HPP_
