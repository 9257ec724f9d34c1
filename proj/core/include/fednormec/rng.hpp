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

#ifndef FEDNORMEC_RNG_HPP_
#define FEDNORMEC_RNG_HPP_

#include <cstdint>
#include <random>

#include "fednormec/vec.hpp"

namespace fednormec {

// What a stream is consumed for. Part of the derivation path so that the
// participation coin, the DP noise and the data generator of one
// (round, client) pair never share draws.
enum class StreamPurpose : std::uint64_t {
  kParticipation = 1,
  kDpNoise = 2,
  kDataGen = 3,
};

// Deterministic random stream keyed by (seed, round, client, purpose).
//
// The same key always yields the same draw sequence, independent of the order
// in which streams are created or consumed, so client evaluations may run in
// any order (or in parallel) without changing results. Gaussians come from an
// explicit Box-Muller transform over mt19937_64: both pieces are fully
// specified, so sequences are reproducible across standard libraries.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t round, std::uint64_t client,
            StreamPurpose purpose);

  // Uniform double in [0, 1).
  double uniform();

  // Standard normal draw.
  double gaussian();

  std::uint64_t next_u64();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Vector with i.i.d. N(0, sigma^2) entries. sigma = 0 yields the zero vector
// without consuming draws. Throws InvalidInputError for d <= 0 or sigma < 0.
Vec gaussian_vector(RngStream& stream, int d, double sigma);

}  // namespace fednormec

#endif  // FEDNORMEC_RNG_HPP_
