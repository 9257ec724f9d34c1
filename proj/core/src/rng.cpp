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

#include "fednormec/rng.hpp"

#include <cmath>
#include <numbers>

#include "fednormec/errors.hpp"

namespace fednormec {

namespace {

// SplitMix64 finalizer; mixes one 64-bit word into the running key.
std::uint64_t mix(std::uint64_t state, std::uint64_t word) {
  std::uint64_t z = state + word + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t round,
                     std::uint64_t client, StreamPurpose purpose) {
  std::uint64_t key = mix(0x243f6a8885a308d3ULL, seed);
  key = mix(key, round);
  key = mix(key, client);
  key = mix(key, static_cast<std::uint64_t>(purpose));
  engine_.seed(key);
}

std::uint64_t RngStream::next_u64() { return engine_(); }

double RngStream::uniform() {
  // 53 random bits; uniform on [0, 1).
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller; u1 shifted into (0, 1] so the log is finite.
  const double u1 =
      (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

Vec gaussian_vector(RngStream& stream, int d, double sigma) {
  if (d <= 0) {
    throw InvalidInputError("gaussian_vector: dimension must be positive");
  }
  if (!std::isfinite(sigma) || sigma < 0.0) {
    throw InvalidInputError("gaussian_vector: sigma must be finite and >= 0");
  }
  if (sigma == 0.0) {
    return Vec::Zero(d);
  }
  Vec out(d);
  for (int j = 0; j < d; ++j) {
    out[j] = sigma * stream.gaussian();
  }
  return out;
}

}  // namespace fednormec
