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

#include <benchmark/benchmark.h>

#include "fednormec/fed_core.hpp"
#include "fednormec/local_ops.hpp"
#include "fednormec/problems.hpp"
#include "fednormec/rng.hpp"
#include "fednormec/vec.hpp"

namespace {

using namespace fednormec;

void BM_SmoothedNormalize(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  RngStream stream(1, 0, 0, StreamPurpose::kDataGen);
  Vec v(d);
  for (int j = 0; j < d; ++j) v[j] = stream.gaussian();
  for (auto _ : state) {
    benchmark::DoNotOptimize(smoothed_normalize(v, 0.01));
  }
}
BENCHMARK(BM_SmoothedNormalize)->Arg(50)->Arg(1000);

void BM_GaussianVector(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  RngStream stream(1, 0, 0, StreamPurpose::kDpNoise);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gaussian_vector(stream, d, 1.0));
  }
}
BENCHMARK(BM_GaussianVector)->Arg(50)->Arg(1000);

void BM_LocalGd(benchmark::State& state) {
  const auto problem =
      make_suite(SuiteSpec{SuiteFamily::kQuadraticHetero, 1, 4, 50, 1.0}, 3);
  const Vec x = Vec::Ones(problem.dim());
  const int steps = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(local_gd(problem.client(0), x, steps, 0.5));
  }
}
BENCHMARK(BM_LocalGd)->Arg(1)->Arg(8);

void BM_LocalIg(benchmark::State& state) {
  const auto problem =
      make_suite(SuiteSpec{SuiteFamily::kQuadraticHetero, 1, 8, 50, 1.0}, 3);
  const Vec x = Vec::Ones(problem.dim());
  for (auto _ : state) {
    benchmark::DoNotOptimize(local_ig(problem.client(0), x, 0.5));
  }
}
BENCHMARK(BM_LocalIg);

void BM_TrainingRound(benchmark::State& state) {
  const auto problem =
      make_suite(SuiteSpec{SuiteFamily::kQuadraticHetero, 20, 2, 50, 1.0}, 7);
  RunConfig cfg;
  cfg.gamma = 0.5 / problem.smoothness();
  cfg.beta = 0.2;
  cfg.alpha = 0.5;
  cfg.eta = 0.01;
  cfg.participation = 0.5;
  cfg.sigma_dp = 1.0;
  cfg.dp_enabled = true;
  cfg.rounds = static_cast<int>(state.range(0)) - 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_training(problem, cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 20);
}
BENCHMARK(BM_TrainingRound)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
