// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The fimopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "fim/gradient.hpp"
#include "fim/pgm.hpp"
#include "fim/scenario.hpp"

namespace {

using namespace fim;

struct Fixture {
  FimProblem problem;
  Eigen::VectorXd y;
};

Fixture make(int side, int users) {
  ScenarioConfig sc = ScenarioConfig::reference();
  sc.n_x = sc.n_z = side;
  sc.users = users;
  Rng rng = make_rng(1, 0);
  Fixture f{make_problem(sc, drop_users(sc, rng)), random_start(side * side, sc.morphing_range, 1, 0)};
  return f;
}

void BM_SumSe(benchmark::State& state) {
  const Fixture f = make(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(sum_se_value(f.problem, f.y));
}
BENCHMARK(BM_SumSe)->Args({4, 4})->Args({6, 4})->Args({8, 4})->Args({8, 8})->Unit(benchmark::kMicrosecond);

void BM_GradientAggregated(benchmark::State& state) {
  const Fixture f = make(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(sum_se_gradient(f.problem, f.y));
}
BENCHMARK(BM_GradientAggregated)->Args({4, 4})->Args({6, 4})->Args({8, 4})->Args({8, 8})->Unit(benchmark::kMicrosecond);

// Term-by-term path through the per-user C/D/E matrices.
void BM_GradientWorkspace(benchmark::State& state) {
  const Fixture f = make(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) {
    const GradientWorkspace ws = build_workspace(f.problem, f.y);
    benchmark::DoNotOptimize(grad_sum_se(ws, f.y));
  }
}
BENCHMARK(BM_GradientWorkspace)->Args({4, 4})->Args({6, 4})->Args({8, 4})->Unit(benchmark::kMicrosecond);

void BM_PgmRun(benchmark::State& state) {
  const Fixture f = make(static_cast<int>(state.range(0)), 4);
  PgmConfig cfg = PgmConfig::defaults_for(f.problem.array.wavelength);
  cfg.history_stride = 0;
  const auto obj = make_objective(f.problem);
  int iterations = 0;
  for (auto _ : state) {
    const PgmResult r = optimize(obj, f.y, f.problem.array.morphing_range, cfg);
    iterations = r.trajectory.iterations();
    benchmark::DoNotOptimize(r.objective);
  }
  state.counters["iterations"] = iterations;
}
BENCHMARK(BM_PgmRun)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
