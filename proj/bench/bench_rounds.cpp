// Copyright 2026 The commsim Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// =============================================================================
// Serial vs OpenMP rounds of the accelerated loop and a single DIANA round.

#include <benchmark/benchmark.h>

#include "commsim/algorithms.hpp"
#include "commsim/problems.hpp"

namespace {

using namespace commsim;

void BM_AdianaRound(benchmark::State& state) {
  const auto ex = static_cast<Execution>(state.range(0));
  const auto d = static_cast<std::size_t>(state.range(1));
  const auto p = gen_constructed_quadratic(1.0, 1e4, d, 400);
  const auto spec = CompressorSpec::random_s(d, 1);
  const auto sched = AdianaSchedule::strongly_convex(1e4, 1.0, 400, spec.omega());
  const Compressor comp(spec, 1);
  AdianaState s = AdianaState::initial(*p, ShiftInit::kZero);
  AdianaWorkspace ws;
  for (auto _ : state) {
    benchmark::DoNotOptimize(adiana_round(s, *p, comp, sched, ex, ws));
  }
  state.SetLabel(to_string(ex));
}
BENCHMARK(BM_AdianaRound)
    ->ArgsProduct({{static_cast<int>(Execution::kSerial), static_cast<int>(Execution::kOpenMP)},
                   {20, 200}});

void BM_AdianaRun(benchmark::State& state) {
  const auto ex = static_cast<Execution>(state.range(0));
  LeastSquaresSpec ls;
  const auto p = gen_least_squares(ls);
  const auto spec = CompressorSpec::random_s(20, 1);
  const auto sched = AdianaSchedule::strongly_convex(p->smoothness(), p->strong_convexity(),
                                                     p->workers(), spec.omega());
  RunOptions o;
  o.rounds = 200;
  o.execution = ex;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_adiana(*p, spec, sched, o).points().size());
  }
  state.SetLabel(to_string(ex));
}
BENCHMARK(BM_AdianaRun)
    ->Arg(static_cast<int>(Execution::kSerial))
    ->Arg(static_cast<int>(Execution::kOpenMP))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
