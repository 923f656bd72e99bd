// Copyright 2026 The hcsim Authors.
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

#include <benchmark/benchmark.h>

#include "hcsim/simulator.hpp"

using namespace hcsim;

namespace {

TraceConfig bench_trace(std::int64_t requests) {
  TraceConfig tc;
  tc.total_requests = static_cast<std::uint64_t>(requests);
  tc.seed = 1;
  return tc;
}

void BM_GenerateTrace(benchmark::State& state) {
  const TraceConfig tc = bench_trace(state.range(0));
  const Catalogue cat = build_catalogue(tc);
  for (auto _ : state) benchmark::DoNotOptimize(generate_trace(cat, tc));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateTrace)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_Policy(benchmark::State& state, PolicyKind kind) {
  SimConfig c;
  c.trace = bench_trace(state.range(0));
  c.policy = kind;
  const Trace trace = load_trace(c);
  for (auto _ : state) benchmark::DoNotOptimize(run(c, trace));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK_CAPTURE(BM_Policy, hgreedy, PolicyKind::HGreedy)->Arg(100'000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Policy, hgreedy_offline, PolicyKind::HGreedyOffline)->Arg(100'000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Policy, lru, PolicyKind::Lru)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_GetRank(benchmark::State& state) {
  double p = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(get_rank(p, 7.0, 3'000'000, 1.5));
    p += 1.0;
  }
}
BENCHMARK(BM_GetRank);

}  // namespace

BENCHMARK_MAIN();
