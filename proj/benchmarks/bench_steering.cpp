// Copyright 2026 The steerhier Authors
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

#include "steerhier/assemblage.hpp"
#include "steerhier/criteria.hpp"
#include "steerhier/split_state.hpp"

namespace {

void BM_SplitState(benchmark::State &st) {
    const int n = static_cast<int>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(steer::split_state(n, 0.3));
}
BENCHMARK(BM_SplitState)->Arg(10)->Arg(20)->Arg(40);

void BM_MeasureAlice(benchmark::State &st) {
    const auto state = steer::split_state(static_cast<int>(st.range(0)), 0.3);
    const steer::DirectionYZ dir(0.7);
    for (auto _ : st) benchmark::DoNotOptimize(steer::measure_alice(state, dir));
}
BENCHMARK(BM_MeasureAlice)->Arg(10)->Arg(20)->Arg(40);

void BM_ConditionalMoment(benchmark::State &st) {
    const auto state = steer::split_state(static_cast<int>(st.range(0)), 0.3);
    const auto asm_ = steer::measure_alice(state, steer::DirectionYZ(0.7));
    const int order = static_cast<int>(st.range(1));
    for (auto _ : st) benchmark::DoNotOptimize(steer::conditional_moment(asm_, order));
}
BENCHMARK(BM_ConditionalMoment)->Args({10, 1})->Args({10, 2})->Args({20, 2})->Args({20, 3});

void BM_Delta2(benchmark::State &st) {
    const auto state = steer::split_state(static_cast<int>(st.range(0)), 0.3);
    for (auto _ : st) benchmark::DoNotOptimize(steer::delta2(state, 2));
}
BENCHMARK(BM_Delta2)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
