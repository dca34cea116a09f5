/*
 * Copyright 2026 The d2dcache Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <benchmark/benchmark.h>

#include "d2dcache/offload.hpp"
#include "d2dcache/optimizer.hpp"
#include "d2dcache/plsa.hpp"
#include "d2dcache/prefs.hpp"
#include "d2dcache/reference.hpp"
#include "d2dcache/sim.hpp"
#include "d2dcache/topology.hpp"

namespace {

using namespace d2dcache;

// one shared cell-scale world for all benchmarks
struct World {
    PreferenceModel model = synth_preferences(500, 100, 0.6, 0.4, 1);
    Topology topo =
        Topology::build(place_users(100, 500.0, 2), 500.0, 50.0);
    CachingMatrix cache = popularity_cache(model.p, topo, 5, 100);
    RequestLog requests = generate_requests(model, 50000, 3);
    plsa::Params params =
        plsa::fit(requests, 10, {.epsilon = 1e-3, .max_iter = 2}, 4);
};

const World& world() {
    static World w;
    return w;
}

void BM_OffloadProbability_Serial(benchmark::State& state) {
    const World& w = world();
    for (auto _ : state)
        benchmark::DoNotOptimize(
            ref::offloading_probability(w.model.Q, w.model.w, w.topo, w.cache));
}

void BM_OffloadProbability_Parallel(benchmark::State& state) {
    const World& w = world();
    for (auto _ : state)
        benchmark::DoNotOptimize(
            offloading_probability(w.model.Q, w.model.w, w.topo, w.cache));
}

void BM_AverageSimilarity_Serial(benchmark::State& state) {
    const World& w = world();
    for (auto _ : state)
        benchmark::DoNotOptimize(ref::average_similarity(w.model.Q));
}

void BM_AverageSimilarity_Parallel(benchmark::State& state) {
    const World& w = world();
    for (auto _ : state) benchmark::DoNotOptimize(average_similarity(w.model.Q));
}

void BM_EmIteration_Dense(benchmark::State& state) {
    const World& w = world();
    for (auto _ : state)
        benchmark::DoNotOptimize(ref::em_iteration(w.requests, w.params));
}

void BM_EmIteration_Fused(benchmark::State& state) {
    const World& w = world();
    for (auto _ : state)
        benchmark::DoNotOptimize(plsa::em_iteration(w.requests, w.params));
}

void BM_GreedyCache_Serial(benchmark::State& state) {
    const World& w = world();
    const std::size_t capacity = static_cast<std::size_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(
            ref::greedy_cache(w.model.Q, w.model.w, w.topo, capacity));
}

void BM_GreedyCache_Parallel(benchmark::State& state) {
    const World& w = world();
    const std::size_t capacity = static_cast<std::size_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(
            greedy_cache(w.model.Q, w.model.w, w.topo, capacity));
}

} // namespace

BENCHMARK(BM_OffloadProbability_Serial)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_OffloadProbability_Parallel)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_AverageSimilarity_Serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AverageSimilarity_Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EmIteration_Dense)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EmIteration_Fused)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GreedyCache_Serial)->Arg(1)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GreedyCache_Parallel)->Arg(1)->Arg(5)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
