// Copyright 2026 The uavsec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <complex>
#include <numbers>

#include "uavsec/beamforming.hpp"
#include "uavsec/coalition.hpp"
#include "uavsec/harness.hpp"
#include "uavsec/matching.hpp"

namespace {

using namespace uavsec;

struct Layout {
    Scenario scenario;
    ChannelSet channels;
    PreferenceTables prefs;
};

Layout default_layout(std::uint64_t seed) {
    Scenario sc = sample_scenario(DeploymentConfig{}, mix_seed(seed, 1));
    ChannelSet ch = realize_channels(sc, mix_seed(seed, 2));
    PreferenceTables prefs = build_preferences(sc, ch);
    return {std::move(sc), std::move(ch), std::move(prefs)};
}

void BM_null_steering(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const int s = static_cast<int>(state.range(1));
    Rng rng(7);
    auto entry = [&] { return std::polar(rng.uniform(0.1, 1.0), 2.0 * std::numbers::pi * rng.uniform()); };
    BeamformingProblem p;
    p.power_budget = 1e-2;
    p.to_receiver.resize(n);
    p.to_eavesdroppers.resize(n, s);
    for (int r = 0; r < n; ++r) {
        p.to_receiver(r) = entry();
        for (int c = 0; c < s; ++c) p.to_eavesdroppers(r, c) = entry();
    }
    for (auto _ : state) benchmark::DoNotOptimize(null_steering_weights(p));
}
BENCHMARK(BM_null_steering)->Args({3, 2})->Args({8, 2})->Args({12, 4});

void BM_proposed_matching(benchmark::State& state) {
    const Layout l = default_layout(3);
    for (auto _ : state) benchmark::DoNotOptimize(proposed_matching(l.prefs, l.scenario));
}
BENCHMARK(BM_proposed_matching);

void BM_ocf_iterate(benchmark::State& state) {
    const Layout l = default_layout(3);
    const Matching m = proposed_matching(l.prefs, l.scenario);
    for (auto _ : state) {
        // A fresh game each time so the utility cache starts cold.
        const CoalitionGame game(l.channels, l.scenario.params, m.assignment());
        benchmark::DoNotOptimize(ocf_iterate(initialize_structure(game), game, {1}));
    }
}
BENCHMARK(BM_ocf_iterate)->Unit(benchmark::kMillisecond);

void BM_run_trial(benchmark::State& state) {
    const ExperimentConfig config;
    int trial = 0;
    for (auto _ : state) benchmark::DoNotOptimize(run_trial(config, 0, trial++ % 100));
}
BENCHMARK(BM_run_trial)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
