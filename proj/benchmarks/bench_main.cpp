// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "tailrca/correlation_rca.hpp"
#include "tailrca/engine.hpp"
#include "tailrca/rng.hpp"
#include "tailrca/simulator.hpp"
#include "tailrca/spike_detection.hpp"

using namespace tailrca;

namespace {

std::vector<double> random_values(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> out(n);
    for (double& v : out) v = rng.normal();
    return out;
}

MetricSeries random_series(std::size_t n, std::uint64_t seed) {
    MetricSeries s;
    s.id = MetricId::NcclLatency;
    s.grid_hz = 100;
    s.values = random_values(n, seed);
    return s;
}

Scenario nic_scenario() {
    Scenario s;
    s.workload.seed = 7;
    Disturbance d;
    d.kind = DisturbanceKind::D3_NIC;
    d.onset_s = 40.0;
    d.duration_s = 10.0;
    d.magnitude_sigma = 6.0;
    d.latency_lag_ms = 80.0;
    s.disturbance = d;
    return s;
}

void BM_LaggedXcorr(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto target = random_values(n, 1);
    const auto metric = random_values(n, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(lagged_xcorr(target, metric, 20));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n) * 41);
}
BENCHMARK(BM_LaggedXcorr)->Arg(500)->Arg(2000);

void BM_SpikeScore(benchmark::State& state) {
    const auto series = random_series(500, 3);
    BaselineStats stats;
    stats.mu = 0.0;
    stats.sigma = 1.0;
    const TimeInterval window{0, 5'000'000'000LL};
    for (auto _ : state) {
        benchmark::DoNotOptimize(spike_score(series, stats, window, 3.0));
    }
}
BENCHMARK(BM_SpikeScore);

void BM_Baseline(benchmark::State& state) {
    const auto series = random_series(3000, 4);
    const TimeInterval window{0, 30'000'000'000LL};
    for (auto _ : state) {
        benchmark::DoNotOptimize(baseline(series, window));
    }
}
BENCHMARK(BM_Baseline);

void BM_Align35s(benchmark::State& state) {
    const auto series = generate(nic_scenario());
    SampleStreams streams;
    for (const auto& [id, s] : series) streams.emplace(id, s.to_samples());
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            align(streams, {10'000'000'000LL, 45'000'000'000LL}));
    }
}
BENCHMARK(BM_Align35s);

void BM_Generate60s(benchmark::State& state) {
    const Scenario scenario = nic_scenario();
    for (auto _ : state) {
        benchmark::DoNotOptimize(generate(scenario));
    }
}
BENCHMARK(BM_Generate60s);

void BM_FullTrial(benchmark::State& state) {
    const Scenario scenario = nic_scenario();
    const EngineParams params;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_trial(scenario, params));
    }
}
BENCHMARK(BM_FullTrial);

}  // namespace

BENCHMARK_MAIN();
