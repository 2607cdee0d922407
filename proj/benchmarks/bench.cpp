#include <benchmark/benchmark.h>

#include <random>

#include "flowanon/eval.hpp"
#include "flowanon/synth.hpp"

using namespace flowanon;

namespace {

const AnonScheme kBenchSchemes[] = {
    AnonScheme{Blackmarking{}},
    AnonScheme{Truncation{16}},
    AnonScheme{RandomPermutation{7}},
    AnonScheme{PartialPrefixPermutation{16, 7}},
    AnonScheme{PrefixPermutation{{0x9E3779B97F4A7C15ULL, 0xBF58476D1CE4E5B9ULL}}},
};

Trace bench_trace() {
    SynthConfig cfg;
    cfg.seed = 1;
    cfg.num_intervals = 96;
    cfg.base_flows_per_interval = 2000;
    return generate(cfg).first;
}

void BM_AnonymizeAddress(benchmark::State& state) {
    const AnonScheme& scheme = kBenchSchemes[state.range(0)];
    std::mt19937_64 gen(1);
    std::vector<uint32_t> addrs(4096);
    for (auto& a : addrs) a = static_cast<uint32_t>(gen());
    size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(anonymize_address(scheme, addrs[i++ & 4095]));
    }
    state.SetLabel(format_scheme(scheme));
}
BENCHMARK(BM_AnonymizeAddress)->DenseRange(0, 4);

void BM_AnonymizeTrace(benchmark::State& state) {
    const AnonScheme& scheme = kBenchSchemes[state.range(0)];
    Trace t = bench_trace();
    for (auto _ : state) {
        benchmark::DoNotOptimize(anonymize_trace(scheme, t));
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<int64_t>(t.records.size()));
    state.SetLabel(format_scheme(scheme));
}
BENCHMARK(BM_AnonymizeTrace)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

void BM_ComputeMetrics(benchmark::State& state) {
    Trace t = bench_trace();
    auto catalog = full_catalog();
    for (auto _ : state) {
        benchmark::DoNotOptimize(compute_metrics(t, catalog));
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<int64_t>(t.records.size()));
}
BENCHMARK(BM_ComputeMetrics)->Unit(benchmark::kMillisecond);

void BM_KalmanFilter(benchmark::State& state) {
    std::mt19937_64 gen(2);
    std::normal_distribution<double> noise(0.0, 1.0);
    TimeSeries ts;
    double x = 0.0;
    for (int i = 0; i < 2016; ++i) {
        x = 0.6 * x + noise(gen);
        ts.values.push_back(100.0 + x);
    }
    auto params = calibrate(ts.values, 96);
    for (auto _ : state) {
        benchmark::DoNotOptimize(filter(ts, params));
    }
}
BENCHMARK(BM_KalmanFilter);

void BM_AucPchip(benchmark::State& state) {
    std::vector<RocPoint> pts;
    pts.push_back({0.0, 0.0, 0.0});
    for (int i = 1; i < 12; ++i) {
        double f = static_cast<double>(i) / 12.0;
        pts.push_back({2.4 - 0.2 * i, f, std::sqrt(f)});
    }
    pts.push_back({0.0, 1.0, 1.0});
    for (auto _ : state) {
        benchmark::DoNotOptimize(auc_pchip(pts));
    }
}
BENCHMARK(BM_AucPchip);

}  // namespace

BENCHMARK_MAIN();
