#include "compcorr/comp_corr.hpp"
#include "compcorr/dataset.hpp"
#include "compcorr/pairs_engine.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace compcorr;

namespace {

std::vector<double> noise(std::mt19937_64& rng, std::size_t n)
{
    std::normal_distribution<double> d;
    std::vector<double> v(n);
    for (auto& x : v) {
        x = d(rng);
    }
    return v;
}

Dataset random_dataset(std::size_t count, std::size_t n)
{
    std::mt19937_64 rng(17);
    std::vector<TimeSeries> series;
    for (std::size_t i = 0; i < count; ++i) {
        series.emplace_back("s" + std::to_string(i), noise(rng, n));
    }
    return Dataset(std::move(series));
}

void BM_CountCompositions(benchmark::State& state)
{
    const CompositionSpec spec(static_cast<std::size_t>(state.range(0)), 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(count_compositions(spec));
    }
}
BENCHMARK(BM_CountCompositions)->Arg(23)->Arg(50)->Arg(90);

// One full pair scan: table build plus every composition.
void BM_ScanPair(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto m = static_cast<std::size_t>(state.range(1));
    std::mt19937_64 rng(1);
    const TimeSeries a("a", noise(rng, n));
    const TimeSeries b("b", noise(rng, n));
    const CompositionSpec spec(n, m);
    for (auto _ : state) {
        benchmark::DoNotOptimize(scan(a, b, spec));
    }
    state.counters["compositions/s"] = benchmark::Counter(
        static_cast<double>(count_compositions(spec)) * static_cast<double>(state.iterations()),
        benchmark::Counter::kIsRate);
}
BENCHMARK(BM_ScanPair)->Args({23, 4})->Args({23, 2})->Args({31, 2})->Unit(benchmark::kMicrosecond);

// Cross-term refill only, as done per pair in the all-pairs engine.
void BM_TableReset(benchmark::State& state)
{
    std::mt19937_64 rng(2);
    const SeriesProfile a(noise(rng, 23), 4);
    const SeriesProfile b(noise(rng, 23), 4);
    SegmentTable table;
    for (auto _ : state) {
        table.reset(a, b);
        benchmark::ClobberMemory();
    }
}
BENCHMARK(BM_TableReset);

void BM_AllPairs(benchmark::State& state)
{
    const Dataset ds = random_dataset(static_cast<std::size_t>(state.range(0)), 23);
    JobConfig cfg;
    cfg.min_part = 4;
    cfg.worker_count = static_cast<std::size_t>(state.range(1));
    std::uint64_t pairs = 0;
    for (auto _ : state) {
        const auto summary = run_all_pairs(ds, cfg, [](const PairRecord& r) { benchmark::DoNotOptimize(&r); });
        pairs += summary.pairs_scanned;
    }
    state.counters["pairs/s"] = benchmark::Counter(static_cast<double>(pairs), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_AllPairs)->Args({200, 1})->Args({200, 4})->Unit(benchmark::kMillisecond)->UseRealTime();

} // namespace

BENCHMARK_MAIN();
