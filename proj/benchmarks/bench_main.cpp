#include <benchmark/benchmark.h>

#include "mbvar/charfn.hpp"
#include "mbvar/moments.hpp"
#include "mbvar/normal.hpp"
#include "mbvar/trade_tape.hpp"
#include "mbvar/var_engine.hpp"

namespace {

mbvar::TradeTape make_tape(std::size_t count) {
    mbvar::SynthSpec spec;
    spec.count = count;
    spec.volume_process = mbvar::VolumeProcess::UniformInt;
    return mbvar::synthesize_tape(spec, 7);
}

void BM_ComputeMoments(benchmark::State& state) {
    const auto tape = make_tape(static_cast<std::size_t>(state.range(0)));
    const mbvar::TradeSlice slice(tape.trades());
    for (auto _ : state) {
        benchmark::DoNotOptimize(mbvar::compute_moments(slice, 3));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ComputeMoments)->Arg(1000)->Arg(100000);

void BM_GilPelaezCdf(benchmark::State& state) {
    const auto f = mbvar::fit_charfn(
        mbvar::CentralStats{100.0, 4.0, 0.3, true, mbvar::MeasureKind::Market}, 3);
    double p = 96.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mbvar::invert_cdf(f, p));
    }
}
BENCHMARK(BM_GilPelaezCdf);

void BM_TabulateDensity(benchmark::State& state) {
    const auto f = mbvar::fit_charfn(
        mbvar::CentralStats{100.0, 4.0, 0.0, false, mbvar::MeasureKind::Market}, 2);
    mbvar::GridSpec grid = mbvar::default_grid(f);
    grid.points = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(mbvar::tabulate_density(f, grid));
    }
}
BENCHMARK(BM_TabulateDensity)->Arg(512)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_NormalQuantile(benchmark::State& state) {
    double eps = 0.049;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mbvar::normal_quantile(eps));
    }
}
BENCHMARK(BM_NormalQuantile);

void BM_Compare(benchmark::State& state) {
    const auto tape = make_tape(static_cast<std::size_t>(state.range(0)));
    const mbvar::TradeSlice slice(tape.trades());
    const mbvar::Window w{0.0, 1e9};
    const std::vector<double> eps{0.01, 0.03, 0.05};
    for (auto _ : state) {
        benchmark::DoNotOptimize(mbvar::compare(slice, w, eps, 2));
    }
}
BENCHMARK(BM_Compare)->Arg(1000)->Arg(20000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
