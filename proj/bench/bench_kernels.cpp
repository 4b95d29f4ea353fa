// Serial reference vs OpenMP for the three data-parallel kernels.
// Set OMP_NUM_THREADS to compare thread counts.

#include "logspring/fitter_kernels.hpp"
#include "logspring/oscillator.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

namespace {

using namespace logspring;

struct Series {
    std::vector<double> t;
    std::vector<double> y;
    std::vector<double> theta;
};

Series make_series(std::size_t n)
{
    Series s;
    s.t = log_grid(1.0, 1000.0, n);
    for (double t : s.t) {
        s.y.push_back(1.5 + 0.8 * std::sin(2.5 * std::log(t)) + 0.3 * std::cos(2.5 * std::log(t)));
    }
    s.theta = linear_grid(0.5, 10.0, 400);
    return s;
}

void BM_ScanSerial(benchmark::State& state)
{
    const Series s = make_series(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::scan_rss_serial(s.t, s.y, s.theta, {}));
    }
}

void BM_ScanParallel(benchmark::State& state)
{
    const Series s = make_series(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::scan_rss_parallel(s.t, s.y, s.theta, {}));
    }
}

void BM_PeriodogramSerial(benchmark::State& state)
{
    const Series s = make_series(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::periodogram_serial(s.t, s.y, s.theta, {}));
    }
}

void BM_PeriodogramParallel(benchmark::State& state)
{
    const Series s = make_series(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::periodogram_parallel(s.t, s.y, s.theta, {}));
    }
}

void BM_SampleSerial(benchmark::State& state)
{
    const SpringConfig spring(1.0, 1.0, 4.0);
    const std::vector<double> t = log_grid(1.0, 1e4, static_cast<std::size_t>(state.range(0)));
    std::vector<SpringState> out(t.size());
    for (auto _ : state) {
        sample_states_serial(spring, t, out);
        benchmark::DoNotOptimize(out.data());
    }
}

void BM_SampleParallel(benchmark::State& state)
{
    const SpringConfig spring(1.0, 1.0, 4.0);
    const std::vector<double> t = log_grid(1.0, 1e4, static_cast<std::size_t>(state.range(0)));
    std::vector<SpringState> out(t.size());
    for (auto _ : state) {
        sample_states(spring, t, out);
        benchmark::DoNotOptimize(out.data());
    }
}

} // namespace

BENCHMARK(BM_ScanSerial)->Arg(256)->Arg(2048);
BENCHMARK(BM_ScanParallel)->Arg(256)->Arg(2048);
BENCHMARK(BM_PeriodogramSerial)->Arg(256)->Arg(2048);
BENCHMARK(BM_PeriodogramParallel)->Arg(256)->Arg(2048);
BENCHMARK(BM_SampleSerial)->Arg(1 << 14)->Arg(1 << 18);
BENCHMARK(BM_SampleParallel)->Arg(1 << 14)->Arg(1 << 18);

BENCHMARK_MAIN();
