// Serial reference against OpenMP kernels. Arg(0) is the serial path; Arg(n > 0) runs n threads.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <algorithm>
#include <cmath>

#include "qspec/khintchine.hpp"
#include "qspec/orbit.hpp"
#include "qspec/penetration.hpp"

using namespace qspec;

namespace {

void BM_OrbitWindow(benchmark::State& state) {
    OrbitOptions o;
    o.parallel = state.range(0) > 0;
    o.threads = static_cast<int>(state.range(0));
    o.witnesses = false;
    for (auto _ : state) {
        auto v = enumerate_orbit_window(QuadSurd::golden(), GroupSpec::psl2z(), 3e4, Window::of(0, 1), o);
        benchmark::DoNotOptimize(v.data());
    }
}

void BM_OrbitReference(benchmark::State& state) {
    for (auto _ : state) {
        auto v = enumerate_orbit_window_reference(QuadSurd::golden(), GroupSpec::psl2z(), 300.0, Window::of(0, 1));
        benchmark::DoNotOptimize(v.data());
    }
}

void BM_MonteCarlo(benchmark::State& state) {
    MonteCarloOptions o;
    o.parallel = state.range(0) > 0;
    o.threads = static_cast<int>(std::max<int64_t>(1, state.range(0)));
    for (auto _ : state) {
        auto r = monte_carlo_liminf(QuadSurd::golden(), GroupSpec::psl2z(), PhiSpec::constant(1.0), 1.0, 50, 1e3, 42, o);
        benchmark::DoNotOptimize(r.median);
    }
}

void BM_Inequalities(benchmark::State& state) {
    const bool parallel = state.range(0) > 0;
    if (parallel) omp_set_num_threads(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto r = check_penetration_inequalities(2000, 0.5 * std::log(5.0), 1, parallel);
        benchmark::DoNotOptimize(r.ok);
    }
}

}  // namespace

BENCHMARK(BM_OrbitWindow)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OrbitReference)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarlo)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Inequalities)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
