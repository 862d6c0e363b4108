#include <benchmark/benchmark.h>

#include "welsh/fd_oracle.hpp"
#include "welsh/phase.hpp"
#include "welsh/spectral.hpp"

using namespace welsh;

static void BM_SolveThreshold(benchmark::State& state)
{
    const LatticeParams p{1.0, -static_cast<double>(state.range(0))};
    for (auto _ : state) benchmark::DoNotOptimize(solve_threshold(p));
}
BENCHMARK(BM_SolveThreshold)->Arg(2)->Arg(20);

static void BM_CriticalCoupling(benchmark::State& state)
{
    const LatticeParams p{1.0, -static_cast<double>(state.range(0))};
    for (auto _ : state) benchmark::DoNotOptimize(critical_coupling(p));
}
BENCHMARK(BM_CriticalCoupling)->Arg(2)->Arg(20);

static void BM_OscillationCount(benchmark::State& state)
{
    const RadialParams p{{1.0, -20.0}, 0.0, 0};
    const TruncatedDomain dom{1e-3, static_cast<double>(state.range(0))};
    const double e = solve_threshold(p.lattice).E0() - 1e-3;
    for (auto _ : state) benchmark::DoNotOptimize(oscillation_count(p, e, dom));
}
BENCHMARK(BM_OscillationCount)->Arg(30)->Arg(120)->Unit(benchmark::kMillisecond);

static void BM_FindEigenvalues(benchmark::State& state)
{
    const RadialParams p{{1.0, -20.0}, 0.0, 0};
    const TruncatedDomain dom{1e-3, 30.0};
    for (auto _ : state) benchmark::DoNotOptimize(find_eigenvalues(p, dom, 1e-9));
}
BENCHMARK(BM_FindEigenvalues)->Unit(benchmark::kMillisecond);

static void BM_FdCountBelow(benchmark::State& state)
{
    const RadialParams p{{1.0, -2.0}, 0.0, 0};
    const FDGrid g = build_fd_grid(p, TruncatedDomain{1e-3, 60.0}, static_cast<std::size_t>(state.range(0)));
    const double e = solve_threshold(p.lattice).E0();
    for (auto _ : state) benchmark::DoNotOptimize(fd_count_below(g, e));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FdCountBelow)->Arg(6000)->Arg(60000)->Complexity(benchmark::oN);

BENCHMARK_MAIN();
