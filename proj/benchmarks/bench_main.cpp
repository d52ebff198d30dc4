// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2025 The asyncmimo authors

#include <asyncmimo/asyncmimo.hpp>

#include <benchmark/benchmark.h>

using namespace asyncmimo;

namespace {

Pulse pick(int family)
{
    return family ? Pulse::root_raised_cosine(0.5, 3) : Pulse::rectangular();
}

void BM_TapMoments(benchmark::State& st)
{
    const auto pulse = pick(static_cast<int>(st.range(0)));
    const auto dist = DelayDist::standard_mixture(8);
    for (auto _ : st)
        benchmark::DoNotOptimize(tap_moments(pulse, dist, 0.43));
}
BENCHMARK(BM_TapMoments)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_BuildZ(benchmark::State& st)
{
    const auto taps = tap_moments(Pulse::rectangular(), DelayDist::standard_mixture(4), 0.4);
    const int N = static_cast<int>(st.range(0));
    for (auto _ : st)
        benchmark::DoNotOptimize(build_Z(taps, N));
    st.SetComplexityN(N);
}
BENCHMARK(BM_BuildZ)->RangeMultiplier(4)->Range(64, 1024)->Complexity()->Unit(benchmark::kMillisecond);

void BM_ComputeMoments(benchmark::State& st)
{
    const auto kind = static_cast<ReceiverKind>(st.range(1));
    LinkConfig c;
    c.K = kind == ReceiverKind::mrczf_imperfect ? 2 : 5;
    const auto sc = Scenario::make(c, pick(static_cast<int>(st.range(0))), DelayDist::standard_mixture(c.K));
    for (auto _ : st)
        benchmark::DoNotOptimize(sc.moments(kind));
}
BENCHMARK(BM_ComputeMoments)
    ->ArgsProduct({{0, 1}, {0, 1, 2, 3}})
    ->Unit(benchmark::kMillisecond);

// One Monte Carlo trial per iteration, single thread.
void BM_MonteCarloTrial(benchmark::State& st)
{
    const auto kind = static_cast<ReceiverKind>(st.range(0));
    LinkConfig c;
    c.K = 5;
    c.M = static_cast<int>(st.range(1));
    const auto sc = Scenario::make(c, Pulse::rectangular(), DelayDist::standard_mixture(5));
    const auto mt = sc.moments(kind);
    McOptions opt;
    opt.trials = 16;
    opt.threads = 1;
    for (auto _ : st)
        benchmark::DoNotOptimize(run_monte_carlo(sc, mt, kind, opt));
    st.SetItemsProcessed(st.iterations() * opt.trials);
}
BENCHMARK(BM_MonteCarloTrial)->ArgsProduct({{0, 1, 2}, {64, 256}})->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
