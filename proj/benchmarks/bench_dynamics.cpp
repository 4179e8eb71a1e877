#include <benchmark/benchmark.h>

#include "tradepost/tradepost.hpp"

using namespace tradepost;

namespace {

Economy dense_economy(std::size_t n, double alpha) {
    CounterRng rng(n);
    Matrix a(n, n);
    for (double& v : a.values()) v = rng.uniform(1.0, 100.0);
    return Economy(a, Vector(n, alpha));
}

MarketState dense_state(std::size_t n) {
    CounterRng rng(n, 1);
    Matrix b(n, n);
    double total = 0.0;
    for (double& v : b.values()) total += v = rng.uniform(0.1, 1.0);
    for (double& v : b.values()) v /= total;
    return make_state(b);
}

void BM_PrStep(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Economy e = dense_economy(n, 1.0);
    MarketState s = dense_state(n);
    for (auto _ : state) {
        s = pr_step(e, s);
        benchmark::DoNotOptimize(s.bids.values().data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PrStep)->RangeMultiplier(2)->Range(2, 128)->Complexity(benchmark::oNSquared);

void BM_LazyStep(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Economy e = dense_economy(n, 0.5);
    MarketState s = dense_state(n);
    for (auto _ : state) {
        s = lazy_pr_step(e, s);
        benchmark::DoNotOptimize(s.bids.values().data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LazyStep)->RangeMultiplier(2)->Range(2, 128)->Complexity(benchmark::oNSquared);

void BM_SolveEquilibrium(benchmark::State& state) {
    const Economy e = dense_economy(static_cast<std::size_t>(state.range(0)), 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(solve_equilibrium(e).u_star.data());
}
BENCHMARK(BM_SolveEquilibrium)->DenseRange(2, 10, 4)->Unit(benchmark::kMillisecond);

void BM_LyapunovValue(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Economy e = dense_economy(n, 1.0);
    const EquilibriumCertificate c = solve_equilibrium(e);
    const MarketState s = dense_state(n);
    for (auto _ : state) benchmark::DoNotOptimize(f_value(c, s, e));
}
BENCHMARK(BM_LyapunovValue)->RangeMultiplier(2)->Range(2, 32);

}  // namespace

BENCHMARK_MAIN();
