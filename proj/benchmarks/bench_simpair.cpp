#include <benchmark/benchmark.h>

#include "simpair/binning.hpp"
#include "simpair/detector.hpp"
#include "simpair/rng.hpp"
#include "simpair/stats.hpp"
#include "simpair/synthgen.hpp"

using namespace simpair;

namespace {

std::pair<std::vector<double>, std::vector<double>> logistic_sample(std::size_t n) {
    Rng rng(12345);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = rng.normal();
        y[i] = rng.bernoulli(sigmoid(-0.5 + 0.4 * x[i])) ? 1.0 : 0.0;
    }
    return {std::move(x), std::move(y)};
}

void BM_fit_logistic(benchmark::State& state) {
    const auto [x, y] = logistic_sample(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(fit_logistic(x, y));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_fit_logistic)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_fit_linear(benchmark::State& state) {
    Rng rng(7);
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = rng.normal();
        y[i] = 2.0 * x[i] + rng.normal();
    }
    for (auto _ : state) benchmark::DoNotOptimize(fit_linear(x, y));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_fit_linear)->Arg(100000);

void BM_disaggregate(benchmark::State& state) {
    Rng rng(9);
    std::vector<double> v(static_cast<std::size_t>(state.range(0)));
    std::vector<double> y(v.size(), 0.0);
    y[0] = 1.0;
    for (auto& x : v) x = rng.uniform();
    const Dataset d({"v", "y"}, {std::move(v), std::move(y)}, "y");
    const BinSpec spec{BinStrategy::equal_frequency, 10, 100};
    for (auto _ : state) benchmark::DoNotOptimize(disaggregate(d, "v", spec));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_disaggregate)->Arg(100000);

void BM_evaluate_pair(benchmark::State& state) {
    SessionGenParams p;
    p.n_sessions = static_cast<std::size_t>(state.range(0));
    p.seed = 3;
    const Dataset d = gen_sessions(p);
    const ScanConfig cfg;
    for (auto _ : state)
        benchmark::DoNotOptimize(evaluate_pair(d, "position", "session_length", cfg));
}
BENCHMARK(BM_evaluate_pair)->Arg(10000)->Arg(50000);

void BM_scan_pairs(benchmark::State& state) {
    const Dataset d = gen_null(10000, static_cast<std::size_t>(state.range(0)), 5);
    ScanConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(scan_pairs(d, cfg));
}
BENCHMARK(BM_scan_pairs)->Arg(3)->Arg(5);

void BM_mixture_identity(benchmark::State& state) {
    SessionGenParams p;
    p.n_sessions = static_cast<std::size_t>(state.range(0));
    p.seed = 11;
    const Dataset d = gen_sessions(p);
    for (auto _ : state)
        benchmark::DoNotOptimize(mixture_identity_check(d, "position", "session_length"));
}
BENCHMARK(BM_mixture_identity)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
