// Microbenchmarks for the density-evolution kernels: message combining,
// one-shot node updates, full fixed-point runs, and coupled chain updates.

#include <benchmark/benchmark.h>

#include <random>

#include "nbde/coupled.hpp"
#include "nbde/de.hpp"
#include "nbde/potential.hpp"

using namespace nbde;

namespace {

Pmf random_pmf(int m, std::mt19937_64& rng) {
    std::exponential_distribution<double> e(1.0);
    std::vector<double> v(m + 1);
    double sum = 0.0;
    for (auto& x : v) {
        x = e(rng) + 1e-12;
        sum += x;
    }
    for (auto& x : v) x /= sum;
    return Pmf(m, std::move(v));
}

void BM_boxtimes(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    std::mt19937_64 rng(1);
    const Pmf a = random_pmf(m, rng);
    const Pmf b = random_pmf(m, rng);
    coeff_tensors(m);  // build outside the loop
    for (auto _ : state) {
        benchmark::DoNotOptimize(boxtimes(a, b));
    }
}
BENCHMARK(BM_boxtimes)->Arg(1)->Arg(3)->Arg(8)->Arg(16);

void BM_boxdot(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    std::mt19937_64 rng(2);
    const Pmf a = random_pmf(m, rng);
    const Pmf b = random_pmf(m, rng);
    coeff_tensors(m);
    for (auto _ : state) {
        benchmark::DoNotOptimize(boxdot(a, b));
    }
}
BENCHMARK(BM_boxdot)->Arg(1)->Arg(3)->Arg(8)->Arg(16);

void BM_node_update_pair(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const EnsembleParams params(3, 6, m);
    DeEvaluator ev(params);
    const Ccdf x = channel_ccdf(0.45, m);
    Ccdf gx(m), fx(m);
    for (auto _ : state) {
        ev.g(x.tail.data(), gx.tail.data());
        ev.f(gx.tail.data(), 0.45, fx.tail.data());
        benchmark::DoNotOptimize(fx.tail.data());
    }
}
BENCHMARK(BM_node_update_pair)->Arg(1)->Arg(3)->Arg(5)->Arg(8);

void BM_fixed_point(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const EnsembleParams params(3, 6, m);
    DeConfig cfg;
    for (auto _ : state) {
        benchmark::DoNotOptimize(de_fixed_point(0.46, params, cfg));
    }
}
BENCHMARK(BM_fixed_point)->Arg(1)->Arg(3);

void BM_coupled_update(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const EnsembleParams params(3, 6, m);
    const CouplingMatrix M = build_coupling_matrix(100, 3);
    DeEvaluator ev(params);
    CoupledState cur = coupled_init(0.48, params, M);
    CoupledState next(cur.N, cur.m);
    for (auto _ : state) {
        coupled_update(next, cur, 0.48, params, M, ev);
        std::swap(cur.X, next.X);
    }
}
BENCHMARK(BM_coupled_update)->Arg(1)->Arg(3)->Arg(8);

void BM_g_jacobian(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const EnsembleParams params(3, 6, m);
    DeEvaluator ev(params);
    const Ccdf x = channel_ccdf(0.45, m);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ev.g_jacobian(x.tail.data()));
    }
}
BENCHMARK(BM_g_jacobian)->Arg(2)->Arg(4)->Arg(8);

void BM_potential_U(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const EnsembleParams params(3, 6, m);
    const DMatrix D = construct_D(params);
    const Ccdf x = channel_ccdf(0.47, m);
    for (auto _ : state) {
        benchmark::DoNotOptimize(potential_U(x, 0.47, D, params));
    }
}
BENCHMARK(BM_potential_U)->Arg(1)->Arg(3);

}  // namespace

BENCHMARK_MAIN();
