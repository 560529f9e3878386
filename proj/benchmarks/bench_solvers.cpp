#include "lure_eq/lure_eq.hpp"

#include <benchmark/benchmark.h>

using namespace lure;

namespace {

LureSystem relay() {
    Mat a(2, 2);
    a << 9, -1, 1, 8;
    Mat d = Mat::Zero(2, 2);
    d(1, 1) = 1.0;
    return LureSystem(LipschitzMap::affine(a, Vec::Zero(2)), Mat::Identity(2, 2),
                      Mat::Identity(2, 2), d, MonotoneOperator::sign(2));
}

}  // namespace

static void BM_RelayTseng(benchmark::State& state) {
    const LureSystem sys = relay();
    SolverConfig cfg;
    cfg.gamma = 0.1;
    cfg.tol = 1e-10;
    cfg.max_iter = 2000;
    const Vec x0{{1.0, 2.0}};
    int iters = 0;
    for (auto _ : state) {
        const SolverReport rep = equilibrium(sys, cfg, x0, Route::Tseng);
        iters = rep.iterations;
        benchmark::DoNotOptimize(rep.solution);
    }
    state.counters["iterations"] = iters;
}
BENCHMARK(BM_RelayTseng);

static void BM_RelaySimulate(benchmark::State& state) {
    const LureSystem sys = relay();
    const Scheme scheme = static_cast<Scheme>(state.range(0));
    const Vec x0{{1.0, 2.0}};
    for (auto _ : state) benchmark::DoNotOptimize(simulate(sys, scheme, x0, 0.04, 10.0));
}
BENCHMARK(BM_RelaySimulate)
    ->Arg(static_cast<int>(Scheme::Explicit))
    ->Arg(static_cast<int>(Scheme::SemiImplicit));
