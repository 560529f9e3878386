#include "lure_eq/lure_eq.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace lure;

namespace {

Mat random_psd(std::mt19937_64& rng, Index n, double shift) {
    std::normal_distribution<double> g;
    Mat s(n, n);
    for (Index i = 0; i < s.size(); ++i) s.data()[i] = g(rng);
    return s * s.transpose() / static_cast<double>(n) + shift * Mat::Identity(n, n);
}

Vec random_vec(std::mt19937_64& rng, Index n) {
    std::normal_distribution<double> g;
    Vec v(n);
    for (Index i = 0; i < n; ++i) v(i) = g(rng);
    return v;
}

LureSystem port_system(std::mt19937_64& rng, Index n, Index m, Mat d) {
    std::normal_distribution<double> g;
    Mat c(m, n);
    for (Index i = 0; i < c.size(); ++i) c.data()[i] = g(rng);
    return LureSystem(LipschitzMap::affine(Mat::Identity(n, n), Vec::Zero(n)), c.transpose(), c,
                      std::move(d), MonotoneOperator::sign(m));
}

}  // namespace

// B = (Sign^{-1} + D)^{-1} with D positive definite: one weighted resolvent per call.
static void BM_ResolventB_PositiveDefiniteD(benchmark::State& state) {
    const Index m = state.range(0);
    std::mt19937_64 rng(7);
    const LureSystem sys = port_system(rng, m, m, random_psd(rng, m, 0.1));
    const BResolvent res(composed_b(sys), 0.5);
    const Vec x = random_vec(rng, m);
    for (auto _ : state) benchmark::DoNotOptimize(res(x));
}
BENCHMARK(BM_ResolventB_PositiveDefiniteD)->Arg(2)->Arg(8)->Arg(32);

// Diagonal D with a zero entry: closed form per coordinate.
static void BM_ResolventB_DiagonalD(benchmark::State& state) {
    const Index m = state.range(0);
    std::mt19937_64 rng(11);
    Mat d = Mat::Zero(m, m);
    for (Index i = 1; i < m; ++i) d(i, i) = 1.0;
    const LureSystem sys = port_system(rng, m, m, d);
    const BResolvent res(composed_b(sys), 0.5);
    const Vec x = random_vec(rng, m);
    for (auto _ : state) benchmark::DoNotOptimize(res(x));
}
BENCHMARK(BM_ResolventB_DiagonalD)->Arg(2)->Arg(32)->Arg(256);

// C^T B C with C not the identity goes through the dual forward-backward path.
static void BM_ResolventG_Dual(benchmark::State& state) {
    const Index n = state.range(0);
    const Index m = n / 2;
    std::mt19937_64 rng(13);
    const LureSystem sys = port_system(rng, n, m, random_psd(rng, m, 0.5));
    const GResolvent res(composed_g(sys), 0.2);
    const Vec w = random_vec(rng, n);
    for (auto _ : state) benchmark::DoNotOptimize(res(w));
}
BENCHMARK(BM_ResolventG_Dual)->Arg(4)->Arg(16)->Arg(32);
