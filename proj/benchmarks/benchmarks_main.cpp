#include <benchmark/benchmark.h>

#include "tango/chase.hpp"
#include "tango/weights.hpp"

using namespace tango;

static void BM_Binom(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(binom(200, 100));
}
BENCHMARK(BM_Binom);

static void BM_LineCohomology(benchmark::State& state) {
    for (auto _ : state)
        for (long d = -20; d <= 20; ++d) benchmark::DoNotOptimize(h_line(5, d, 0));
}
BENCHMARK(BM_LineCohomology);

static void BM_QuotientChase(benchmark::State& state) {
    TangoParams p{3, 7, 1, 0};
    for (auto _ : state) {
        Engine engine; // cold cache each round
        benchmark::DoNotOptimize(engine.cohomology(q_bundle(p)));
    }
}
BENCHMARK(BM_QuotientChase);

static void BM_SymQChase(benchmark::State& state) {
    TangoParams p{4, 9, 1, 0};
    for (auto _ : state) {
        Engine engine;
        benchmark::DoNotOptimize(engine.cohomology(sym_q(3, p)));
    }
}
BENCHMARK(BM_SymQChase);

static void BM_WedgeSquareMixed(benchmark::State& state) {
    GradedWedgeVector v;
    v.n = 6;
    int sign = 1;
    for (int p = 0; p < 6; ++p)
        for (int q = p + 1; q <= 6; ++q) {
            v.set(WedgeIndex{p, q}, Rat(sign, q + 1));
            sign = -sign;
        }
    for (auto _ : state) benchmark::DoNotOptimize(wedge_square_mixed(v));
}
BENCHMARK(BM_WedgeSquareMixed);

static void BM_NormalizeExpression(benchmark::State& state) {
    TangoParams p{4, 9, 1, 0};
    ExprPtr e = tensor(wedge_pow_line_sum(4, 3, {5, 4, 3, 2, 1, 0, -1}),
                       dual(twist(f_bundle(p), -2)));
    for (auto _ : state) benchmark::DoNotOptimize(normalize(e));
}
BENCHMARK(BM_NormalizeExpression);

int main(int argc, char** argv) {
    benchmark::Initialize(&argc, argv);
    benchmark::RunSpecifiedBenchmarks();
    return 0;
}
