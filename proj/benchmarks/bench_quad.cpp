#include <benchmark/benchmark.h>

#include "wsieve/bounds.hpp"
#include "wsieve/scenarios.hpp"

using namespace wsieve;

static void BM_MarginK1(benchmark::State& state) {
    WeightSpec w = WeightSpec::kuhn(6.6, 23);
    ThetaSpec theta{1.0 / 3 - 0.092, 0.5 - 0.092, -0.5, 1.0 / 23, 0.25};
    auto tables = tables_for(theta, w);
    for (auto _ : state) {
        MarginOptions mo;
        mo.tables = tables;
        benchmark::DoNotOptimize(margin(theta, w, 3, Route::k1, mo).margin);
    }
}
BENCHMARK(BM_MarginK1);

static void BM_SmallR4D(benchmark::State& state) {
    WeightSpec w = WeightSpec::richert(4.1, 19.2, 1.0 / 1.4);
    ThetaSpec theta{1.0 / 3 - 0.075, 0.5 - 0.075, -0.5, 1.0 / 19.2, 0.25};
    auto tables = tables_for(theta, w);
    for (auto _ : state) {
        EvalContext ctx;
        ctx.tables = tables;
        ctx.tolerance = 1e-5;
        benchmark::DoNotOptimize(u2_coeff_small_r(theta, w, 3, 5, ctx));
    }
}
BENCHMARK(BM_SmallR4D);

static void BM_HarmanPointwise(benchmark::State& state) {
    double rho = 1.0 / 300.0;
    double th1 = 1.0 / 3 - rho;
    WeightSpec w = WeightSpec::richert(1.0 / th1, 4.0 / th1, 1.0 / (5.0 - 1.0 / th1));
    ThetaSpec theta{th1, 0.5 - rho, -0.5, th1 / 4.0, 0.25};
    auto tables = tables_for(theta, w);
    for (auto _ : state) {
        EvalContext ctx;
        ctx.tables = tables;
        benchmark::DoNotOptimize(harman_pointwise_u2(theta, w, ctx));
    }
}
BENCHMARK(BM_HarmanPointwise);

BENCHMARK_MAIN();
