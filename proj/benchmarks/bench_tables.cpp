#include <benchmark/benchmark.h>

#include "wsieve/special_functions.hpp"

using namespace wsieve;

static void BM_TableBuild(benchmark::State& state) {
    TableSettings s;
    s.grid_step = 1.0 / static_cast<double>(state.range(0));
    for (auto _ : state) {
        SieveTables tables(s);
        benchmark::DoNotOptimize(tables.buchstab(25.0));
    }
}
BENCHMARK(BM_TableBuild)->Arg(100)->Arg(1000);

static void BM_BuchstabEval(benchmark::State& state) {
    SieveTables tables;
    double u = 2.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(tables.buchstab(u));
        u += 1e-4;
        if (u > 29.5) u = 2.1;
    }
}
BENCHMARK(BM_BuchstabEval);

static void BM_BigCEval(benchmark::State& state) {
    SieveTables tables;
    double t = 3.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(tables.big_C(3, t));
        t += 1e-4;
        if (t > 29.5) t = 3.1;
    }
}
BENCHMARK(BM_BigCEval);
