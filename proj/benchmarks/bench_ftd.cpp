#include "ftd/ftd.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace ftd;

namespace
{
    /// G(n, p) with n p^2 fixed, the regime the solver is built for.
    Graph regime_graph(Vertex n, double np2, std::uint64_t seed = 1) { return gen_gnp(n, std::sqrt(np2 / n), seed); }
}

static void bm_gen_gnp(benchmark::State &state)
{
    Vertex n = static_cast<Vertex>(state.range(0));
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(gen_gnp(n, 0.1, ++seed));
}
BENCHMARK(bm_gen_gnp)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);

static void bm_triangle_index(benchmark::State &state)
{
    Graph g = gen_gnp(static_cast<Vertex>(state.range(0)), 0.15, 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(TriangleIndex(g));
}
BENCHMARK(bm_triangle_index)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);

static void bm_bowtie_balance(benchmark::State &state)
{
    Graph g = regime_graph(static_cast<Vertex>(state.range(0)), 8.0);
    TriangleIndex ti(g);
    auto u = uniform_weighting(g, ti);
    for (auto _ : state)
        benchmark::DoNotOptimize(bowtie_balance(g, ti, u));
}
BENCHMARK(bm_bowtie_balance)->Arg(40)->Arg(60)->Unit(benchmark::kMillisecond);

static void bm_pinwheel_build(benchmark::State &state)
{
    Graph g = regime_graph(static_cast<Vertex>(state.range(0)), static_cast<double>(state.range(1)));
    TriangleIndex ti(g);
    for (auto _ : state) {
        PinwheelOperator op(g, ti);
        state.counters["cycles"] = static_cast<double>(op.cycle_count());
    }
}
BENCHMARK(bm_pinwheel_build)->Args({40, 6})->Args({50, 8})->Unit(benchmark::kMillisecond);

static void bm_pinwheel_apply(benchmark::State &state)
{
    Graph g = regime_graph(50, 8.0);
    TriangleIndex ti(g);
    PinwheelOperator op(g, ti, {.matrix_budget = state.range(0) ? std::size_t{1} << 25 : 0});
    auto s = uniform_weighting(g, ti);
    for (auto _ : state)
        benchmark::DoNotOptimize(op.apply(s));
    state.SetLabel(op.streaming() ? "streaming" : "matrix");
}
BENCHMARK(bm_pinwheel_apply)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

static void bm_decide_ftd(benchmark::State &state)
{
    Vertex n = static_cast<Vertex>(state.range(0));
    Graph g = gen_gnp(n, 1.3 * p_delta(n), 7);
    TriangleIndex ti(g);
    for (auto _ : state)
        benchmark::DoNotOptimize(decide_ftd(g, ti));
}
BENCHMARK(bm_decide_ftd)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

static void bm_pattern_suite(benchmark::State &state)
{
    for (auto _ : state)
        benchmark::DoNotOptimize(verify_standard_suite());
}
BENCHMARK(bm_pattern_suite)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
