#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "chemrep/diagnostics.hpp"
#include "chemrep/helmholtz.hpp"
#include "chemrep/operators.hpp"
#include "chemrep/solver.hpp"

namespace {

using namespace chemrep;

ScalarField smooth_sample(const Grid& g) {
    ScalarField f(g);
    const double pi = std::numbers::pi;
    for (int i = 0; i < g.cells(0); ++i)
        for (int j = 0; j < g.cells(1); ++j)
            for (int k = 0; k < g.cells(2); ++k) {
                double v = 2.0 + 0.5 * std::cos(pi * g.center(0, i));
                if (g.dim() > 1) v += 0.25 * std::cos(2.0 * pi * g.center(1, j));
                if (g.dim() > 2) v += 0.125 * std::cos(pi * g.center(2, k));
                f.at(i, j, k) = v;
            }
    return f;
}

void BM_Gradient(benchmark::State& state) {
    const Grid g = Grid::make_uniform(3, 64);
    const ScalarField f = smooth_sample(g);
    for (auto _ : state) benchmark::DoNotOptimize(gradient(f));
    state.SetItemsProcessed(state.iterations() * g.cell_count());
}
BENCHMARK(BM_Gradient);

void BM_Laplacian(benchmark::State& state) {
    const Grid g = Grid::make_uniform(3, 64);
    const ScalarField f = smooth_sample(g);
    for (auto _ : state) benchmark::DoNotOptimize(laplacian(f));
    state.SetItemsProcessed(state.iterations() * g.cell_count());
}
BENCHMARK(BM_Laplacian);

void BM_Hessian(benchmark::State& state) {
    const Grid g = Grid::make_uniform(3, 64);
    const ScalarField f = smooth_sample(g);
    for (auto _ : state) benchmark::DoNotOptimize(hessian(f));
    state.SetItemsProcessed(state.iterations() * g.cell_count());
}
BENCHMARK(BM_Hessian);

void BM_HelmholtzSolve(benchmark::State& state) {
    const Grid g = Grid::make_uniform(3, 64);
    const ScalarField rhs = smooth_sample(g);
    for (auto _ : state) benchmark::DoNotOptimize(solve_helmholtz(rhs, 1.0e3, 1e-10));
}
BENCHMARK(BM_HelmholtzSolve);

void BM_SolverStep(benchmark::State& state) {
    const Grid g = Grid::make_uniform(3, 32);
    SolverConfig cfg;
    cfg.dt = 1e-4;
    State s{smooth_sample(g), smooth_sample(g), 0.0};
    for (auto _ : state) benchmark::DoNotOptimize(step(s, cfg));
    state.SetItemsProcessed(state.iterations() * g.cell_count());
}
BENCHMARK(BM_SolverStep);

void BM_DiagnosticsEvaluate(benchmark::State& state) {
    const Grid g = Grid::make_uniform(3, 32);
    const State s{smooth_sample(g), smooth_sample(g), 0.0};
    for (auto _ : state) benchmark::DoNotOptimize(evaluate(s, nullptr));
    state.SetItemsProcessed(state.iterations() * g.cell_count());
}
BENCHMARK(BM_DiagnosticsEvaluate);

} // anonymous namespace

BENCHMARK_MAIN();
