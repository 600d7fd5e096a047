// Micro-benchmarks for the hot kernels: stencil applies, the Krylov solve,
// and one time step of the coupled scheme. Grid sizes are chosen so each
// case fits comfortably in cache (small) or spills (large).

#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <vector>

#include "chemoctrl/forward.hpp"
#include "chemoctrl/grid.hpp"
#include "chemoctrl/helmholtz.hpp"
#include "chemoctrl/objective.hpp"
#include "chemoctrl/operators.hpp"
#include "chemoctrl/tangent_adjoint.hpp"

using namespace chemoctrl;

namespace {

Grid make_grid(std::int64_t n, int ndim) {
    if (ndim == 1) return Grid({n}, {1.0});
    if (ndim == 2) return Grid({n, n}, {1.0, 1.0});
    return Grid({n, n, n}, {1.0, 1.0, 1.0});
}

ScalarField noisy_field(const Grid& g, std::uint64_t seed, double offset) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-0.4, 0.4);
    ScalarField out(g, offset);
    for (std::int64_t c = 0; c < g.cell_count(); ++c) out[c] += dist(rng);
    return out;
}

void bm_laplacian(benchmark::State& state) {
    Grid g = make_grid(state.range(0), static_cast<int>(state.range(1)));
    ScalarField x = noisy_field(g, 1, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(laplacian_neumann(x));
    state.SetItemsProcessed(state.iterations() * g.cell_count());
}

void bm_chemo_flux(benchmark::State& state) {
    Grid g = make_grid(state.range(0), static_cast<int>(state.range(1)));
    ScalarField u = noisy_field(g, 2, 1.0);
    ScalarField v = noisy_field(g, 3, 0.5);
    const auto scheme = state.range(2) == 0 ? FluxScheme::central : FluxScheme::upwind;
    for (auto _ : state) benchmark::DoNotOptimize(chemo_flux_divergence(u, v, scheme));
    state.SetItemsProcessed(state.iterations() * g.cell_count());
}

void bm_helmholtz_solve(benchmark::State& state) {
    Grid g = make_grid(state.range(0), static_cast<int>(state.range(1)));
    ScalarField rhs = noisy_field(g, 4, 1.0);
    HelmholtzProblem prob;
    prob.a = 1.0;
    prob.b = 0.01;
    prob.tol = 1e-10;
    for (auto _ : state) benchmark::DoNotOptimize(helmholtz_solve(prob, rhs));
    state.SetItemsProcessed(state.iterations() * g.cell_count());
}

void bm_forward_step(benchmark::State& state) {
    Grid g = make_grid(state.range(0), static_cast<int>(state.range(1)));
    ScalarField u = noisy_field(g, 5, 1.0);
    ScalarField v = noisy_field(g, 6, 0.5);
    ScalarField f(g, 0.2);
    for (auto _ : state) benchmark::DoNotOptimize(step(u, v, f, 1e-3, SchemeOptions{}));
    state.SetItemsProcessed(state.iterations() * g.cell_count());
}

void bm_adjoint_sweep(benchmark::State& state) {
    Grid g = make_grid(state.range(0), static_cast<int>(state.range(1)));
    g.set_control_box(std::vector<double>(static_cast<std::size_t>(g.ndim()), 0.25),
                      std::vector<double>(static_cast<std::size_t>(g.ndim()), 0.75));
    TimeGrid tg(0.1, 20);
    ScalarField u0 = noisy_field(g, 7, 1.0);
    ScalarField v0 = noisy_field(g, 8, 0.5);
    Control f(g, tg);
    Trajectory traj = simulate(u0, v0, f, tg, SchemeOptions{});
    TargetData targets = TargetData::constant(*traj.grid, tg, 0.5, 0.5);
    ObjectiveWeights weights;
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_adjoint(traj, f, targets, weights, SchemeOptions{}));
    state.SetItemsProcessed(state.iterations() * g.cell_count() * tg.steps());
}

}  // namespace

BENCHMARK(bm_laplacian)->Args({4096, 1})->Args({64, 2})->Args({256, 2})->Args({32, 3});
BENCHMARK(bm_chemo_flux)
    ->Args({4096, 1, 0})
    ->Args({4096, 1, 1})
    ->Args({256, 2, 0})
    ->Args({256, 2, 1});
BENCHMARK(bm_helmholtz_solve)->Args({4096, 1})->Args({64, 2})->Args({128, 2});
BENCHMARK(bm_forward_step)->Args({4096, 1})->Args({64, 2})->Args({128, 2});
BENCHMARK(bm_adjoint_sweep)->Args({1024, 1})->Args({48, 2});

BENCHMARK_MAIN();
