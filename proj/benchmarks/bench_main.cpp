#include <benchmark/benchmark.h>

#include <sheafgauge/diagnostics.hpp>

using namespace sheafgauge;

static void BM_LaplacianAssembly(benchmark::State& state)
{
    const CellSheaf s = hidden_twist_bundle({state.range(0), 0.3, 0.1});
    for (auto _ : state) {
        benchmark::DoNotOptimize(laplacian(s, 1).matrix.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LaplacianAssembly)->RangeMultiplier(2)->Range(16, 256)->Complexity();

static void BM_CompleteGraphCoboundary(benchmark::State& state)
{
    const CellSheaf s = constant_sheaf(build_clique_complex(complete_graph(state.range(0))), 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(coboundary(s, 1).data());
    }
}
BENCHMARK(BM_CompleteGraphCoboundary)->DenseRange(6, 14, 4);

static void BM_Eigendecompose(benchmark::State& state)
{
    const Matrix l = laplacian(noisy_trivial_bundle(state.range(0), 2, 0.25, 1), 0).matrix;
    for (auto _ : state) {
        benchmark::DoNotOptimize(eigendecompose(l).eigenvalues.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Eigendecompose)->RangeMultiplier(2)->Range(16, 256)->Complexity();

static void BM_Diagnostics(benchmark::State& state)
{
    const CellSheaf s = mobius_bundle(state.range(0));
    const GroundingMorphism g = full_rank_grounding(s);
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_diagnostics(s, g).relative.kernel_dim);
    }
}
BENCHMARK(BM_Diagnostics)->Arg(10)->Arg(40)->Arg(160);

static void BM_Ensemble(benchmark::State& state)
{
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_ensemble(10, 0.3, 0.25, 0, state.range(0)).argmax_fraction);
    }
}
BENCHMARK(BM_Ensemble)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
