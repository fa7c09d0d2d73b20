#include <benchmark/benchmark.h>

#include "subthurston/equilibrium.hpp"
#include "subthurston/statistics.hpp"
#include "subthurston/transfer.hpp"

using namespace subthurston;

namespace {

static void BM_BranchSum(benchmark::State& state) {
    Subsystem carpet = Subsystem::carpet();
    Potential phi = Potential::torus_trig({{1, 1, 0.3}});
    SplitPoint q(Colour::White, Rat(2, 7), Rat(3, 7));
    auto one = [](const FixedPoint&) { return 1.0; };
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(apply_split_operator(carpet, phi, one, q, n));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(std::pow(8.0, n)));
}
BENCHMARK(BM_BranchSum)->Arg(4)->Arg(6)->Arg(8);

static void BM_MatrixAssembly(benchmark::State& state) {
    Subsystem carpet = Subsystem::carpet();
    Potential phi = Potential::torus_trig({{1, 1, 0.3}});
    const int depth = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto index = std::make_shared<TileIndex>(carpet, depth);
        TransferMatrix M(index, phi);
        benchmark::DoNotOptimize(M.nonzeros());
    }
}
BENCHMARK(BM_MatrixAssembly)->Arg(3)->Arg(4)->Arg(5);

static void BM_SpectralSolve(benchmark::State& state) {
    Subsystem carpet = Subsystem::carpet();
    Potential phi = Potential::torus_trig({{1, 1, 0.3}});
    const int depth = static_cast<int>(state.range(0));
    for (auto _ : state) {
        SpectralData sd = solve_spectral(carpet, phi, depth);
        benchmark::DoNotOptimize(sd.lambda0);
    }
}
BENCHMARK(BM_SpectralSolve)->Arg(3)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_Enumerate(benchmark::State& state) {
    Subsystem carpet = Subsystem::carpet();
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto en = enumerate_tiles(carpet, n);
        benchmark::DoNotOptimize(en.tiles.size());
    }
}
BENCHMARK(BM_Enumerate)->Arg(3)->Arg(5);

}  // namespace

BENCHMARK_MAIN();
