// Serial reference kernels against their OpenMP counterparts.
#include "wavelab/heat.hpp"
#include "wavelab/noise.hpp"
#include "wavelab/wave.hpp"

#include <benchmark/benchmark.h>

using namespace wavelab;

namespace {

LatticeSpec wave_lattice(int inv_h)
{
    return LatticeSpec::create(1.0 / inv_h, 1.0, -1.0, 1.0);
}

void BM_WaveReference(benchmark::State& state)
{
    const auto noise = make_noise(7, wave_lattice(static_cast<int>(state.range(0))));
    const auto sigma = SigmaSpec::linear(1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_wave_reference(sigma, noise).values().data());
    state.SetItemsProcessed(state.iterations() * static_cast<long>(noise.lattice().point_count()));
}

void BM_WaveParallel(benchmark::State& state)
{
    const auto noise = make_noise(7, wave_lattice(static_cast<int>(state.range(0))));
    const auto sigma = SigmaSpec::linear(1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_wave(sigma, noise).values().data());
    state.SetItemsProcessed(state.iterations() * static_cast<long>(noise.lattice().point_count()));
}

void BM_HeatReference(benchmark::State& state)
{
    const auto grid = HeatGridSpec::create(1.0 / static_cast<double>(state.range(0)), 1.0, 1.0 / 256);
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_heat_reference(SigmaSpec::linear(1.0), 7, grid).values().data());
}

void BM_HeatParallel(benchmark::State& state)
{
    const auto grid = HeatGridSpec::create(1.0 / static_cast<double>(state.range(0)), 1.0, 1.0 / 256);
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_heat(SigmaSpec::linear(1.0), 7, grid).values().data());
}

void BM_CellsReference(benchmark::State& state)
{
    const auto noise = make_noise(7, wave_lattice(static_cast<int>(state.range(0))));
    for (auto _ : state)
        benchmark::DoNotOptimize(render_cells_reference(noise).values.data());
}

void BM_CellsParallel(benchmark::State& state)
{
    const auto noise = make_noise(7, wave_lattice(static_cast<int>(state.range(0))));
    for (auto _ : state)
        benchmark::DoNotOptimize(render_cells(noise).values.data());
}

} // namespace

BENCHMARK(BM_WaveReference)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WaveParallel)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HeatReference)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HeatParallel)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CellsReference)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CellsParallel)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
