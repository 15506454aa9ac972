#include <benchmark/benchmark.h>

#include "dynbiot/mms.hpp"
#include "dynbiot/schemes.hpp"

using namespace dynbiot;

static void BM_FixedStressRun(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Mesh mesh = build_unit_square_mesh(n);
    BiotParameters params;
    const ManufacturedCase mc = example1_case(params, 1.0);
    const InitialData initial = mc.initial_data(mesh, 0.1);
    SplitConfig split;
    split.stabilization = 0.05;
    for (auto _ : state) {
        const auto result = run_simulation(Scheme::FixedStress, mesh, params, mc.kernel, initial,
                                           mc.sources(), TimeGrid(0.5, 0.1), split);
        benchmark::DoNotOptimize(result.pressure.back().data());
    }
}
BENCHMARK(BM_FixedStressRun)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_MonolithicRun(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Mesh mesh = build_unit_square_mesh(n);
    BiotParameters params;
    const ManufacturedCase mc = example1_case(params, 1.0);
    const InitialData initial = mc.initial_data(mesh, 0.1);
    SplitConfig split;
    split.stabilization = 0.05;
    for (auto _ : state) {
        const auto result = run_simulation(Scheme::Monolithic, mesh, params, mc.kernel, initial,
                                           mc.sources(), TimeGrid(0.5, 0.1), split);
        benchmark::DoNotOptimize(result.pressure.back().data());
    }
}
BENCHMARK(BM_MonolithicRun)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

// History cost grows linearly with the level count; this isolates it.
static void BM_FlowConvolution(benchmark::State& state) {
    const Mesh mesh = build_unit_square_mesh(16);
    const GradGradComponents kab = assemble_gradgrad_components(mesh);
    const PermeabilityKernel kernel = PermeabilityKernel::sine_modulated(1.0);
    const int levels = static_cast<int>(state.range(0));
    const double tau = 0.01;
    HistoryStore history;
    Vector p(mesh.n_vertices(), 1.0);
    for (int i = 0; i < levels; ++i) history.append(tau * i, p);
    for (auto _ : state) {
        benchmark::DoNotOptimize(flow_convolution(history, kernel, tau * levels, kab,
                                                  HistoryRange::ExcludeCurrent)
                                     .history_part.data());
    }
}
BENCHMARK(BM_FlowConvolution)->Arg(10)->Arg(40)->Arg(160);
