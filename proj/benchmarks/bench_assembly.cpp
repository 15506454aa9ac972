#include <benchmark/benchmark.h>

#include "dynbiot/assembly.hpp"
#include "dynbiot/mesh.hpp"

using namespace dynbiot;

static void BM_BuildMesh(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_unit_square_mesh(n));
    }
}
BENCHMARK(BM_BuildMesh)->Arg(16)->Arg(32)->Arg(64);

static void BM_AssembleElasticity(benchmark::State& state) {
    const Mesh mesh = build_unit_square_mesh(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(assemble_elasticity(mesh, 10.0, 10.0));
    }
}
BENCHMARK(BM_AssembleElasticity)->Arg(8)->Arg(16)->Arg(32);

static void BM_AssembleMassP1(benchmark::State& state) {
    const Mesh mesh = build_unit_square_mesh(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(assemble_mass(mesh, Space::P1));
    }
}
BENCHMARK(BM_AssembleMassP1)->Arg(16)->Arg(32)->Arg(64);

static void BM_AssembleLoadP2Vec(benchmark::State& state) {
    const Mesh mesh = build_unit_square_mesh(static_cast<int>(state.range(0)));
    auto f = [](const Vec2& p) { return Vec2{p.x * p.y, p.x - p.y}; };
    for (auto _ : state) {
        benchmark::DoNotOptimize(assemble_load(mesh, Space::P2Vec, f, 6));
    }
}
BENCHMARK(BM_AssembleLoadP2Vec)->Arg(16)->Arg(32);
