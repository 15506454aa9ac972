#include <benchmark/benchmark.h>

#include <random>

#include "dynbiot/assembly.hpp"
#include "dynbiot/mesh.hpp"
#include "dynbiot/solvers.hpp"

using namespace dynbiot;

namespace {

// Mechanics-like SPD system: mass + tau^2 elasticity with Dirichlet rows.
SparseMatrix mechanics_system(int n) {
    const Mesh mesh = build_unit_square_mesh(n);
    const auto mask = boundary_dof_mask(mesh, Space::P2Vec);
    return apply_dirichlet(
        SparseMatrix::add(assemble_mass(mesh, Space::P2Vec), assemble_elasticity(mesh, 10.0, 10.0),
                          0.01),
        mask);
}

Vector random_rhs(int size) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Vector b(size);
    for (double& v : b) v = unif(rng);
    return b;
}

}  // namespace

static void BM_CholeskyFactor(benchmark::State& state) {
    const SparseMatrix a = mechanics_system(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        BandCholesky chol(a);
        benchmark::DoNotOptimize(chol.bandwidth());
    }
}
BENCHMARK(BM_CholeskyFactor)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_CholeskySolve(benchmark::State& state) {
    const SparseMatrix a = mechanics_system(static_cast<int>(state.range(0)));
    const BandCholesky chol(a);
    const Vector b = random_rhs(a.rows());
    for (auto _ : state) {
        benchmark::DoNotOptimize(chol.solve(b));
    }
}
BENCHMARK(BM_CholeskySolve)->Arg(8)->Arg(16)->Arg(32);

static void BM_ConjugateGradient(benchmark::State& state) {
    const SparseMatrix a = mechanics_system(static_cast<int>(state.range(0)));
    const Vector b = random_rhs(a.rows());
    for (auto _ : state) {
        Vector x;
        const auto report = solve_spd(a, b, x, 1e-12, 20000);
        benchmark::DoNotOptimize(report.iterations);
    }
}
BENCHMARK(BM_ConjugateGradient)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_Matvec(benchmark::State& state) {
    const SparseMatrix a = mechanics_system(static_cast<int>(state.range(0)));
    const Vector b = random_rhs(a.rows());
    Vector y;
    for (auto _ : state) {
        a.apply(b, y);
        benchmark::DoNotOptimize(y.data());
    }
}
BENCHMARK(BM_Matvec)->Arg(16)->Arg(32)->Arg(64);
