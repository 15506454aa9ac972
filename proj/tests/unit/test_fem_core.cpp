#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>

#include "dynbiot/assembly.hpp"
#include "dynbiot/element.hpp"
#include "dynbiot/quadrature.hpp"
#include "dynbiot/mms.hpp"
#include "dynbiot/solvers.hpp"
#include "../support/oracles.hpp"

using namespace dynbiot;
namespace oracle = dynbiot::test;

namespace {

// Exact reference-triangle monomial integral x^a y^b -> a! b! / (a+b+2)!.
double monomial_integral(int a, int b) {
    auto fact = [](int k) {
        double f = 1.0;
        for (int i = 2; i <= k; ++i) f *= i;
        return f;
    };
    return fact(a) * fact(b) / fact(a + b + 2);
}

double sum_entries(const SparseMatrix& m) {
    double s = 0.0;
    for (double v : m.values()) s += v;
    return s;
}

}  // namespace

TEST_SUITE_BEGIN("fem_core");

TEST_CASE("quadrature rules integrate monomials exactly") {
    for (int degree : {1, 2, 4, 6, 8, 10}) {
        CAPTURE(degree);
        const QuadratureRule rule = triangle_rule(degree);
        CHECK(rule.degree >= degree);
        double wsum = 0.0;
        for (double w : rule.weights) {
            CHECK(w > 0.0);
            wsum += w;
        }
        CHECK(wsum == doctest::Approx(0.5).epsilon(1e-14));
        for (int a = 0; a + 0 <= rule.degree; ++a) {
            for (int b = 0; a + b <= rule.degree; ++b) {
                double integral = 0.0;
                for (int q = 0; q < rule.size(); ++q) {
                    integral += rule.weights[q] * std::pow(rule.points[q].x, a) *
                                std::pow(rule.points[q].y, b);
                }
                CHECK(integral == doctest::Approx(monomial_integral(a, b)).epsilon(1e-13));
            }
        }
    }
}

TEST_CASE("duffy rules integrate monomials exactly as well") {
    for (int degree : {2, 5, 6}) {
        CAPTURE(degree);
        const QuadratureRule rule = duffy_rule(degree);
        for (int a = 0; a <= degree; ++a) {
            for (int b = 0; a + b <= degree; ++b) {
                double integral = 0.0;
                for (int q = 0; q < rule.size(); ++q) {
                    integral += rule.weights[q] * std::pow(rule.points[q].x, a) *
                                std::pow(rule.points[q].y, b);
                }
                CHECK(integral == doctest::Approx(monomial_integral(a, b)).epsilon(1e-13));
            }
        }
    }
}

TEST_CASE("basis functions: Kronecker property and partition of unity") {
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (Space space : {Space::P1, Space::P2}) {
        const ReferenceElement elem(space);
        const auto nodes = elem.nodes();
        std::vector<double> values;
        for (int i = 0; i < elem.node_count(); ++i) {
            elem.eval(nodes[i], values);
            for (int j = 0; j < elem.node_count(); ++j) {
                CHECK(values[j] == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-14));
            }
        }
        for (int trial = 0; trial < 100; ++trial) {
            double x = unif(rng), y = unif(rng);
            if (x + y > 1.0) {
                x = 1.0 - x;
                y = 1.0 - y;
            }
            elem.eval({x, y}, values);
            double sum = 0.0;
            for (double v : values) sum += v;
            CHECK(std::abs(sum - 1.0) <= 1e-13);
        }
    }
}

TEST_CASE("basis gradients match finite differences of basis values") {
    const double h = 1e-6;
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> unif(0.05, 0.4);
    for (Space space : {Space::P1, Space::P2}) {
        const ReferenceElement elem(space);
        std::vector<Vec2> grads;
        std::vector<double> vp, vm;
        for (int trial = 0; trial < 25; ++trial) {
            const Vec2 p{unif(rng), unif(rng)};
            elem.eval_grad(p, grads);
            for (int i = 0; i < elem.node_count(); ++i) {
                elem.eval({p.x + h, p.y}, vp);
                elem.eval({p.x - h, p.y}, vm);
                CHECK(grads[i].x == doctest::Approx((vp[i] - vm[i]) / (2.0 * h)).epsilon(1e-6));
                elem.eval({p.x, p.y + h}, vp);
                elem.eval({p.x, p.y - h}, vm);
                CHECK(grads[i].y == doctest::Approx((vp[i] - vm[i]) / (2.0 * h)).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("mass matrices: total mass one and dense-oracle equality") {
    for (int n : {1, 2}) {
        CAPTURE(n);
        const Mesh mesh = build_unit_square_mesh(n);
        const SparseMatrix mp1 = assemble_mass(mesh, Space::P1);
        const SparseMatrix mp2 = assemble_mass(mesh, Space::P2);
        CHECK(sum_entries(mp1) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(sum_entries(mp2) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(oracle::max_abs_diff(oracle::to_dense(mp1), oracle::dense_mass(mesh, false)) < 1e-12);
        CHECK(oracle::max_abs_diff(oracle::to_dense(mp2), oracle::dense_mass(mesh, true)) < 1e-12);
        const SparseMatrix mv = assemble_mass(mesh, Space::P2Vec, 2.5);
        CHECK(oracle::max_abs_diff(oracle::to_dense(mv), oracle::dense_vector_mass(mesh, 2.5)) <
              1e-12);
    }
}

TEST_CASE("hand-integrated n=1 P1 mass matrix") {
    const Mesh mesh = build_unit_square_mesh(1);
    const SparseMatrix m = assemble_mass(mesh, Space::P1);
    // Row-major vertex numbering: 0=(0,0) 1=(1,0) 2=(0,1) 3=(1,1); the cell
    // splits along the 0-3 diagonal into triangles (0,1,3) and (0,3,2). For
    // one triangle of area 1/2 the P1 mass is area/6 on the diagonal and
    // area/12 off it; vertices 0 and 3 collect both triangles.
    const double on = 1.0 / 12.0, off = 1.0 / 24.0;
    const double expected[4][4] = {
        {2 * on, off, off, 2 * off},
        {off, on, 0.0, off},
        {off, 0.0, on, off},
        {2 * off, off, off, 2 * on},
    };
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            CHECK(m.value_at(i, j) == doctest::Approx(expected[i][j]).epsilon(1e-14));
        }
    }
}

TEST_CASE("weighted stiffness: row sums, tensor linearity, SPD rejection") {
    const Mesh mesh = build_unit_square_mesh(3);
    const SparseMatrix k1 = assemble_weighted_stiffness(mesh, Tensor2::identity());
    for (int r = 0; r < k1.rows(); ++r) {
        double row = 0.0;
        for (int k = k1.row_offsets()[r]; k < k1.row_offsets()[r + 1]; ++k) row += k1.values()[k];
        CHECK(std::abs(row) < 1e-12);
    }

    const SparseMatrix k102 = assemble_weighted_stiffness(mesh, Tensor2::identity(1.02));
    for (int r = 0; r < k1.rows(); ++r) {
        for (int k = k1.row_offsets()[r]; k < k1.row_offsets()[r + 1]; ++k) {
            CHECK(k102.values()[k] == doctest::Approx(1.02 * k1.values()[k]).epsilon(1e-13));
        }
    }

    // Additivity in the tensor argument on the shared pattern.
    const Tensor2 a{2.0, 0.3, 0.3, 1.0};
    const Tensor2 b{1.5, -0.2, -0.2, 2.5};
    const SparseMatrix ka = assemble_weighted_stiffness(mesh, a);
    const SparseMatrix kb = assemble_weighted_stiffness(mesh, b);
    const SparseMatrix kab = assemble_weighted_stiffness(mesh, a + b);
    for (std::size_t k = 0; k < kab.nnz(); ++k) {
        CHECK(kab.values()[k] ==
              doctest::Approx(ka.values()[k] + kb.values()[k]).epsilon(1e-13));
    }

    CHECK_THROWS_AS(assemble_weighted_stiffness(mesh, Tensor2{1.0, 2.0, 2.0, 1.0}),
                    std::invalid_argument);  // indefinite
    CHECK_THROWS_AS(assemble_weighted_stiffness(mesh, Tensor2{1.0, 0.5, -0.5, 1.0}),
                    std::invalid_argument);  // nonsymmetric
}

TEST_CASE("n=2 identity stiffness matches the five-point stencil at the center") {
    const Mesh mesh = build_unit_square_mesh(2);
    const SparseMatrix k = assemble_weighted_stiffness(mesh, Tensor2::identity());
    // Node 4 is the interior center; axis neighbors 1, 3, 5, 7; diagonal
    // neighbors 0 and 8 are edge-connected but their entries cancel.
    CHECK(k.value_at(4, 4) == doctest::Approx(4.0).epsilon(1e-13));
    for (int nb : {1, 3, 5, 7}) CHECK(k.value_at(4, nb) == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(std::abs(k.value_at(4, 0)) < 1e-13);
    CHECK(std::abs(k.value_at(4, 8)) < 1e-13);

    const double tensor[2][2] = {{1.0, 0.0}, {0.0, 1.0}};
    CHECK(oracle::max_abs_diff(oracle::to_dense(k), oracle::dense_stiffness(mesh, tensor)) <
          1e-12);
}

TEST_CASE("elasticity: rigid-body kernel, energy value, dense oracle") {
    const Mesh mesh = build_unit_square_mesh(2);
    const double mu = 10.0, lambda = 10.0;
    const SparseMatrix e = assemble_elasticity(mesh, mu, lambda);

    auto check_kernel_field = [&](const VectorField& f) {
        const Vector coeffs = interpolate(mesh, Space::P2Vec, f);
        const Vector out = e.apply(coeffs);
        for (double v : out) CHECK(std::abs(v) < 1e-11);
    };
    check_kernel_field([](const Vec2&) { return Vec2{1.0, 0.0}; });
    check_kernel_field([](const Vec2&) { return Vec2{0.0, 1.0}; });
    check_kernel_field([](const Vec2& p) { return Vec2{-p.y, p.x}; });  // linearized rotation

    // u = (x, 0): energy = 2 mu + lambda = 30 on the unit square.
    const Vector ux = interpolate(mesh, Space::P2Vec, [](const Vec2& p) { return Vec2{p.x, 0.0}; });
    CHECK(dot(ux, e.apply(ux)) == doctest::Approx(2.0 * mu + lambda).epsilon(1e-12));

    CHECK(oracle::max_abs_diff(oracle::to_dense(e), oracle::dense_elasticity(mesh, mu, lambda)) <
          1e-11);
}

TEST_CASE("div coupling: constants in kernel, interpolated divergence, oracle") {
    const Mesh mesh = build_unit_square_mesh(2);
    const SparseMatrix b = assemble_div_coupling(mesh);

    const Vector constant =
        interpolate(mesh, Space::P2Vec, [](const Vec2&) { return Vec2{0.7, -0.3}; });
    for (double v : b.apply(constant)) CHECK(std::abs(v) < 1e-13);

    // u = (x, y): div u = 2, so (B u)_i = 2 * integral of q_i.
    const Vector linear = interpolate(mesh, Space::P2Vec, [](const Vec2& p) { return Vec2{p.x, p.y}; });
    const Vector bu = b.apply(linear);
    const SparseMatrix mp = assemble_mass(mesh, Space::P1);
    const Vector ones(mp.rows(), 1.0);
    const Vector lumped = mp.apply(ones);
    double total = 0.0;
    for (int i = 0; i < static_cast<int>(bu.size()); ++i) {
        CHECK(bu[i] == doctest::Approx(2.0 * lumped[i]).epsilon(1e-12));
        total += bu[i];
    }
    CHECK(total == doctest::Approx(2.0).epsilon(1e-12));

    CHECK(oracle::max_abs_diff(oracle::to_dense(b), oracle::dense_div_coupling(mesh)) < 1e-12);
}

TEST_CASE("grad coupling: zero tensor, constant pressure, partition sums, oracle") {
    const Mesh mesh = build_unit_square_mesh(2);
    const int n_scalar = mesh.n_vertices() + mesh.n_edges();

    const SparseMatrix zero = assemble_grad_coupling(mesh, Tensor2{0.0, 0.0, 0.0, 0.0});
    for (double v : zero.values()) CHECK(v == 0.0);

    const SparseMatrix g = assemble_grad_coupling(mesh, Tensor2::identity());
    const Vector p_const = interpolate(mesh, Space::P1, [](const Vec2&) { return 3.3; });
    for (double v : g.apply(p_const)) CHECK(std::abs(v) < 1e-12);

    // p = x, tensor I: rows of the x-component sum to 1, y-component to 0.
    const Vector px = interpolate(mesh, Space::P1, [](const Vec2& p) { return p.x; });
    const Vector gp = g.apply(px);
    double sx = 0.0, sy = 0.0;
    for (int i = 0; i < n_scalar; ++i) {
        sx += gp[i];
        sy += gp[n_scalar + i];
    }
    CHECK(sx == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(sy) < 1e-12);

    const double tensor[2][2] = {{1.1, 0.4}, {-0.2, 0.8}};
    const SparseMatrix ga = assemble_grad_coupling(mesh, Tensor2{1.1, 0.4, -0.2, 0.8});
    CHECK(oracle::max_abs_diff(oracle::to_dense(ga), oracle::dense_grad_coupling(mesh, tensor)) <
          1e-12);
}

TEST_CASE("component grids contract to the directly assembled operators") {
    const Mesh mesh = build_unit_square_mesh(3);
    std::mt19937 rng(321);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Vector p(mesh.n_vertices());
    for (double& v : p) v = unif(rng);

    const GradGradComponents kab = assemble_gradgrad_components(mesh);
    const Tensor2 spd{2.0, 0.4, 0.4, 1.5};
    const Vector via_grid = kab.apply(spd, p);
    const Vector via_matrix = assemble_weighted_stiffness(mesh, spd).apply(p);
    for (std::size_t i = 0; i < p.size(); ++i) {
        CHECK(via_grid[i] == doctest::Approx(via_matrix[i]).epsilon(1e-12));
    }

    const VectorGradComponents gab = assemble_vector_grad_components(mesh);
    const Tensor2 any{0.9, -0.5, 0.3, 1.8};
    const Vector gv_grid = gab.apply(any, p);
    const Vector gv_matrix = assemble_grad_coupling(mesh, any).apply(p);
    for (std::size_t i = 0; i < gv_grid.size(); ++i) {
        CHECK(gv_grid[i] == doctest::Approx(gv_matrix[i]).epsilon(1e-12));
    }
}

TEST_CASE("load vectors: constants, zero field, refined-quadrature oracle") {
    const Mesh mesh = build_unit_square_mesh(3);
    const Vector ones_load = assemble_load(mesh, Space::P1, [](const Vec2&) { return 1.0; });
    double total = 0.0;
    for (double v : ones_load) total += v;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-13));

    const Vector zero_load = assemble_load(mesh, Space::P2, [](const Vec2&) { return 0.0; });
    for (double v : zero_load) CHECK(v == 0.0);

    // Default degree versus the degree+4 refined rule on the flow source of
    // the polynomial manufactured case at t = 1.
    BiotParameters params;
    const ManufacturedCase mc = example1_case(params, 1.0);
    auto f = [&](const Vec2& p) { return mc.f2(p, 1.0); };
    const Vector coarse = assemble_load(mesh, Space::P1, f, 6);
    const Vector fine = assemble_load(mesh, Space::P1, f, 10);
    double norm = 0.0, diff = 0.0;
    for (std::size_t i = 0; i < coarse.size(); ++i) {
        norm += fine[i] * fine[i];
        diff += (coarse[i] - fine[i]) * (coarse[i] - fine[i]);
    }
    CHECK(std::sqrt(diff) <= 1e-10 * std::sqrt(norm));

    // Two refined rules agree much tighter on a non-polynomial integrand.
    auto trig = [](const Vec2& p) { return std::sin(2.1 * p.x + 0.3) * std::cos(1.7 * p.y); };
    const Vector f10 = assemble_load(mesh, Space::P1, trig, 10);
    const Vector f12 = assemble_load(mesh, Space::P1, trig, 12);
    for (std::size_t i = 0; i < f10.size(); ++i) {
        CHECK(f10[i] == doctest::Approx(f12[i]).epsilon(1e-11));
    }
}

TEST_CASE("apply_dirichlet: identity cases and interior solve oracle") {
    const Mesh mesh = build_unit_square_mesh(2);
    const auto mask = boundary_dof_mask(mesh, Space::P1);

    SUBCASE("identity matrix stays the identity") {
        SparseBuilder builder(9, 9);
        for (int i = 0; i < 9; ++i) builder.add(i, i, 1.0);
        const SparseMatrix eliminated = apply_dirichlet(builder.build(), mask);
        for (int i = 0; i < 9; ++i) {
            for (int j = 0; j < 9; ++j) {
                CHECK(eliminated.value_at(i, j) == (i == j ? 1.0 : 0.0));
            }
        }
    }

    SUBCASE("all-true mask gives the identity system with zero rhs") {
        const SparseMatrix k = assemble_weighted_stiffness(mesh, Tensor2::identity());
        std::vector<std::uint8_t> all(9, 1);
        const SparseMatrix eliminated = apply_dirichlet(k, all);
        Vector rhs(9, 3.0);
        apply_dirichlet_rhs(rhs, all);
        for (int i = 0; i < 9; ++i) {
            CHECK(rhs[i] == 0.0);
            for (int j = 0; j < 9; ++j) {
                CHECK(eliminated.value_at(i, j) == (i == j ? 1.0 : 0.0));
            }
        }
    }

    SUBCASE("eliminated solve equals the dense interior-block solve") {
        const SparseMatrix k = assemble_weighted_stiffness(mesh, Tensor2::identity());
        const SparseMatrix ke = apply_dirichlet(k, mask);
        Vector rhs = assemble_load(mesh, Space::P1, [](const Vec2& p) { return p.x + 2.0; });
        apply_dirichlet_rhs(rhs, mask);

        // Dense oracle: restrict to the single interior node.
        const oracle::Matrix kd = oracle::to_dense(k);
        const double interior_value = rhs[4] / kd[4][4];

        Vector x;
        const auto report = solve_spd(ke, rhs, x, 1e-13, 200);
        CHECK(report.ok());
        CHECK(x[4] == doctest::Approx(interior_value).epsilon(1e-11));
        for (int i = 0; i < 9; ++i) {
            if (mask[i]) CHECK(x[i] == 0.0);
        }
    }
}

TEST_CASE("interpolation reproduces polynomials of the space degree") {
    const Mesh mesh = build_unit_square_mesh(3);
    auto quad = [](const Vec2& p) { return 1.0 + 2.0 * p.x - p.y + 0.5 * p.x * p.y + p.x * p.x; };
    const Vector coeffs = interpolate(mesh, Space::P2, quad);
    CHECK(l2_error(mesh, Space::P2, coeffs, quad) < 1e-13);

    auto linear = [](const Vec2& p) { return 0.3 * p.x - 1.2 * p.y + 0.7; };
    const Vector p1 = interpolate(mesh, Space::P1, linear);
    CHECK(l2_error(mesh, Space::P1, p1, linear) < 1e-13);
}

TEST_CASE("l2_error: analytic norm of the parabolic bubble") {
    const Mesh mesh = build_unit_square_mesh(4);
    const Vector zero(mesh.n_vertices(), 0.0);
    auto bubble = [](const Vec2& p) { return p.x * p.y * (1.0 - p.x) * (1.0 - p.y); };
    // || x y (1-x)(1-y) ||_{L2} = 1/30 exactly (degree-8 integrand).
    CHECK(l2_error(mesh, Space::P1, zero, bubble) == doctest::Approx(1.0 / 30.0).epsilon(1e-13));
}

TEST_CASE("l2_error: P1 interpolation error drops by factor four per halving") {
    auto f = [](const Vec2& p) { return std::sin(2.0 * p.x) * std::cos(p.y); };
    double prev = 0.0;
    for (int n : {8, 16, 32}) {
        const Mesh mesh = build_unit_square_mesh(n);
        const double err = l2_error(mesh, Space::P1, interpolate(mesh, Space::P1, f), f);
        if (prev > 0.0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.05));
        prev = err;
    }
}

TEST_CASE("assembled operators are symmetric and positive on free nodes") {
    const Mesh mesh = build_unit_square_mesh(3);
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);

    auto check_spd = [&](const SparseMatrix& m, const std::vector<std::uint8_t>& mask) {
        // Symmetry.
        const oracle::Matrix d = oracle::to_dense(m);
        for (std::size_t r = 0; r < d.size(); ++r) {
            for (std::size_t c = 0; c < d.size(); ++c) {
                CHECK(std::abs(d[r][c] - d[c][r]) < 1e-13);
            }
        }
        // Rayleigh quotient positivity on masked-out random vectors.
        for (int trial = 0; trial < 10; ++trial) {
            Vector v(m.rows());
            for (double& x : v) x = unif(rng);
            for (int i = 0; i < m.rows(); ++i) {
                if (mask[i]) v[i] = 0.0;
            }
            CHECK(dot(v, m.apply(v)) > 0.0);
        }
    };

    check_spd(assemble_mass(mesh, Space::P1), std::vector<std::uint8_t>(mesh.n_vertices(), 0));
    const auto p2v_mask = boundary_dof_mask(mesh, Space::P2Vec);
    check_spd(apply_dirichlet(assemble_elasticity(mesh, 10.0, 10.0), p2v_mask), p2v_mask);
}

TEST_SUITE_END();
