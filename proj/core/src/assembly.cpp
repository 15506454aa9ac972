#include "dynbiot/assembly.hpp"

#include <cmath>
#include <stdexcept>

#include "dynbiot/element.hpp"

namespace dynbiot {

namespace {

// Per-element geometry and basis data at the points of one quadrature rule.
struct ElementBasis {
    ReferenceElement element;
    QuadratureRule rule;
    // values[q][i], ref_grads[q][i]
    std::vector<std::vector<double>> values;
    std::vector<std::vector<Vec2>> ref_grads;

    ElementBasis(Space space, const QuadratureRule& r) : element(space), rule(r) {
        values.resize(rule.size());
        ref_grads.resize(rule.size());
        for (int q = 0; q < rule.size(); ++q) {
            element.eval(rule.points[q], values[q]);
            element.eval_grad(rule.points[q], ref_grads[q]);
        }
    }
};

struct CellGeometry {
    Vec2 v0;
    double det = 0.0;       // jacobian determinant (2x area)
    double inv_t[2][2] {};  // J^{-T}

    CellGeometry(const Mesh& mesh, int t) {
        const auto& tri = mesh.triangles[t];
        v0 = mesh.vertices[tri[0]];
        const Vec2 e1 = mesh.vertices[tri[1]] - v0;
        const Vec2 e2 = mesh.vertices[tri[2]] - v0;
        det = cross(e1, e2);
        // J = [e1 | e2]; J^{-T} = (1/det) [[e2.y, -e1.y], [-e2.x, e1.x]]
        inv_t[0][0] = e2.y / det;
        inv_t[0][1] = -e1.y / det;
        inv_t[1][0] = -e2.x / det;
        inv_t[1][1] = e1.x / det;
    }

    Vec2 map(const Vec2& xi, const Mesh& mesh, int t) const {
        const auto& tri = mesh.triangles[t];
        const Vec2 e1 = mesh.vertices[tri[1]] - v0;
        const Vec2 e2 = mesh.vertices[tri[2]] - v0;
        return v0 + e1 * xi.x + e2 * xi.y;
    }

    Vec2 physical_grad(const Vec2& g) const {
        return {inv_t[0][0] * g.x + inv_t[0][1] * g.y, inv_t[1][0] * g.x + inv_t[1][1] * g.y};
    }
};

int scalar_dof_count(const Mesh& mesh, Space space) {
    return space == Space::P1 ? mesh.n_vertices() : mesh.n_vertices() + mesh.n_edges();
}

}  // namespace

SparseMatrix assemble_mass(const Mesh& mesh, Space space, double coefficient) {
    const Space scalar_space = (space == Space::P2Vec) ? Space::P2 : space;
    const DofMap dofs(mesh, scalar_space);
    const ElementBasis basis(scalar_space, triangle_rule(4));
    const int nl = basis.element.node_count();

    const int n_scalar = dofs.n_dofs();
    const bool vec = (space == Space::P2Vec);
    SparseBuilder builder(vec ? 2 * n_scalar : n_scalar, vec ? 2 * n_scalar : n_scalar);
    builder.reserve(static_cast<std::size_t>(mesh.n_triangles()) * nl * nl * (vec ? 2 : 1));

    std::vector<double> local(static_cast<std::size_t>(nl) * nl);
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const CellGeometry geo(mesh, t);
        std::fill(local.begin(), local.end(), 0.0);
        for (int q = 0; q < basis.rule.size(); ++q) {
            const double w = basis.rule.weights[q] * geo.det * coefficient;
            const auto& phi = basis.values[q];
            for (int i = 0; i < nl; ++i) {
                for (int j = 0; j < nl; ++j) local[i * nl + j] += w * phi[i] * phi[j];
            }
        }
        const int* gd = dofs.cell_dofs(t);
        for (int i = 0; i < nl; ++i) {
            for (int j = 0; j < nl; ++j) {
                builder.add(gd[i], gd[j], local[i * nl + j]);
                if (vec) builder.add(n_scalar + gd[i], n_scalar + gd[j], local[i * nl + j]);
            }
        }
    }
    return builder.build();
}

SparseMatrix assemble_weighted_stiffness(const Mesh& mesh, const Tensor2& tensor) {
    if (!tensor.is_spd(1e-12)) {
        throw std::invalid_argument("assemble_weighted_stiffness: tensor must be SPD");
    }
    const DofMap dofs(mesh, Space::P1);
    const ElementBasis basis(Space::P1, triangle_rule(2));
    const int nl = 3;

    SparseBuilder builder(dofs.n_dofs(), dofs.n_dofs());
    builder.reserve(static_cast<std::size_t>(mesh.n_triangles()) * nl * nl);
    std::vector<Vec2> grads(nl);
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const CellGeometry geo(mesh, t);
        const int* gd = dofs.cell_dofs(t);
        for (int q = 0; q < basis.rule.size(); ++q) {
            const double w = basis.rule.weights[q] * geo.det;
            for (int i = 0; i < nl; ++i) grads[i] = geo.physical_grad(basis.ref_grads[q][i]);
            for (int i = 0; i < nl; ++i) {
                for (int j = 0; j < nl; ++j) {
                    builder.add(gd[i], gd[j], w * grads[i].dot(tensor.apply(grads[j])));
                }
            }
        }
    }
    return builder.build();
}

SparseMatrix assemble_elasticity(const Mesh& mesh, double mu, double lambda) {
    if (!(mu > 0.0) || lambda < 0.0) {
        throw std::invalid_argument("assemble_elasticity: require mu > 0 and lambda >= 0");
    }
    const DofMap dofs(mesh, Space::P2Vec);
    const ElementBasis basis(Space::P2, triangle_rule(4));
    const int nl = 6;

    SparseBuilder builder(dofs.n_dofs(), dofs.n_dofs());
    builder.reserve(static_cast<std::size_t>(mesh.n_triangles()) * 4 * nl * nl);
    std::vector<Vec2> grads(nl);
    // Entry for test (d,i), trial (c,j):
    //   mu [δ_cd ∇φ_i·∇φ_j + (∂_d φ_j)(∂_c φ_i)] + λ (∂_c φ_j)(∂_d φ_i)
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const CellGeometry geo(mesh, t);
        const int* gd = dofs.cell_dofs(t);
        for (int q = 0; q < basis.rule.size(); ++q) {
            const double w = basis.rule.weights[q] * geo.det;
            for (int i = 0; i < nl; ++i) grads[i] = geo.physical_grad(basis.ref_grads[q][i]);
            for (int d = 0; d < 2; ++d) {
                for (int i = 0; i < nl; ++i) {
                    const double gi[2] = {grads[i].x, grads[i].y};
                    for (int c = 0; c < 2; ++c) {
                        for (int j = 0; j < nl; ++j) {
                            const double gj[2] = {grads[j].x, grads[j].y};
                            double entry = mu * gj[d] * gi[c] + lambda * gj[c] * gi[d];
                            if (c == d) entry += mu * grads[i].dot(grads[j]);
                            builder.add(gd[d * nl + i], gd[c * nl + j], w * entry);
                        }
                    }
                }
            }
        }
    }
    return builder.build();
}

SparseMatrix assemble_div_coupling(const Mesh& mesh) {
    const DofMap p_dofs(mesh, Space::P1);
    const DofMap u_dofs(mesh, Space::P2Vec);
    const ElementBasis p_basis(Space::P1, triangle_rule(4));
    const ElementBasis u_basis(Space::P2, triangle_rule(4));

    SparseBuilder builder(p_dofs.n_dofs(), u_dofs.n_dofs());
    builder.reserve(static_cast<std::size_t>(mesh.n_triangles()) * 3 * 12);
    std::vector<Vec2> grads(6);
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const CellGeometry geo(mesh, t);
        const int* pg = p_dofs.cell_dofs(t);
        const int* ug = u_dofs.cell_dofs(t);
        for (int q = 0; q < p_basis.rule.size(); ++q) {
            const double w = p_basis.rule.weights[q] * geo.det;
            const auto& qval = p_basis.values[q];
            for (int j = 0; j < 6; ++j) grads[j] = geo.physical_grad(u_basis.ref_grads[q][j]);
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 6; ++j) {
                    builder.add(pg[i], ug[j], w * qval[i] * grads[j].x);
                    builder.add(pg[i], ug[6 + j], w * qval[i] * grads[j].y);
                }
            }
        }
    }
    return builder.build();
}

SparseMatrix assemble_grad_coupling(const Mesh& mesh, const Tensor2& tensor) {
    const DofMap p_dofs(mesh, Space::P1);
    const DofMap u_dofs(mesh, Space::P2Vec);
    const ElementBasis p_basis(Space::P1, triangle_rule(4));
    const ElementBasis u_basis(Space::P2, triangle_rule(4));

    SparseBuilder builder(u_dofs.n_dofs(), p_dofs.n_dofs());
    builder.reserve(static_cast<std::size_t>(mesh.n_triangles()) * 12 * 3);
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const CellGeometry geo(mesh, t);
        const int* pg = p_dofs.cell_dofs(t);
        const int* ug = u_dofs.cell_dofs(t);
        for (int q = 0; q < p_basis.rule.size(); ++q) {
            const double w = p_basis.rule.weights[q] * geo.det;
            const auto& phi = u_basis.values[q];
            for (int j = 0; j < 3; ++j) {
                const Vec2 a_grad = tensor.apply(geo.physical_grad(p_basis.ref_grads[q][j]));
                for (int i = 0; i < 6; ++i) {
                    builder.add(ug[i], pg[j], w * phi[i] * a_grad.x);
                    builder.add(ug[6 + i], pg[j], w * phi[i] * a_grad.y);
                }
            }
        }
    }
    return builder.build();
}

GradGradComponents assemble_gradgrad_components(const Mesh& mesh) {
    const DofMap dofs(mesh, Space::P1);
    const ElementBasis basis(Space::P1, triangle_rule(2));

    GradGradComponents out;
    SparseBuilder builders[2][2] = {{{dofs.n_dofs(), dofs.n_dofs()}, {dofs.n_dofs(), dofs.n_dofs()}},
                                    {{dofs.n_dofs(), dofs.n_dofs()}, {dofs.n_dofs(), dofs.n_dofs()}}};
    std::vector<Vec2> grads(3);
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const CellGeometry geo(mesh, t);
        const int* gd = dofs.cell_dofs(t);
        for (int q = 0; q < basis.rule.size(); ++q) {
            const double w = basis.rule.weights[q] * geo.det;
            for (int i = 0; i < 3; ++i) grads[i] = geo.physical_grad(basis.ref_grads[q][i]);
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) {
                    const double gi[2] = {grads[i].x, grads[i].y};
                    const double gj[2] = {grads[j].x, grads[j].y};
                    for (int a = 0; a < 2; ++a) {
                        for (int b = 0; b < 2; ++b) {
                            builders[a][b].add(gd[i], gd[j], w * gi[b] * gj[a]);
                        }
                    }
                }
            }
        }
    }
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) out.k[a][b] = builders[a][b].build();
    }
    return out;
}

Vector GradGradComponents::apply(const Tensor2& tensor, const Vector& p) const {
    Vector out(k[0][0].rows(), 0.0);
    Vector tmp;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            const double c = tensor(b, a);
            if (c == 0.0) continue;
            k[a][b].apply(p, tmp);
            axpy(c, tmp, out);
        }
    }
    return out;
}

VectorGradComponents assemble_vector_grad_components(const Mesh& mesh) {
    const DofMap p_dofs(mesh, Space::P1);
    const DofMap u_dofs(mesh, Space::P2Vec);
    const ElementBasis p_basis(Space::P1, triangle_rule(4));
    const ElementBasis u_basis(Space::P2, triangle_rule(4));

    VectorGradComponents out;
    SparseBuilder builders[2][2] = {
        {{u_dofs.n_dofs(), p_dofs.n_dofs()}, {u_dofs.n_dofs(), p_dofs.n_dofs()}},
        {{u_dofs.n_dofs(), p_dofs.n_dofs()}, {u_dofs.n_dofs(), p_dofs.n_dofs()}}};
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const CellGeometry geo(mesh, t);
        const int* pg = p_dofs.cell_dofs(t);
        const int* ug = u_dofs.cell_dofs(t);
        for (int q = 0; q < p_basis.rule.size(); ++q) {
            const double w = p_basis.rule.weights[q] * geo.det;
            const auto& phi = u_basis.values[q];
            for (int j = 0; j < 3; ++j) {
                const Vec2 gq = geo.physical_grad(p_basis.ref_grads[q][j]);
                const double gqc[2] = {gq.x, gq.y};
                for (int i = 0; i < 6; ++i) {
                    for (int a = 0; a < 2; ++a) {
                        for (int b = 0; b < 2; ++b) {
                            builders[a][b].add(ug[a * 6 + i], pg[j], w * phi[i] * gqc[b]);
                        }
                    }
                }
            }
        }
    }
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) out.g[a][b] = builders[a][b].build();
    }
    return out;
}

Vector VectorGradComponents::apply(const Tensor2& tensor, const Vector& p) const {
    Vector out(g[0][0].rows(), 0.0);
    Vector tmp;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            const double c = tensor(a, b);
            if (c == 0.0) continue;
            g[a][b].apply(p, tmp);
            axpy(c, tmp, out);
        }
    }
    return out;
}

Vector assemble_load(const Mesh& mesh, Space space, const ScalarField& f, int quad_degree) {
    if (space == Space::P2Vec) {
        throw std::invalid_argument("assemble_load: scalar field on vector space");
    }
    const DofMap dofs(mesh, space);
    const ElementBasis basis(space, triangle_rule(quad_degree));
    const int nl = basis.element.node_count();

    Vector load(dofs.n_dofs(), 0.0);
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const CellGeometry geo(mesh, t);
        const int* gd = dofs.cell_dofs(t);
        for (int q = 0; q < basis.rule.size(); ++q) {
            const double w = basis.rule.weights[q] * geo.det;
            const double fq = f(geo.map(basis.rule.points[q], mesh, t));
            for (int i = 0; i < nl; ++i) load[gd[i]] += w * fq * basis.values[q][i];
        }
    }
    return load;
}

Vector assemble_load(const Mesh& mesh, Space space, const VectorField& f, int quad_degree) {
    if (space != Space::P2Vec) {
        throw std::invalid_argument("assemble_load: vector field needs the vector space");
    }
    const DofMap dofs(mesh, Space::P2Vec);
    const ElementBasis basis(Space::P2, triangle_rule(quad_degree));
    const int nl = 6;

    Vector load(dofs.n_dofs(), 0.0);
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const CellGeometry geo(mesh, t);
        const int* gd = dofs.cell_dofs(t);
        for (int q = 0; q < basis.rule.size(); ++q) {
            const double w = basis.rule.weights[q] * geo.det;
            const Vec2 fq = f(geo.map(basis.rule.points[q], mesh, t));
            for (int i = 0; i < nl; ++i) {
                load[gd[i]] += w * fq.x * basis.values[q][i];
                load[gd[nl + i]] += w * fq.y * basis.values[q][i];
            }
        }
    }
    return load;
}

SparseMatrix apply_dirichlet(const SparseMatrix& a, const std::vector<std::uint8_t>& mask) {
    if (a.rows() != a.cols() || static_cast<int>(mask.size()) != a.rows()) {
        throw std::invalid_argument("apply_dirichlet: mask/matrix mismatch");
    }
    SparseBuilder builder(a.rows(), a.cols());
    builder.reserve(a.nnz());
    for (int r = 0; r < a.rows(); ++r) {
        if (mask[r]) {
            builder.add(r, r, 1.0);
            continue;
        }
        for (int k = a.row_offsets()[r]; k < a.row_offsets()[r + 1]; ++k) {
            const int c = a.col_indices()[k];
            if (!mask[c]) builder.add(r, c, a.values()[k]);
        }
    }
    return builder.build();
}

void apply_dirichlet_rhs(Vector& rhs, const std::vector<std::uint8_t>& mask) {
    if (rhs.size() != mask.size()) {
        throw std::invalid_argument("apply_dirichlet_rhs: mask/vector mismatch");
    }
    for (std::size_t i = 0; i < rhs.size(); ++i) {
        if (mask[i]) rhs[i] = 0.0;
    }
}

SparseMatrix zero_constrained(const SparseMatrix& a, const std::vector<std::uint8_t>& row_mask,
                              const std::vector<std::uint8_t>& col_mask) {
    if (static_cast<int>(row_mask.size()) != a.rows() ||
        static_cast<int>(col_mask.size()) != a.cols()) {
        throw std::invalid_argument("zero_constrained: mask/matrix mismatch");
    }
    SparseBuilder builder(a.rows(), a.cols());
    builder.reserve(a.nnz());
    for (int r = 0; r < a.rows(); ++r) {
        if (row_mask[r]) continue;
        for (int k = a.row_offsets()[r]; k < a.row_offsets()[r + 1]; ++k) {
            const int c = a.col_indices()[k];
            if (!col_mask[c]) builder.add(r, c, a.values()[k]);
        }
    }
    return builder.build();
}

Vector interpolate(const Mesh& mesh, Space space, const ScalarField& f) {
    if (space == Space::P2Vec) {
        throw std::invalid_argument("interpolate: scalar field on vector space");
    }
    Vector coeffs(scalar_dof_count(mesh, space), 0.0);
    for (int v = 0; v < mesh.n_vertices(); ++v) coeffs[v] = f(mesh.vertices[v]);
    if (space == Space::P2) {
        for (int e = 0; e < mesh.n_edges(); ++e) {
            coeffs[mesh.n_vertices() + e] = f(mesh.edge_midpoint(e));
        }
    }
    return coeffs;
}

Vector interpolate(const Mesh& mesh, Space space, const VectorField& f) {
    if (space != Space::P2Vec) {
        throw std::invalid_argument("interpolate: vector field needs the vector space");
    }
    const int n_scalar = scalar_dof_count(mesh, Space::P2);
    Vector coeffs(2 * n_scalar, 0.0);
    for (int v = 0; v < mesh.n_vertices(); ++v) {
        const Vec2 val = f(mesh.vertices[v]);
        coeffs[v] = val.x;
        coeffs[n_scalar + v] = val.y;
    }
    for (int e = 0; e < mesh.n_edges(); ++e) {
        const Vec2 val = f(mesh.edge_midpoint(e));
        coeffs[mesh.n_vertices() + e] = val.x;
        coeffs[n_scalar + mesh.n_vertices() + e] = val.y;
    }
    return coeffs;
}

double l2_error(const Mesh& mesh, Space space, const Vector& field, const ScalarField& exact,
                int quad_degree) {
    if (space == Space::P2Vec) {
        throw std::invalid_argument("l2_error: scalar overload on vector space");
    }
    const DofMap dofs(mesh, space);
    if (static_cast<int>(field.size()) != dofs.n_dofs()) {
        throw std::invalid_argument("l2_error: field size mismatch");
    }
    const ElementBasis basis(space, triangle_rule(quad_degree));
    const int nl = basis.element.node_count();

    double total = 0.0;
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const CellGeometry geo(mesh, t);
        const int* gd = dofs.cell_dofs(t);
        for (int q = 0; q < basis.rule.size(); ++q) {
            double uh = 0.0;
            for (int i = 0; i < nl; ++i) uh += field[gd[i]] * basis.values[q][i];
            const double diff = uh - exact(geo.map(basis.rule.points[q], mesh, t));
            total += basis.rule.weights[q] * geo.det * diff * diff;
        }
    }
    return std::sqrt(total);
}

double l2_error(const Mesh& mesh, Space space, const Vector& field, const VectorField& exact,
                int quad_degree) {
    if (space != Space::P2Vec) {
        throw std::invalid_argument("l2_error: vector overload needs the vector space");
    }
    const DofMap dofs(mesh, Space::P2Vec);
    if (static_cast<int>(field.size()) != dofs.n_dofs()) {
        throw std::invalid_argument("l2_error: field size mismatch");
    }
    const ElementBasis basis(Space::P2, triangle_rule(quad_degree));
    const int nl = 6;

    double total = 0.0;
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const CellGeometry geo(mesh, t);
        const int* gd = dofs.cell_dofs(t);
        for (int q = 0; q < basis.rule.size(); ++q) {
            Vec2 uh{0.0, 0.0};
            for (int i = 0; i < nl; ++i) {
                uh.x += field[gd[i]] * basis.values[q][i];
                uh.y += field[gd[nl + i]] * basis.values[q][i];
            }
            const Vec2 diff = uh - exact(geo.map(basis.rule.points[q], mesh, t));
            total += basis.rule.weights[q] * geo.det * diff.dot(diff);
        }
    }
    return std::sqrt(total);
}

double mass_norm(const SparseMatrix& mass, const Vector& x) {
    const double v = dot(x, mass.apply(x));
    return v > 0.0 ? std::sqrt(v) : 0.0;
}

}  // namespace dynbiot
