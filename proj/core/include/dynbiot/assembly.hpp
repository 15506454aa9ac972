#ifndef DYNBIOT_ASSEMBLY_HPP
#define DYNBIOT_ASSEMBLY_HPP

#include <cstdint>
#include <functional>

#include "dynbiot/dof_map.hpp"
#include "dynbiot/mesh.hpp"
#include "dynbiot/quadrature.hpp"
#include "dynbiot/sparse.hpp"

namespace dynbiot {

using ScalarField = std::function<double(const Vec2&)>;
using VectorField = std::function<Vec2(const Vec2&)>;

/// Mass matrix of ∫ c φ_i φ_j; block-diagonal per component for P2Vec.
SparseMatrix assemble_mass(const Mesh& mesh, Space space, double coefficient = 1.0);

/// P1 stiffness ∫ ∇q_i · (A ∇q_j) for an SPD tensor A.
/// Throws std::invalid_argument if the tensor is not SPD.
SparseMatrix assemble_weighted_stiffness(const Mesh& mesh, const Tensor2& tensor);

/// Vector-P2 elasticity operator 2μ ∫ ε(Φ_j):ε(Φ_i) + λ ∫ (∇·Φ_j)(∇·Φ_i).
SparseMatrix assemble_elasticity(const Mesh& mesh, double mu, double lambda);

/// Pressure-test divergence coupling; entries ∫ q_i ∇·Φ_j (P1 rows, P2Vec columns).
SparseMatrix assemble_div_coupling(const Mesh& mesh);

/// Displacement-test pressure-gradient coupling; entries ∫ Φ_i · (A ∇q_j)
/// (P2Vec rows, P1 columns). Linear in the tensor; A may be indefinite.
SparseMatrix assemble_grad_coupling(const Mesh& mesh, const Tensor2& tensor);

/// Component matrices (K_ab)_{ij} = ∫ (∂_b q_i)(∂_a q_j) over P1, so that for
/// a tensor A the contraction Σ_ab A_ba (K_ab p) equals the coefficient
/// vector of ⟨A∇p, ∇q_i⟩.
struct GradGradComponents {
    SparseMatrix k[2][2];
    Vector apply(const Tensor2& tensor, const Vector& p) const;
};
GradGradComponents assemble_gradgrad_components(const Mesh& mesh);

/// Component matrices (G_ab)_{Ij} = ∫ (Φ_I)_a (∂_b q_j): the contraction
/// Σ_ab A_ab (G_ab p) equals the coefficient vector of ⟨A∇p, Φ_I⟩.
struct VectorGradComponents {
    SparseMatrix g[2][2];
    Vector apply(const Tensor2& tensor, const Vector& p) const;
};
VectorGradComponents assemble_vector_grad_components(const Mesh& mesh);

/// Load vector ∫ f φ_i by quadrature of the stated exactness degree.
Vector assemble_load(const Mesh& mesh, Space space, const ScalarField& f, int quad_degree = 6);
Vector assemble_load(const Mesh& mesh, Space space, const VectorField& f, int quad_degree = 6);

/// Symmetric elimination of homogeneous Dirichlet dofs: constrained rows and
/// columns are zeroed, the diagonal set to one, and rhs entries zeroed.
SparseMatrix apply_dirichlet(const SparseMatrix& a, const std::vector<std::uint8_t>& mask);
void apply_dirichlet_rhs(Vector& rhs, const std::vector<std::uint8_t>& mask);

/// Zeroes off-diagonal couplings into constrained rows/columns of a
/// rectangular block whose rows (columns) carry the given masks.
SparseMatrix zero_constrained(const SparseMatrix& a, const std::vector<std::uint8_t>& row_mask,
                              const std::vector<std::uint8_t>& col_mask);

/// Nodal interpolation into the space.
Vector interpolate(const Mesh& mesh, Space space, const ScalarField& f);
Vector interpolate(const Mesh& mesh, Space space, const VectorField& f);

/// L2 norm of (field_h - exact) by quadrature.
double l2_error(const Mesh& mesh, Space space, const Vector& field, const ScalarField& exact,
                int quad_degree = 8);
double l2_error(const Mesh& mesh, Space space, const Vector& field, const VectorField& exact,
                int quad_degree = 8);

/// Discrete L2 norm sqrt(x^T M x) for a mass matrix M.
double mass_norm(const SparseMatrix& mass, const Vector& x);

}  // namespace dynbiot

#endif
