#ifndef DYNBIOT_DOF_MAP_HPP
#define DYNBIOT_DOF_MAP_HPP

#include <cstdint>
#include <vector>

#include "dynbiot/element.hpp"
#include "dynbiot/mesh.hpp"

namespace dynbiot {

/// Local-to-global index map for one element space on a mesh.
///
/// Scalar P1 dofs are the mesh vertices; scalar P2 dofs are vertices followed
/// by edge midpoints (global id = n_vertices + edge id). P2Vec uses
/// component-major blocks: dof (component c, scalar node j) = c*N + j with N
/// the scalar P2 count, so both components reuse the scalar sparsity pattern.
class DofMap {
  public:
    DofMap(const Mesh& mesh, Space space);

    Space space() const { return space_; }
    int n_dofs() const { return n_dofs_; }
    int dofs_per_cell() const { return dofs_per_cell_; }

    /// Global dofs of cell t; for P2Vec the 6 x-dofs precede the 6 y-dofs.
    const int* cell_dofs(int t) const { return &cell_dofs_[static_cast<std::size_t>(t) * dofs_per_cell_]; }

    const std::vector<std::uint8_t>& boundary_mask() const { return boundary_mask_; }

  private:
    Space space_;
    int n_dofs_ = 0;
    int dofs_per_cell_ = 0;
    std::vector<int> cell_dofs_;
    std::vector<std::uint8_t> boundary_mask_;
};

/// Marks the dofs whose node lies on the domain boundary.
std::vector<std::uint8_t> boundary_dof_mask(const Mesh& mesh, Space space);

}  // namespace dynbiot

#endif
