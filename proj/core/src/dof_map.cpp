#include "dynbiot/dof_map.hpp"

namespace dynbiot {

std::vector<std::uint8_t> boundary_dof_mask(const Mesh& mesh, Space space) {
    const int nv = mesh.n_vertices();
    const int ne = mesh.n_edges();
    std::vector<std::uint8_t> mask;
    if (space == Space::P1) {
        mask.assign(mesh.vertex_on_boundary.begin(), mesh.vertex_on_boundary.end());
        return mask;
    }
    mask.resize(static_cast<std::size_t>(nv) + ne);
    for (int v = 0; v < nv; ++v) mask[v] = mesh.vertex_on_boundary[v];
    for (int e = 0; e < ne; ++e) mask[nv + e] = mesh.edge_on_boundary[e];
    if (space == Space::P2) return mask;

    // P2Vec: constrain both components of each boundary node.
    std::vector<std::uint8_t> vec_mask(2 * mask.size());
    for (std::size_t i = 0; i < mask.size(); ++i) {
        vec_mask[i] = mask[i];
        vec_mask[mask.size() + i] = mask[i];
    }
    return vec_mask;
}

DofMap::DofMap(const Mesh& mesh, Space space) : space_(space) {
    const int nv = mesh.n_vertices();
    const int ne = mesh.n_edges();
    const int nt = mesh.n_triangles();
    const int scalar_count = (space == Space::P1) ? nv : nv + ne;
    n_dofs_ = (space == Space::P2Vec) ? 2 * scalar_count : scalar_count;
    dofs_per_cell_ = (space == Space::P1) ? 3 : (space == Space::P2 ? 6 : 12);

    cell_dofs_.resize(static_cast<std::size_t>(nt) * dofs_per_cell_);
    for (int t = 0; t < nt; ++t) {
        int* dst = &cell_dofs_[static_cast<std::size_t>(t) * dofs_per_cell_];
        const auto& tri = mesh.triangles[t];
        dst[0] = tri[0];
        dst[1] = tri[1];
        dst[2] = tri[2];
        if (space == Space::P1) continue;
        for (int k = 0; k < 3; ++k) dst[3 + k] = nv + mesh.triangle_edges[t][k];
        if (space == Space::P2Vec) {
            for (int k = 0; k < 6; ++k) dst[6 + k] = scalar_count + dst[k];
        }
    }

    boundary_mask_ = boundary_dof_mask(mesh, space);
}

}  // namespace dynbiot
