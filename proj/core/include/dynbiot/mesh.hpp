#ifndef DYNBIOT_MESH_HPP
#define DYNBIOT_MESH_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "dynbiot/geometry.hpp"

namespace dynbiot {

/// Conforming triangulation of the unit square (0,1)^2.
///
/// Built by subdividing an n x n grid of cells, each split along the
/// lower-left-to-upper-right diagonal into two counter-clockwise triangles.
/// Edges are deduplicated and indexed; edge midpoints double as the extra
/// nodes of quadratic elements, so a P2 scalar node set is
/// {vertices} followed by {edge midpoints} with node id = n_vertices + edge id.
struct Mesh {
    int subdivisions = 0;  ///< cells per side (n)
    double h = 0.0;        ///< grid spacing, 1/n

    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> triangles;  ///< CCW vertex triples
    std::vector<std::array<int, 2>> edges;      ///< deduplicated vertex pairs, lo < hi

    /// Per-triangle global edge ids for local edges (v0,v1), (v1,v2), (v2,v0).
    std::vector<std::array<int, 3>> triangle_edges;

    std::vector<std::uint8_t> vertex_on_boundary;
    std::vector<std::uint8_t> edge_on_boundary;

    int n_vertices() const { return static_cast<int>(vertices.size()); }
    int n_triangles() const { return static_cast<int>(triangles.size()); }
    int n_edges() const { return static_cast<int>(edges.size()); }

    Vec2 edge_midpoint(int e) const {
        const auto& [a, b] = edges[e];
        return (vertices[a] + vertices[b]) * 0.5;
    }

    /// Twice the signed area of triangle t (positive for CCW orientation).
    double jacobian_det(int t) const {
        const auto& tri = triangles[t];
        return cross(vertices[tri[1]] - vertices[tri[0]], vertices[tri[2]] - vertices[tri[0]]);
    }

    double triangle_area(int t) const { return 0.5 * jacobian_det(t); }
};

/// Builds the structured triangulation with n subdivisions per side.
/// Throws std::invalid_argument for n < 1.
Mesh build_unit_square_mesh(int n);

}  // namespace dynbiot

#endif
