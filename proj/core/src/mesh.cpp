#include "dynbiot/mesh.hpp"

#include <map>
#include <stdexcept>
#include <utility>

namespace dynbiot {

Mesh build_unit_square_mesh(int n) {
    if (n < 1) {
        throw std::invalid_argument("build_unit_square_mesh: n must be >= 1");
    }

    Mesh mesh;
    mesh.subdivisions = n;
    mesh.h = 1.0 / n;

    const int nv_side = n + 1;
    mesh.vertices.reserve(static_cast<std::size_t>(nv_side) * nv_side);
    for (int j = 0; j < nv_side; ++j) {
        for (int i = 0; i < nv_side; ++i) {
            mesh.vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
        }
    }
    auto vid = [nv_side](int i, int j) { return j * nv_side + i; };

    // Each grid cell splits along the lower-left-to-upper-right diagonal.
    mesh.triangles.reserve(static_cast<std::size_t>(2) * n * n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int a = vid(i, j);
            const int b = vid(i + 1, j);
            const int c = vid(i + 1, j + 1);
            const int d = vid(i, j + 1);
            mesh.triangles.push_back({a, b, c});
            mesh.triangles.push_back({a, c, d});
        }
    }

    // Deduplicate edges; key by ordered vertex pair.
    std::map<std::pair<int, int>, int> edge_id;
    std::vector<int> edge_use_count;
    mesh.triangle_edges.resize(mesh.triangles.size());
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tri = mesh.triangles[t];
        for (int k = 0; k < 3; ++k) {
            int a = tri[k];
            int b = tri[(k + 1) % 3];
            if (a > b) std::swap(a, b);
            auto [it, inserted] = edge_id.try_emplace({a, b}, mesh.n_edges());
            if (inserted) {
                mesh.edges.push_back({a, b});
                edge_use_count.push_back(0);
            }
            mesh.triangle_edges[t][k] = it->second;
            ++edge_use_count[it->second];
        }
    }

    const double tol = 0.5 * mesh.h;
    auto on_boundary = [tol](const Vec2& p) {
        return p.x < tol || p.x > 1.0 - tol || p.y < tol || p.y > 1.0 - tol;
    };

    mesh.vertex_on_boundary.resize(mesh.vertices.size());
    for (int v = 0; v < mesh.n_vertices(); ++v) {
        mesh.vertex_on_boundary[v] = on_boundary(mesh.vertices[v]) ? 1 : 0;
    }

    // A boundary edge belongs to exactly one triangle; its midpoint lies on
    // the boundary as well since edges are straight and axis-aligned there.
    mesh.edge_on_boundary.resize(mesh.edges.size());
    for (int e = 0; e < mesh.n_edges(); ++e) {
        mesh.edge_on_boundary[e] = (edge_use_count[e] == 1) ? 1 : 0;
    }

    return mesh;
}

}  // namespace dynbiot
