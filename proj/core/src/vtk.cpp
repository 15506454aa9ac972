#include "dynbiot/vtk.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace dynbiot {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void export_vtk(const Mesh& mesh, const Vector& displacement, const Vector& pressure,
                const std::string& path) {
    const int nv = mesh.n_vertices();
    const int nt = mesh.n_triangles();
    const int n_scalar = nv + mesh.n_edges();
    if (static_cast<int>(pressure.size()) != nv ||
        static_cast<int>(displacement.size()) != 2 * n_scalar) {
        throw std::invalid_argument("export_vtk: field sizes do not match the mesh");
    }

    std::ofstream out(path);
    if (!out) throw std::runtime_error("export_vtk: cannot open " + path);

    out << "# vtk DataFile Version 3.0\n";
    out << "dynbiot fields\n";
    out << "ASCII\n";
    out << "DATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << nv << " double\n";
    for (const auto& v : mesh.vertices) {
        out << fmt(v.x) << " " << fmt(v.y) << " 0\n";
    }
    out << "CELLS " << nt << " " << 4 * nt << "\n";
    for (const auto& tri : mesh.triangles) {
        out << "3 " << tri[0] << " " << tri[1] << " " << tri[2] << "\n";
    }
    out << "CELL_TYPES " << nt << "\n";
    for (int t = 0; t < nt; ++t) out << "5\n";

    out << "POINT_DATA " << nv << "\n";
    out << "SCALARS pressure double 1\n";
    out << "LOOKUP_TABLE default\n";
    for (int v = 0; v < nv; ++v) out << fmt(pressure[v]) << "\n";

    // Quadratic displacement subsampled at vertex nodes.
    out << "VECTORS displacement double\n";
    for (int v = 0; v < nv; ++v) {
        out << fmt(displacement[v]) << " " << fmt(displacement[n_scalar + v]) << " 0\n";
    }
    out << "SCALARS displacement_magnitude double 1\n";
    out << "LOOKUP_TABLE default\n";
    for (int v = 0; v < nv; ++v) {
        out << fmt(std::hypot(displacement[v], displacement[n_scalar + v])) << "\n";
    }
    if (!out) throw std::runtime_error("export_vtk: write failure on " + path);
}

}  // namespace dynbiot
