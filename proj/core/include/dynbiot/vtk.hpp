#ifndef DYNBIOT_VTK_HPP
#define DYNBIOT_VTK_HPP

#include <string>

#include "dynbiot/mesh.hpp"
#include "dynbiot/sparse.hpp"

namespace dynbiot {

/// Writes a legacy ASCII VTK unstructured grid with vertex data: scalar
/// `pressure` (P1 coefficients), vector `displacement` and scalar
/// `displacement_magnitude` (P2Vec coefficients restricted to vertex nodes).
/// Throws std::runtime_error on I/O failure.
void export_vtk(const Mesh& mesh, const Vector& displacement, const Vector& pressure,
                const std::string& path);

}  // namespace dynbiot

#endif
