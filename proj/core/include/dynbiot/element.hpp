#ifndef DYNBIOT_ELEMENT_HPP
#define DYNBIOT_ELEMENT_HPP

#include <array>
#include <vector>

#include "dynbiot/geometry.hpp"

namespace dynbiot {

/// Finite element space tags. P2Vec is the two-component quadratic space used
/// for the displacement in the Taylor-Hood pair, with component-major dof
/// layout (all x-components first, then all y-components).
enum class Space { P1, P2, P2Vec };

/// Number of scalar basis functions on the reference triangle.
int local_node_count(Space space);

/// Scalar reference bases on the unit triangle.
///
/// Node order: vertices (0,0), (1,0), (0,1), then for P2 the edge midpoints
/// of (v0,v1), (v1,v2), (v2,v0). Basis functions are nodal (Kronecker
/// property at their own node) and sum to one everywhere.
struct ReferenceElement {
    Space space;

    explicit ReferenceElement(Space s) : space(s) {}

    int node_count() const;

    /// Values of all scalar basis functions at reference point xi.
    void eval(const Vec2& xi, std::vector<double>& values) const;

    /// Reference-coordinate gradients of all scalar basis functions at xi.
    void eval_grad(const Vec2& xi, std::vector<Vec2>& grads) const;

    /// Reference coordinates of the nodes.
    std::vector<Vec2> nodes() const;
};

}  // namespace dynbiot

#endif
