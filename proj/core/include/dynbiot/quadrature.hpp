#ifndef DYNBIOT_QUADRATURE_HPP
#define DYNBIOT_QUADRATURE_HPP

#include <vector>

#include "dynbiot/geometry.hpp"

namespace dynbiot {

/// Quadrature rule on the reference triangle {x >= 0, y >= 0, x + y <= 1}.
/// Weights sum to the reference area 1/2 and are all positive.
struct QuadratureRule {
    std::vector<Vec2> points;
    std::vector<double> weights;
    int degree = 0;  ///< polynomial degree integrated exactly

    int size() const { return static_cast<int>(points.size()); }
};

/// Symmetric rule with exactness at least `degree` (tabulated for degree <= 6,
/// otherwise a collapsed tensor-product Gauss rule).
QuadratureRule triangle_rule(int degree);

/// Collapsed-square (Duffy) tensor-product Gauss rule, any degree >= 0.
/// Independent of the tabulated rules; used as reference quadrature.
QuadratureRule duffy_rule(int degree);

/// Gauss-Legendre points and weights on [0, 1].
void gauss_legendre_01(int m, std::vector<double>& points, std::vector<double>& weights);

}  // namespace dynbiot

#endif
