#include "dynbiot/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace dynbiot {

namespace {

// Appends the three cyclic barycentric permutations of (a, a, 1-2a).
void push_perm3(QuadratureRule& r, double a, double w) {
    const double c = 1.0 - 2.0 * a;
    r.points.push_back({a, a});
    r.points.push_back({c, a});
    r.points.push_back({a, c});
    for (int i = 0; i < 3; ++i) r.weights.push_back(w);
}

// Appends all six permutations of the barycentric triple (a, b, 1-a-b).
void push_perm6(QuadratureRule& r, double a, double b, double w) {
    const double c = 1.0 - a - b;
    r.points.push_back({a, b});
    r.points.push_back({b, a});
    r.points.push_back({a, c});
    r.points.push_back({c, a});
    r.points.push_back({b, c});
    r.points.push_back({c, b});
    for (int i = 0; i < 6; ++i) r.weights.push_back(w);
}

// Normalizes weights (tabulated relative to unit total) to reference area 1/2.
QuadratureRule scaled(QuadratureRule r, int degree) {
    for (double& w : r.weights) w *= 0.5;
    r.degree = degree;
    return r;
}

}  // namespace

void gauss_legendre_01(int m, std::vector<double>& points, std::vector<double>& weights) {
    if (m < 1) throw std::invalid_argument("gauss_legendre_01: m must be >= 1");
    points.assign(m, 0.0);
    weights.assign(m, 0.0);
    // Newton iteration on P_m over [-1, 1], then affine map to [0, 1].
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (m + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= m; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        points[i] = 0.5 * (1.0 - x);
        points[m - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[m - 1 - i] = 0.5 * w;
    }
}

QuadratureRule duffy_rule(int degree) {
    if (degree < 0) throw std::invalid_argument("duffy_rule: degree must be >= 0");
    // Collapse x = u(1-v), y = uv with Jacobian u; the Jacobian raises the
    // u-degree by one, hence m Gauss points handle degree 2m-2 integrands.
    const int m = (degree + 4) / 2;
    std::vector<double> gp, gw;
    gauss_legendre_01(m, gp, gw);

    QuadratureRule r;
    r.degree = degree;
    r.points.reserve(static_cast<std::size_t>(m) * m);
    r.weights.reserve(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const double u = gp[i], v = gp[j];
            r.points.push_back({u * (1.0 - v), u * v});
            r.weights.push_back(gw[i] * gw[j] * u);
        }
    }
    return r;
}

QuadratureRule triangle_rule(int degree) {
    if (degree < 0) throw std::invalid_argument("triangle_rule: degree must be >= 0");
    QuadratureRule r;
    switch (degree) {
        case 0:
        case 1:
            r.points.push_back({1.0 / 3.0, 1.0 / 3.0});
            r.weights.push_back(1.0);
            return scaled(r, 1);
        case 2:
            push_perm3(r, 1.0 / 6.0, 1.0 / 3.0);
            return scaled(r, 2);
        case 3:
        case 4:
            push_perm3(r, 0.445948490915965, 0.223381589678011);
            push_perm3(r, 0.091576213509771, 0.109951743655322);
            return scaled(r, 4);
        case 5:
        case 6:
            push_perm3(r, 0.063089014491502, 0.050844906370207);
            push_perm3(r, 0.249286745170910, 0.116786275726379);
            push_perm6(r, 0.053145049844816, 0.310352451033785, 0.082851075618374);
            return scaled(r, 6);
        default:
            return duffy_rule(degree);
    }
}

}  // namespace dynbiot
