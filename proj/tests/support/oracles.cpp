#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace dynbiot::test {

Matrix zeros(int rows, int cols) {
    return Matrix(static_cast<std::size_t>(rows), std::vector<double>(cols, 0.0));
}

Matrix to_dense(const SparseMatrix& a) {
    Matrix d = zeros(a.rows(), a.cols());
    for (int r = 0; r < a.rows(); ++r) {
        for (int k = a.row_offsets()[r]; k < a.row_offsets()[r + 1]; ++k) {
            d[r][a.col_indices()[k]] += a.values()[k];
        }
    }
    return d;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.size() != b.size()) throw std::invalid_argument("max_abs_diff: shape");
    double m = 0.0;
    for (std::size_t r = 0; r < a.size(); ++r) {
        if (a[r].size() != b[r].size()) throw std::invalid_argument("max_abs_diff: shape");
        for (std::size_t c = 0; c < a[r].size(); ++c) {
            m = std::max(m, std::abs(a[r][c] - b[r][c]));
        }
    }
    return m;
}

std::vector<double> dense_apply(const Matrix& a, const std::vector<double>& x) {
    std::vector<double> y(a.size(), 0.0);
    for (std::size_t r = 0; r < a.size(); ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < x.size(); ++c) s += a[r][c] * x[c];
        y[r] = s;
    }
    return y;
}

std::vector<double> dense_solve(Matrix a, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        if (a[pivot][col] == 0.0) throw std::runtime_error("dense_solve: singular");
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (int r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < n; ++c) s -= a[r][c] * b[c];
        b[r] = s / a[r][r];
    }
    return b;
}

double oracle_p1_value(int i, double x, double y) {
    switch (i) {
        case 0: return 1.0 - x - y;
        case 1: return x;
        case 2: return y;
    }
    throw std::invalid_argument("oracle_p1_value: index");
}

void oracle_p1_grad(int i, double g[2]) {
    switch (i) {
        case 0: g[0] = -1.0; g[1] = -1.0; return;
        case 1: g[0] = 1.0; g[1] = 0.0; return;
        case 2: g[0] = 0.0; g[1] = 1.0; return;
    }
    throw std::invalid_argument("oracle_p1_grad: index");
}

double oracle_p2_value(int i, double x, double y) {
    // Written directly in (x, y), not via barycentric shorthand.
    switch (i) {
        case 0: return 1.0 - 3.0 * x - 3.0 * y + 2.0 * x * x + 4.0 * x * y + 2.0 * y * y;
        case 1: return 2.0 * x * x - x;
        case 2: return 2.0 * y * y - y;
        case 3: return 4.0 * x - 4.0 * x * x - 4.0 * x * y;
        case 4: return 4.0 * x * y;
        case 5: return 4.0 * y - 4.0 * x * y - 4.0 * y * y;
    }
    throw std::invalid_argument("oracle_p2_value: index");
}

void oracle_p2_grad(int i, double x, double y, double g[2]) {
    switch (i) {
        case 0: g[0] = -3.0 + 4.0 * x + 4.0 * y; g[1] = -3.0 + 4.0 * x + 4.0 * y; return;
        case 1: g[0] = 4.0 * x - 1.0; g[1] = 0.0; return;
        case 2: g[0] = 0.0; g[1] = 4.0 * y - 1.0; return;
        case 3: g[0] = 4.0 - 8.0 * x - 4.0 * y; g[1] = -4.0 * x; return;
        case 4: g[0] = 4.0 * y; g[1] = 4.0 * x; return;
        case 5: g[0] = -4.0 * y; g[1] = 4.0 - 4.0 * x - 8.0 * y; return;
    }
    throw std::invalid_argument("oracle_p2_grad: index");
}

namespace {

// Gauss-Legendre on [0,1] by bisection-free Newton on the recurrence.
void gauss01(int m, std::vector<double>& x, std::vector<double>& w) {
    x.assign(m, 0.0);
    w.assign(m, 0.0);
    for (int i = 0; i < m; ++i) {
        double t = std::cos(M_PI * (i + 0.75) / (m + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= m; ++k) {
                const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        x[i] = 0.5 * (1.0 + t);
        w[i] = 1.0 / ((1.0 - t * t) * dp * dp);
    }
}

}  // namespace

OracleQuadrature oracle_quadrature(int degree) {
    const int m = degree / 2 + 2;
    std::vector<double> gx, gw;
    gauss01(m, gx, gw);
    OracleQuadrature q;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            // Collapse the unit square onto the triangle; Jacobian u.
            const double u = gx[i], v = gx[j];
            q.x.push_back(u * (1.0 - v));
            q.y.push_back(u * v);
            q.w.push_back(gw[i] * gw[j] * u);
        }
    }
    return q;
}

namespace {

struct TriGeom {
    double x0, y0;
    double j[2][2];    // [e1 | e2]
    double det;
    double jinv_t[2][2];

    TriGeom(const Mesh& mesh, int t) {
        const auto& tri = mesh.triangles[t];
        const Vec2 a = mesh.vertices[tri[0]];
        const Vec2 b = mesh.vertices[tri[1]];
        const Vec2 c = mesh.vertices[tri[2]];
        x0 = a.x;
        y0 = a.y;
        j[0][0] = b.x - a.x;
        j[1][0] = b.y - a.y;
        j[0][1] = c.x - a.x;
        j[1][1] = c.y - a.y;
        det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        jinv_t[0][0] = j[1][1] / det;
        jinv_t[0][1] = -j[1][0] / det;
        jinv_t[1][0] = -j[0][1] / det;
        jinv_t[1][1] = j[0][0] / det;
    }

    void physical(double xi, double eta, double& px, double& py) const {
        px = x0 + j[0][0] * xi + j[0][1] * eta;
        py = y0 + j[1][0] * xi + j[1][1] * eta;
    }

    void push_grad(const double ref[2], double out[2]) const {
        out[0] = jinv_t[0][0] * ref[0] + jinv_t[0][1] * ref[1];
        out[1] = jinv_t[1][0] * ref[0] + jinv_t[1][1] * ref[1];
    }
};

// Global dof ids mirroring the library convention, recomputed from mesh data.
void p2_cell_dofs(const Mesh& mesh, int t, int dofs[6]) {
    for (int k = 0; k < 3; ++k) dofs[k] = mesh.triangles[t][k];
    for (int k = 0; k < 3; ++k) dofs[3 + k] = mesh.n_vertices() + mesh.triangle_edges[t][k];
}

}  // namespace

Matrix dense_mass(const Mesh& mesh, bool quadratic, double coefficient) {
    const int n = quadratic ? mesh.n_vertices() + mesh.n_edges() : mesh.n_vertices();
    const int nl = quadratic ? 6 : 3;
    const OracleQuadrature q = oracle_quadrature(quadratic ? 4 : 2);
    Matrix m = zeros(n, n);
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const TriGeom geo(mesh, t);
        int dofs[6];
        if (quadratic) {
            p2_cell_dofs(mesh, t, dofs);
        } else {
            for (int k = 0; k < 3; ++k) dofs[k] = mesh.triangles[t][k];
        }
        for (std::size_t p = 0; p < q.w.size(); ++p) {
            const double w = q.w[p] * geo.det * coefficient;
            for (int i = 0; i < nl; ++i) {
                const double vi = quadratic ? oracle_p2_value(i, q.x[p], q.y[p])
                                            : oracle_p1_value(i, q.x[p], q.y[p]);
                for (int j = 0; j < nl; ++j) {
                    const double vj = quadratic ? oracle_p2_value(j, q.x[p], q.y[p])
                                                : oracle_p1_value(j, q.x[p], q.y[p]);
                    m[dofs[i]][dofs[j]] += w * vi * vj;
                }
            }
        }
    }
    return m;
}

Matrix dense_vector_mass(const Mesh& mesh, double coefficient) {
    const Matrix scalar = dense_mass(mesh, true, coefficient);
    const int n = static_cast<int>(scalar.size());
    Matrix m = zeros(2 * n, 2 * n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            m[r][c] = scalar[r][c];
            m[n + r][n + c] = scalar[r][c];
        }
    }
    return m;
}

Matrix dense_stiffness(const Mesh& mesh, const double tensor[2][2]) {
    const int n = mesh.n_vertices();
    const OracleQuadrature q = oracle_quadrature(2);
    Matrix m = zeros(n, n);
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const TriGeom geo(mesh, t);
        const auto& tri = mesh.triangles[t];
        double grads[3][2];
        for (int i = 0; i < 3; ++i) {
            double ref[2];
            oracle_p1_grad(i, ref);
            geo.push_grad(ref, grads[i]);
        }
        double area = 0.0;
        for (std::size_t p = 0; p < q.w.size(); ++p) area += q.w[p] * geo.det;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                double av[2] = {tensor[0][0] * grads[j][0] + tensor[0][1] * grads[j][1],
                                tensor[1][0] * grads[j][0] + tensor[1][1] * grads[j][1]};
                m[tri[i]][tri[j]] += area * (grads[i][0] * av[0] + grads[i][1] * av[1]);
            }
        }
    }
    return m;
}

Matrix dense_elasticity(const Mesh& mesh, double mu, double lambda) {
    const int n_scalar = mesh.n_vertices() + mesh.n_edges();
    const OracleQuadrature q = oracle_quadrature(4);
    Matrix m = zeros(2 * n_scalar, 2 * n_scalar);
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const TriGeom geo(mesh, t);
        int dofs[6];
        p2_cell_dofs(mesh, t, dofs);
        for (std::size_t p = 0; p < q.w.size(); ++p) {
            const double w = q.w[p] * geo.det;
            double g[6][2];
            for (int i = 0; i < 6; ++i) {
                double ref[2];
                oracle_p2_grad(i, q.x[p], q.y[p], ref);
                geo.push_grad(ref, g[i]);
            }
            // Assemble from strain tensors directly: for trial (c,j) the
            // strain is eps_kl = (d_k u_l + d_l u_k)/2 with u = phi_j e_c.
            for (int c = 0; c < 2; ++c) {
                for (int j = 0; j < 6; ++j) {
                    double eps_t[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
                    for (int k = 0; k < 2; ++k) {
                        eps_t[k][c] += 0.5 * g[j][k];
                        eps_t[c][k] += 0.5 * g[j][k];
                    }
                    const double div_t = g[j][c];
                    for (int d = 0; d < 2; ++d) {
                        for (int i = 0; i < 6; ++i) {
                            double eps_s[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
                            for (int k = 0; k < 2; ++k) {
                                eps_s[k][d] += 0.5 * g[i][k];
                                eps_s[d][k] += 0.5 * g[i][k];
                            }
                            const double div_s = g[i][d];
                            double contract = 0.0;
                            for (int k = 0; k < 2; ++k) {
                                for (int l = 0; l < 2; ++l) contract += eps_t[k][l] * eps_s[k][l];
                            }
                            m[d * n_scalar + dofs[i]][c * n_scalar + dofs[j]] +=
                                w * (2.0 * mu * contract + lambda * div_t * div_s);
                        }
                    }
                }
            }
        }
    }
    return m;
}

Matrix dense_div_coupling(const Mesh& mesh) {
    const int n_scalar = mesh.n_vertices() + mesh.n_edges();
    const OracleQuadrature q = oracle_quadrature(4);
    Matrix m = zeros(mesh.n_vertices(), 2 * n_scalar);
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const TriGeom geo(mesh, t);
        const auto& tri = mesh.triangles[t];
        int dofs[6];
        p2_cell_dofs(mesh, t, dofs);
        for (std::size_t p = 0; p < q.w.size(); ++p) {
            const double w = q.w[p] * geo.det;
            for (int i = 0; i < 3; ++i) {
                const double qi = oracle_p1_value(i, q.x[p], q.y[p]);
                for (int j = 0; j < 6; ++j) {
                    double ref[2], g[2];
                    oracle_p2_grad(j, q.x[p], q.y[p], ref);
                    geo.push_grad(ref, g);
                    m[tri[i]][dofs[j]] += w * qi * g[0];
                    m[tri[i]][n_scalar + dofs[j]] += w * qi * g[1];
                }
            }
        }
    }
    return m;
}

Matrix dense_grad_coupling(const Mesh& mesh, const double tensor[2][2]) {
    const int n_scalar = mesh.n_vertices() + mesh.n_edges();
    const OracleQuadrature q = oracle_quadrature(4);
    Matrix m = zeros(2 * n_scalar, mesh.n_vertices());
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const TriGeom geo(mesh, t);
        const auto& tri = mesh.triangles[t];
        int dofs[6];
        p2_cell_dofs(mesh, t, dofs);
        for (std::size_t p = 0; p < q.w.size(); ++p) {
            const double w = q.w[p] * geo.det;
            for (int j = 0; j < 3; ++j) {
                double ref[2], g[2];
                oracle_p1_grad(j, ref);
                geo.push_grad(ref, g);
                const double ag[2] = {tensor[0][0] * g[0] + tensor[0][1] * g[1],
                                      tensor[1][0] * g[0] + tensor[1][1] * g[1]};
                for (int i = 0; i < 6; ++i) {
                    const double phi = oracle_p2_value(i, q.x[p], q.y[p]);
                    m[dofs[i]][tri[j]] += w * phi * ag[0];
                    m[n_scalar + dofs[i]][tri[j]] += w * phi * ag[1];
                }
            }
        }
    }
    return m;
}

std::vector<double> dense_load_p1(const Mesh& mesh,
                                  const std::function<double(double, double)>& f, int degree) {
    const OracleQuadrature q = oracle_quadrature(degree);
    std::vector<double> load(mesh.n_vertices(), 0.0);
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const TriGeom geo(mesh, t);
        const auto& tri = mesh.triangles[t];
        for (std::size_t p = 0; p < q.w.size(); ++p) {
            double px, py;
            geo.physical(q.x[p], q.y[p], px, py);
            const double w = q.w[p] * geo.det * f(px, py);
            for (int i = 0; i < 3; ++i) load[tri[i]] += w * oracle_p1_value(i, q.x[p], q.y[p]);
        }
    }
    return load;
}

double fd_first(const std::function<double(double)>& f, double x, double h) {
    return (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h);
}

double fd_second(const std::function<double(double)>& f, double x, double h) {
    return (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h)) /
           (12.0 * h * h);
}

double oracle_integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    if (b < a) return -oracle_integrate(f, b, a, tol);
    std::vector<double> gx, gw;
    gauss01(8, gx, gw);
    double prev = 0.0;
    for (int panels = 1; panels <= 4096; panels *= 2) {
        double total = 0.0;
        const double width = (b - a) / panels;
        for (int k = 0; k < panels; ++k) {
            const double left = a + k * width;
            for (std::size_t i = 0; i < gx.size(); ++i) {
                total += gw[i] * width * f(left + gx[i] * width);
            }
        }
        if (panels > 1 && std::abs(total - prev) <= tol) return total;
        prev = total;
    }
    return prev;
}

}  // namespace dynbiot::test
