#include "dynbiot/mms.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "dynbiot/assembly.hpp"

namespace dynbiot {

namespace {

constexpr double kPi = 3.14159265358979323846;

double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                            double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol) {
    if (a == b) return 0.0;
    if (b < a) return -integrate_adaptive(f, b, a, abs_tol);
    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, abs_tol, 48);
}

ScalarConvolution::ScalarConvolution(PermeabilityKernel kernel, TimeProfile profile)
    : kernel_(kernel), profile_(profile) {
    // Accept the closed form only if it tracks the quadrature oracle.
    closed_form_ = true;
    for (double t : {0.17, 0.53, 0.92}) {
        const ConvolutionFactor cf = closed_form_at(t);
        const ConvolutionFactor qf = quadrature_at(t);
        if (std::abs(cf.value - qf.value) > 1e-10 || std::abs(cf.rate - qf.rate) > 1e-8) {
            closed_form_ = false;
            break;
        }
    }
}

ConvolutionFactor ScalarConvolution::closed_form_at(double t) const {
    const double k0 = kernel_.k0;
    ConvolutionFactor out;
    if (profile_ == TimeProfile::Linear) {
        if (kernel_.type == PermeabilityKernel::Type::Constant) {
            out.value = 0.5 * k0 * t * t;
            out.rate = k0 * t;
            return out;
        }
        const double nu = kernel_.frequency * kernel_.lag_scale;
        const double a = kernel_.amplitude;
        out.value = k0 * (0.5 * t * t + a * (t / nu - std::sin(nu * t) / (nu * nu)));
        out.rate = k0 * (t + a * (1.0 - std::cos(nu * t)) / nu);
        return out;
    }
    // profile sin(pi z)
    if (kernel_.type == PermeabilityKernel::Type::Constant) {
        out.value = k0 * (1.0 - std::cos(kPi * t)) / kPi;
        out.rate = k0 * std::sin(kPi * t);
        return out;
    }
    const double nu = kernel_.frequency * kernel_.lag_scale;
    const double a = kernel_.amplitude;
    double x, dx;  // ∫_0^t sin(nu (t-z)) sin(pi z) dz and its rate
    if (std::abs(nu - kPi) <= 1e-9 * kPi) {
        x = 0.5 * (std::sin(kPi * t) / kPi - t * std::cos(kPi * t));
        dx = 0.5 * kPi * t * std::sin(kPi * t);
    } else {
        x = 0.5 * ((std::sin(nu * t) + std::sin(kPi * t)) / (nu + kPi) -
                   (std::sin(nu * t) - std::sin(kPi * t)) / (nu - kPi));
        dx = 0.5 * ((nu * std::cos(nu * t) + kPi * std::cos(kPi * t)) / (nu + kPi) -
                    (nu * std::cos(nu * t) - kPi * std::cos(kPi * t)) / (nu - kPi));
    }
    out.value = k0 * ((1.0 - std::cos(kPi * t)) / kPi + a * x);
    out.rate = k0 * (std::sin(kPi * t) + a * dx);
    return out;
}

ConvolutionFactor ScalarConvolution::quadrature_at(double t) const {
    auto profile = [this](double z) {
        return profile_ == TimeProfile::Linear ? z : std::sin(kPi * z);
    };
    auto c_of = [&](double s) {
        return integrate_adaptive(
            [&](double z) { return kernel_.value(s - z) * profile(z); }, 0.0, s, 1e-13);
    };
    ConvolutionFactor out;
    out.value = c_of(t);
    // Fourth-order central difference of c; the integrand extends smoothly to
    // negative times so the stencil is valid near t = 0 as well.
    const double h = 1e-4;
    out.rate = (-c_of(t + 2.0 * h) + 8.0 * c_of(t + h) - 8.0 * c_of(t - h) + c_of(t - 2.0 * h)) /
               (12.0 * h);
    return out;
}

ConvolutionFactor ScalarConvolution::at(double t) const {
    return closed_form_ ? closed_form_at(t) : quadrature_at(t);
}

ConvolutionFactor convolution_scalar_factor(const PermeabilityKernel& kernel, TimeProfile profile,
                                            double t) {
    const ScalarConvolution conv(kernel, profile);
    return conv.at(t);
}

namespace {

// Spatial profile with the derivatives the sources need.
struct SpatialProfile {
    std::function<double(const Vec2&)> g, gx, gy, gxx, gxy, gyy;
};

// Time factors of the separable exact solution u = au(t) (g, g), p = ap(t) g.
struct TimeFactors {
    std::function<double(double)> au, dau, ddau, ap, dap;
    TimeProfile profile;  ///< time profile of the pressure (for the kernel factor)
};

ManufacturedCase build_separable_case(const BiotParameters& params, const SpatialProfile& s,
                                      const TimeFactors& tf, PermeabilityKernel kernel) {
    params.validate();
    ManufacturedCase mc;
    mc.params = params;
    mc.kernel = kernel.scaled_for(params);

    auto conv = std::make_shared<ScalarConvolution>(mc.kernel, tf.profile);
    mc.closed_form_convolution = conv->uses_closed_form();

    mc.u = [s, tf](const Vec2& x, double t) {
        const double v = tf.au(t) * s.g(x);
        return Vec2{v, v};
    };
    mc.u_t = [s, tf](const Vec2& x, double t) {
        const double v = tf.dau(t) * s.g(x);
        return Vec2{v, v};
    };
    mc.p = [s, tf](const Vec2& x, double t) { return tf.ap(t) * s.g(x); };

    const double inv_m = 1.0 / params.biot_modulus;
    const double alpha = params.alpha;
    const double rho = params.rho;
    const double rho_f = params.rho_f;
    const double mu = params.mu;
    const double lambda = params.lambda;

    // f2 = (1/M) p_t + alpha div(u)_t - (1/rho_f) div C, C = c(t) grad g.
    mc.f2 = [s, tf, conv, inv_m, alpha, rho_f](const Vec2& x, double t) {
        const double lap = s.gxx(x) + s.gyy(x);
        return inv_m * tf.dap(t) * s.g(x) + alpha * tf.dau(t) * (s.gx(x) + s.gy(x)) -
               conv->at(t).value / rho_f * lap;
    };

    // f1 = rho u_tt - mu lap u - (mu+lambda) grad div u + alpha grad p - C_t.
    mc.f1 = [s, tf, conv, alpha, rho, mu, lambda](const Vec2& x, double t) {
        const double lap = s.gxx(x) + s.gyy(x);
        const double common = rho * tf.ddau(t) * s.g(x) - mu * tf.au(t) * lap;
        const double rate = conv->at(t).rate;
        const double fx = common - (mu + lambda) * tf.au(t) * (s.gxx(x) + s.gxy(x)) +
                          alpha * tf.ap(t) * s.gx(x) - rate * s.gx(x);
        const double fy = common - (mu + lambda) * tf.au(t) * (s.gxy(x) + s.gyy(x)) +
                          alpha * tf.ap(t) * s.gy(x) - rate * s.gy(x);
        return Vec2{fx, fy};
    };
    return mc;
}

}  // namespace

InitialData ManufacturedCase::initial_data(const Mesh& mesh, double tau) const {
    InitialData data;
    data.u0 = interpolate(mesh, Space::P2Vec, [this](const Vec2& x) { return u(x, 0.0); });
    data.v0 = interpolate(mesh, Space::P2Vec, [this](const Vec2& x) { return u_t(x, 0.0); });
    data.p0 = interpolate(mesh, Space::P1, [this](const Vec2& x) { return p(x, 0.0); });
    data.first_step = std::make_pair(
        interpolate(mesh, Space::P2Vec, [&](const Vec2& x) { return u(x, tau); }),
        interpolate(mesh, Space::P1, [&](const Vec2& x) { return p(x, tau); }));
    return data;
}

namespace {

SpatialProfile example1_profile();
TimeFactors example1_time_factors();
SpatialProfile example2_profile();
TimeFactors example2_time_factors();

}  // namespace

ManufacturedCase example1_case(const BiotParameters& params, double k0) {
    return build_separable_case(params, example1_profile(), example1_time_factors(),
                                PermeabilityKernel::sine_modulated(k0));
}

ManufacturedCase example2_case(const BiotParameters& params, double k0) {
    return build_separable_case(params, example2_profile(), example2_time_factors(),
                                PermeabilityKernel::sine_modulated(k0));
}

ManufacturedCase example_case(int example_id, const BiotParameters& params, double k0) {
    if (example_id == 1) return example1_case(params, k0);
    if (example_id == 2) return example2_case(params, k0);
    throw std::invalid_argument("example_case: example id must be 1 or 2");
}

ManufacturedCase example_case(int example_id, const BiotParameters& params,
                              const PermeabilityKernel& kernel) {
    if (example_id == 1) {
        return build_separable_case(params, example1_profile(), example1_time_factors(), kernel);
    }
    if (example_id == 2) {
        return build_separable_case(params, example2_profile(), example2_time_factors(), kernel);
    }
    throw std::invalid_argument("example_case: example id must be 1 or 2");
}

namespace {

SpatialProfile example1_profile() {
    SpatialProfile s;
    s.g = [](const Vec2& v) { return v.x * v.y * (1.0 - v.x) * (1.0 - v.y); };
    s.gx = [](const Vec2& v) { return (1.0 - 2.0 * v.x) * v.y * (1.0 - v.y); };
    s.gy = [](const Vec2& v) { return v.x * (1.0 - v.x) * (1.0 - 2.0 * v.y); };
    s.gxx = [](const Vec2& v) { return -2.0 * v.y * (1.0 - v.y); };
    s.gyy = [](const Vec2& v) { return -2.0 * v.x * (1.0 - v.x); };
    s.gxy = [](const Vec2& v) { return (1.0 - 2.0 * v.x) * (1.0 - 2.0 * v.y); };
    return s;
}

TimeFactors example1_time_factors() {
    TimeFactors tf;
    tf.au = [](double t) { return t * t; };
    tf.dau = [](double t) { return 2.0 * t; };
    tf.ddau = [](double) { return 2.0; };
    tf.ap = [](double t) { return t; };
    tf.dap = [](double) { return 1.0; };
    tf.profile = TimeProfile::Linear;
    return tf;
}

SpatialProfile example2_profile() {
    SpatialProfile s;
    s.g = [](const Vec2& v) { return std::sin(kPi * v.x) * std::sin(kPi * v.y); };
    s.gx = [](const Vec2& v) { return kPi * std::cos(kPi * v.x) * std::sin(kPi * v.y); };
    s.gy = [](const Vec2& v) { return kPi * std::sin(kPi * v.x) * std::cos(kPi * v.y); };
    s.gxx = [](const Vec2& v) { return -kPi * kPi * std::sin(kPi * v.x) * std::sin(kPi * v.y); };
    s.gyy = [](const Vec2& v) { return -kPi * kPi * std::sin(kPi * v.x) * std::sin(kPi * v.y); };
    s.gxy = [](const Vec2& v) { return kPi * kPi * std::cos(kPi * v.x) * std::cos(kPi * v.y); };
    return s;
}

TimeFactors example2_time_factors() {
    TimeFactors tf;
    tf.au = [](double t) { return std::sin(kPi * t); };
    tf.dau = [](double t) { return kPi * std::cos(kPi * t); };
    tf.ddau = [](double t) { return -kPi * kPi * std::sin(kPi * t); };
    tf.ap = tf.au;
    tf.dap = tf.dau;
    tf.profile = TimeProfile::SinePi;
    return tf;
}

}  // namespace

}  // namespace dynbiot
