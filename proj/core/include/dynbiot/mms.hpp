#ifndef DYNBIOT_MMS_HPP
#define DYNBIOT_MMS_HPP

#include <functional>

#include "dynbiot/biot.hpp"
#include "dynbiot/mesh.hpp"
#include "dynbiot/schemes.hpp"

namespace dynbiot {

/// Adaptive Simpson quadrature to an absolute tolerance. Reversed limits
/// negate the result.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol = 1e-12);

/// Separable-in-time pressure profiles the scalar convolution factors cover.
enum class TimeProfile { Linear, SinePi };

struct ConvolutionFactor {
    double value = 0.0;  ///< c(t) = ∫_0^t A(s(t-z)) profile(z) dz
    double rate = 0.0;   ///< dc/dt
};

/// Scalar convolution factor for one kernel/profile pair. Closed forms are
/// validated against the adaptive-quadrature oracle on construction; if the
/// validation fails the quadrature path is used throughout.
class ScalarConvolution {
  public:
    ScalarConvolution(PermeabilityKernel kernel, TimeProfile profile);

    ConvolutionFactor at(double t) const;
    bool uses_closed_form() const { return closed_form_; }

    ConvolutionFactor closed_form_at(double t) const;  ///< closed form, unguarded
    ConvolutionFactor quadrature_at(double t) const;   ///< oracle path

  private:
    PermeabilityKernel kernel_;
    TimeProfile profile_;
    bool closed_form_ = false;
};

/// c(t) and dc/dt for the given kernel and profile; closed form when
/// available, adaptive quadrature otherwise.
ConvolutionFactor convolution_scalar_factor(const PermeabilityKernel& kernel, TimeProfile profile,
                                            double t);

/// Exact-solution bundle: fields, source terms built by substituting the
/// exact solution into the continuous system, and initial data.
struct ManufacturedCase {
    BiotParameters params;
    PermeabilityKernel kernel;  ///< lag scaling applied
    TimeVector u;
    TimeVector u_t;  ///< velocity
    TimeScalar p;
    TimeVector f1;
    TimeScalar f2;
    bool closed_form_convolution = true;

    /// Interpolated initial data with the exact first-level pair at t = tau.
    InitialData initial_data(const Mesh& mesh, double tau) const;

    Sources sources() const { return {f1, f2}; }
};

/// Polynomial solution u = t^2 (g, g), p = t g with g = xy(1-x)(1-y).
ManufacturedCase example1_case(const BiotParameters& params, double k0);

/// Trigonometric solution u1 = u2 = p = sin(pi t) sin(pi x) sin(pi y).
ManufacturedCase example2_case(const BiotParameters& params, double k0);

ManufacturedCase example_case(int example_id, const BiotParameters& params, double k0);

/// Same exact solutions with the sources rebuilt for a different kernel.
ManufacturedCase example_case(int example_id, const BiotParameters& params,
                              const PermeabilityKernel& kernel);

}  // namespace dynbiot

#endif
