#ifndef DYNBIOT_BIOT_HPP
#define DYNBIOT_BIOT_HPP

#include <string>
#include <vector>

#include "dynbiot/assembly.hpp"
#include "dynbiot/geometry.hpp"
#include "dynbiot/sparse.hpp"

namespace dynbiot {

/// Physical constants of the coupled flow-mechanics system (2D).
struct BiotParameters {
    double alpha = 1.0;     ///< Biot coefficient, in (0, 1]
    double biot_modulus = 1.0;  ///< M; 1/M is the compressibility constant
    double rho = 1.0;       ///< bulk mass density
    double rho_f = 1.0;     ///< fluid density
    double mu = 10.0;       ///< shear modulus
    double lambda = 10.0;   ///< first Lame parameter
    double eta = 1.0;       ///< pore fluid viscosity
    double pore_size = 1.0; ///< typical pore size l
    static constexpr int dim = 2;

    /// Lag scaling eta / (l^2 rho_f) applied to kernel arguments.
    double lag_scale() const { return eta / (pore_size * pore_size * rho_f); }

    /// Throws std::invalid_argument when a constraint is violated.
    void validate() const;
};

/// Time-lag-dependent permeability tensor A(s * lag), isotropic.
///
/// Two shapes are supported: "constant" A = k0 I and the sine-modulated
/// kernel A(t) = k0 (1 + amplitude * sin(frequency t)) I, which is defined
/// for all real lags (in particular the one negative lag -tau the schemes
/// need). The lag scaling s is folded into evaluation.
struct PermeabilityKernel {
    enum class Type { Constant, SineModulated };

    Type type = Type::Constant;
    double k0 = 1.0;
    double amplitude = 0.02;
    double frequency = 3.14159265358979323846;
    double lag_scale = 1.0;

    static PermeabilityKernel constant(double k0);
    static PermeabilityKernel sine_modulated(double k0, double amplitude = 0.02,
                                             double frequency = 3.14159265358979323846);

    /// Parses "constant", "example7" or "sine" (the latter two are synonyms).
    static PermeabilityKernel from_name(const std::string& name, double k0,
                                        double amplitude = 0.02,
                                        double frequency = 3.14159265358979323846);

    /// Copy of this kernel with the lag scale of `p` applied.
    PermeabilityKernel scaled_for(const BiotParameters& p) const;

    /// Scalar kernel value at the given (unscaled) lag.
    double value(double lag) const;
    /// Tensor kernel A(s * lag) = value(lag) * I.
    Tensor2 at(double lag) const { return Tensor2::identity(value(lag)); }
};

/// Trapezoid weights [1/2, 1, ..., 1, 1/2] of length n+1 for the discrete
/// convolution over levels 0..n. For n = 0 the convolution is empty and a
/// single zero weight is returned, so sum(tau * w_i) = t_n holds for all n.
std::vector<double> trapezoid_weights(int n);

/// Ordered per-level pressure coefficient history (t_0 = 0, uniform step).
class HistoryStore {
  public:
    HistoryStore() = default;

    void append(double time, Vector pressure);

    int levels() const { return static_cast<int>(times_.size()); }
    double time(int i) const { return times_[i]; }
    const Vector& pressure(int i) const { return pressures_[i]; }
    double step() const { return step_; }

  private:
    std::vector<double> times_;
    std::vector<Vector> pressures_;
    double step_ = 0.0;
};

/// Whether a convolution includes the newest time level or leaves it to the
/// caller as an implicit unknown (split mode used by the schemes).
enum class HistoryRange { Full, ExcludeCurrent };

/// Weighted history contribution plus the tensor multiplying the current
/// (implicit) pressure gradient. The caller scales by tau^2 and 1/rho_f.
struct ConvolutionTerm {
    Vector history_part;
    Tensor2 implicit_tensor;  ///< zero tensor in Full mode
};

/// Flow-equation convolution: sum_i w_i <A(t_n - z_i) grad p^i, grad q>.
/// Full mode sums every stored level (history must reach t_n); ExcludeCurrent
/// sums levels 0..n-1 and reports w_n A(0) as the implicit tensor.
ConvolutionTerm flow_convolution(const HistoryStore& history, const PermeabilityKernel& kernel,
                                 double t_n, const GradGradComponents& grad_grad,
                                 HistoryRange range);

/// Mechanics-equation convolution for the differentiated kernel:
/// explicit part sum_{i<n} w_i <dA^i grad p^i, v> with
/// dA^i = A(t_n - z_i) - A(t_n - tau - z_i), plus the implicit tensor
/// A(0) + w_n (A(0) - A(-tau)) for the p^n term.
ConvolutionTerm mechanics_convolution(const HistoryStore& history,
                                      const PermeabilityKernel& kernel, double t_n, double tau,
                                      const VectorGradComponents& vector_grad);

}  // namespace dynbiot

#endif
