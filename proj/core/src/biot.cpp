#include "dynbiot/biot.hpp"

#include <cmath>
#include <stdexcept>

namespace dynbiot {

void BiotParameters::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("BiotParameters: alpha in (0,1]");
    if (!(biot_modulus > 0.0)) throw std::invalid_argument("BiotParameters: M > 0");
    if (!(rho > 0.0)) throw std::invalid_argument("BiotParameters: rho > 0");
    if (!(rho_f > 0.0)) throw std::invalid_argument("BiotParameters: rho_f > 0");
    if (!(mu > 0.0)) throw std::invalid_argument("BiotParameters: mu > 0");
    if (lambda < 0.0) throw std::invalid_argument("BiotParameters: lambda >= 0");
    if (!(eta > 0.0)) throw std::invalid_argument("BiotParameters: eta > 0");
    if (!(pore_size > 0.0)) throw std::invalid_argument("BiotParameters: pore size > 0");
}

PermeabilityKernel PermeabilityKernel::constant(double k0) {
    if (!(k0 > 0.0)) throw std::invalid_argument("PermeabilityKernel: k0 > 0");
    PermeabilityKernel k;
    k.type = Type::Constant;
    k.k0 = k0;
    return k;
}

PermeabilityKernel PermeabilityKernel::sine_modulated(double k0, double amplitude,
                                                      double frequency) {
    if (!(k0 > 0.0)) throw std::invalid_argument("PermeabilityKernel: k0 > 0");
    PermeabilityKernel k;
    k.type = Type::SineModulated;
    k.k0 = k0;
    k.amplitude = amplitude;
    k.frequency = frequency;
    return k;
}

PermeabilityKernel PermeabilityKernel::from_name(const std::string& name, double k0,
                                                 double amplitude, double frequency) {
    if (name == "constant") return constant(k0);
    if (name == "example7" || name == "sine") return sine_modulated(k0, amplitude, frequency);
    throw std::invalid_argument("PermeabilityKernel: unknown kernel name '" + name + "'");
}

PermeabilityKernel PermeabilityKernel::scaled_for(const BiotParameters& p) const {
    PermeabilityKernel k = *this;
    k.lag_scale = p.lag_scale();
    return k;
}

double PermeabilityKernel::value(double lag) const {
    const double s = lag_scale * lag;
    switch (type) {
        case Type::Constant: return k0;
        case Type::SineModulated: return k0 * (1.0 + amplitude * std::sin(frequency * s));
    }
    throw std::logic_error("PermeabilityKernel: unknown type");
}

std::vector<double> trapezoid_weights(int n) {
    if (n < 0) throw std::invalid_argument("trapezoid_weights: n >= 0");
    if (n == 0) return {0.0};
    std::vector<double> w(static_cast<std::size_t>(n) + 1, 1.0);
    w.front() = 0.5;
    w.back() = 0.5;
    return w;
}

void HistoryStore::append(double time, Vector pressure) {
    if (times_.empty()) {
        if (std::abs(time) > 1e-12) {
            throw std::invalid_argument("HistoryStore: first level must be t = 0");
        }
    } else {
        if (!pressures_.empty() && pressure.size() != pressures_.front().size()) {
            throw std::invalid_argument("HistoryStore: vector length changed");
        }
        const double gap = time - times_.back();
        if (!(gap > 0.0)) throw std::invalid_argument("HistoryStore: times must increase");
        if (step_ == 0.0) {
            step_ = gap;
        } else if (std::abs(gap - step_) > 1e-10 * std::max(1.0, step_)) {
            throw std::invalid_argument("HistoryStore: non-uniform time step");
        }
    }
    times_.push_back(time);
    pressures_.push_back(std::move(pressure));
}

ConvolutionTerm flow_convolution(const HistoryStore& history, const PermeabilityKernel& kernel,
                                 double t_n, const GradGradComponents& grad_grad,
                                 HistoryRange range) {
    const int stored = history.levels();
    if (stored == 0) throw std::invalid_argument("flow_convolution: empty history");
    const int n = (range == HistoryRange::Full) ? stored - 1 : stored;
    if (range == HistoryRange::Full) {
        if (std::abs(history.time(stored - 1) - t_n) > 1e-10) {
            throw std::invalid_argument("flow_convolution: t_n must match the newest level");
        }
    } else if (history.step() > 0.0 &&
               std::abs(history.time(stored - 1) + history.step() - t_n) > 1e-10) {
        throw std::invalid_argument("flow_convolution: t_n must be one step past the history");
    }

    const auto weights = trapezoid_weights(n);
    ConvolutionTerm term;
    term.history_part.assign(grad_grad.k[0][0].rows(), 0.0);
    for (int i = 0; i < stored; ++i) {
        const double w = weights[i];
        if (w == 0.0) continue;
        const Tensor2 a = kernel.at(t_n - history.time(i));
        axpy(w, grad_grad.apply(a, history.pressure(i)), term.history_part);
    }
    if (range == HistoryRange::ExcludeCurrent) {
        term.implicit_tensor = kernel.at(0.0) * weights[n];
    }
    return term;
}

ConvolutionTerm mechanics_convolution(const HistoryStore& history,
                                      const PermeabilityKernel& kernel, double t_n, double tau,
                                      const VectorGradComponents& vector_grad) {
    const int stored = history.levels();
    if (stored == 0) throw std::invalid_argument("mechanics_convolution: empty history");
    if (!(tau > 0.0)) throw std::invalid_argument("mechanics_convolution: tau > 0");
    if (std::abs(history.time(stored - 1) + tau - t_n) > 1e-10) {
        throw std::invalid_argument("mechanics_convolution: t_n must be one step past the history");
    }
    const int n = stored;  // current level is implicit

    const auto weights = trapezoid_weights(n);
    ConvolutionTerm term;
    term.history_part.assign(vector_grad.g[0][0].rows(), 0.0);
    for (int i = 0; i < stored; ++i) {
        const double w = weights[i];
        if (w == 0.0) continue;
        const double lag = t_n - history.time(i);
        const Tensor2 delta = kernel.at(lag) - kernel.at(lag - tau);
        axpy(w, vector_grad.apply(delta, history.pressure(i)), term.history_part);
    }
    const Tensor2 delta_n = kernel.at(0.0) - kernel.at(-tau);
    term.implicit_tensor = kernel.at(0.0) + delta_n * weights[n];
    return term;
}

}  // namespace dynbiot
