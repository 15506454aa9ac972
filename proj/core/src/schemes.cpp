#include "dynbiot/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dynbiot {

namespace {

constexpr double kEndpointWeight = 0.5;  // trapezoid weight of the newest level

Vector zeros(int n) { return Vector(static_cast<std::size_t>(n), 0.0); }

}  // namespace

TimeGrid::TimeGrid(double T, double step) : final_time(T), tau(step) {
    if (!(tau > 0.0) || !(final_time > 0.0)) {
        throw std::invalid_argument("TimeGrid: tau and T must be positive");
    }
    const double ratio = final_time / tau;
    levels_ = static_cast<int>(std::llround(ratio));
    if (levels_ < 1 || std::abs(ratio - levels_) > 1e-12 * std::max(1.0, ratio)) {
        throw std::invalid_argument("TimeGrid: T/tau must be a positive integer");
    }
}

std::pair<Vector, Vector> InitialData::first_level(double tau) const {
    if (first_step) return *first_step;
    Vector u1 = u0;
    axpy(tau, v0, u1);
    return {std::move(u1), p0};
}

void SplitConfig::validate() const {
    if (stabilization < 0.0) throw std::invalid_argument("SplitConfig: L >= 0");
    if (!(eps_r > 0.0 && eps_r < 1.0)) throw std::invalid_argument("SplitConfig: eps_r in (0,1)");
    if (max_iterations < 1) throw std::invalid_argument("SplitConfig: max_iterations >= 1");
}

double default_stabilization(const BiotParameters& params) {
    const double k_dr = 2.0 * params.mu / BiotParameters::dim + params.lambda;
    return params.alpha * params.alpha / k_dr;
}

BiotDiscretization::BiotDiscretization(Mesh mesh, BiotParameters params, PermeabilityKernel kernel,
                                       double tau)
    : mesh_(std::move(mesh)), params_(params), kernel_(kernel.scaled_for(params)), tau_(tau) {
    params_.validate();
    if (!(tau_ > 0.0)) throw std::invalid_argument("BiotDiscretization: tau > 0");

    mass_p_ = assemble_mass(mesh_, Space::P1);
    mass_u_ = assemble_mass(mesh_, Space::P2Vec);
    elasticity_ = assemble_elasticity(mesh_, params_.mu, params_.lambda);
    div_b_ = assemble_div_coupling(mesh_);
    div_bt_ = div_b_.transpose();
    grad_grad_ = assemble_gradgrad_components(mesh_);
    vector_grad_ = assemble_vector_grad_components(mesh_);

    const Tensor2 a0 = kernel_.at(0.0);
    const Tensor2 delta_n = a0 - kernel_.at(-tau_);
    flow_stiffness0_ = assemble_weighted_stiffness(mesh_, a0);
    grad_coupling_impl_ = assemble_grad_coupling(mesh_, a0 + delta_n * kEndpointWeight);

    u_mask_ = boundary_dof_mask(mesh_, Space::P2Vec);
    p_mask_ = boundary_dof_mask(mesh_, Space::P1);
    full_mask_ = u_mask_;
    full_mask_.insert(full_mask_.end(), p_mask_.begin(), p_mask_.end());
}

SchemeState BiotDiscretization::initial_state(const InitialData& data) const {
    const int nu = n_displacement_dofs();
    const int np = n_pressure_dofs();
    if (static_cast<int>(data.u0.size()) != nu || static_cast<int>(data.p0.size()) != np) {
        throw std::invalid_argument("initial_state: coefficient sizes do not match the mesh");
    }
    auto [u1, p1] = data.first_level(tau_);
    if (static_cast<int>(u1.size()) != nu || static_cast<int>(p1.size()) != np) {
        throw std::invalid_argument("initial_state: first-level sizes do not match the mesh");
    }

    SchemeState state;
    state.level = 2;
    state.u_prev2 = data.u0;
    state.u_prev = std::move(u1);
    state.p_prev = p1;
    state.history.append(0.0, data.p0);
    state.history.append(tau_, std::move(p1));
    return state;
}

BiotDiscretization::StepTerms BiotDiscretization::assemble_step_terms(
    const SchemeState& state, const Sources& sources) const {
    const double t = state.level * tau_;
    const double tau2 = tau_ * tau_;

    const auto flow_conv =
        flow_convolution(state.history, kernel_, t, grad_grad_, HistoryRange::ExcludeCurrent);
    const auto mech_conv = mechanics_convolution(state.history, kernel_, t, tau_, vector_grad_);

    StepTerms terms;
    // Flow row: tau F2 + (1/M) Mp p^{n-1} + alpha B u^{n-1} - (tau^2/rho_f) * history.
    if (sources.f2) {
        terms.rhs_p_base = scaled(
            assemble_load(mesh_, Space::P1,
                          [&](const Vec2& x) { return sources.f2(x, t); }, load_degree_),
            tau_);
    } else {
        terms.rhs_p_base = zeros(n_pressure_dofs());
    }
    axpy(1.0 / params_.biot_modulus, mass_p_.apply(state.p_prev), terms.rhs_p_base);
    axpy(params_.alpha, div_b_.apply(state.u_prev), terms.rhs_p_base);
    axpy(-tau2 / params_.rho_f, flow_conv.history_part, terms.rhs_p_base);

    // Mechanics row: tau^2 F1 + rho Mu (2u^{n-1} - u^{n-2}) + tau^2 * history.
    if (sources.f1) {
        terms.rhs_u_base = scaled(
            assemble_load(mesh_, Space::P2Vec,
                          [&](const Vec2& x) { return sources.f1(x, t); }, load_degree_),
            tau2);
    } else {
        terms.rhs_u_base = zeros(n_displacement_dofs());
    }
    Vector u_extrap = scaled(state.u_prev, 2.0);
    axpy(-1.0, state.u_prev2, u_extrap);
    axpy(params_.rho, mass_u_.apply(u_extrap), terms.rhs_u_base);
    axpy(tau2, mech_conv.history_part, terms.rhs_u_base);

    apply_dirichlet_rhs(terms.rhs_p_base, p_mask_);
    apply_dirichlet_rhs(terms.rhs_u_base, u_mask_);
    return terms;
}

void BiotDiscretization::advance(SchemeState& state, Vector u, Vector p) const {
    state.history.append(state.level * tau_, p);
    state.u_prev2 = std::move(state.u_prev);
    state.u_prev = std::move(u);
    state.p_prev = std::move(p);
    ++state.level;
}

const BandLU& BiotDiscretization::monolithic_factor() {
    if (!monolithic_lu_) {
        const double tau2 = tau_ * tau_;
        SparseMatrix uu = SparseMatrix::add(mass_u_.scaled_copy(params_.rho), elasticity_, tau2);
        SparseMatrix up = SparseMatrix::add(div_bt_.scaled_copy(params_.alpha),
                                            grad_coupling_impl_)
                              .scaled_copy(-tau2);
        SparseMatrix pu = div_b_.scaled_copy(params_.alpha);
        SparseMatrix pp =
            SparseMatrix::add(mass_p_.scaled_copy(1.0 / params_.biot_modulus), flow_stiffness0_,
                              tau2 / params_.rho_f * kEndpointWeight);
        monolithic_system_ = BlockSystem::assemble(uu, up, pu, pp);
        monolithic_system_.matrix = apply_dirichlet(monolithic_system_.matrix, full_mask_);
        monolithic_lu_ = std::make_unique<BandLU>(monolithic_system_.matrix);
    }
    return *monolithic_lu_;
}

const BandCholesky& BiotDiscretization::mechanics_factor() {
    if (!mechanics_chol_) {
        mechanics_system_ = apply_dirichlet(
            SparseMatrix::add(mass_u_.scaled_copy(params_.rho), elasticity_, tau_ * tau_), u_mask_);
        mechanics_chol_ = std::make_unique<BandCholesky>(mechanics_system_);
    }
    return *mechanics_chol_;
}

const BandCholesky& BiotDiscretization::pressure_factor(double stabilization) {
    if (!pressure_chol_ || pressure_system_l_ != stabilization) {
        pressure_system_ = apply_dirichlet(
            SparseMatrix::add(
                mass_p_.scaled_copy(1.0 / params_.biot_modulus + stabilization),
                flow_stiffness0_, tau_ * tau_ / params_.rho_f * kEndpointWeight),
            p_mask_);
        pressure_chol_ = std::make_unique<BandCholesky>(pressure_system_);
        pressure_system_l_ = stabilization;
    }
    return *pressure_chol_;
}

std::pair<Vector, Vector> BiotDiscretization::monolithic_step(SchemeState& state,
                                                              const Sources& sources) {
    const StepTerms terms = assemble_step_terms(state, sources);
    const BandLU& lu = monolithic_factor();

    Vector rhs = monolithic_system_.concat(terms.rhs_u_base, terms.rhs_p_base);
    Vector x;
    try {
        x = lu.solve(rhs);
    } catch (const SolverError& err) {
        throw SolverError("monolithic_step at level " + std::to_string(state.level) + ": " +
                          err.what());
    }
    // Postcondition of the solver contract: verify the residual explicitly.
    Vector residual = monolithic_system_.matrix.apply(x);
    for (std::size_t i = 0; i < residual.size(); ++i) residual[i] = rhs[i] - residual[i];
    const double nb = norm2(rhs);
    if (nb > 0.0 && norm2(residual) > 1e-8 * nb) {
        throw SolverError("monolithic_step at level " + std::to_string(state.level) +
                          ": residual " + std::to_string(norm2(residual) / nb));
    }

    Vector u, p;
    monolithic_system_.split(x, u, p);
    advance(state, u, p);
    return {std::move(u), std::move(p)};
}

std::tuple<Vector, Vector, StepReport> BiotDiscretization::fixed_stress_step(
    SchemeState& state, const Sources& sources, const SplitConfig& split, const Vector* u_guess,
    const Vector* p_guess) {
    split.validate();
    const double tau2 = tau_ * tau_;
    const StepTerms terms = assemble_step_terms(state, sources);
    const BandCholesky& pres = pressure_factor(split.stabilization);
    const BandCholesky& mech = mechanics_factor();

    Vector u_k = u_guess ? *u_guess : state.u_prev;
    Vector p_k = p_guess ? *p_guess : state.p_prev;

    StepReport report;
    report.level = state.level;
    report.converged = false;

    auto checked_solve = [this](const BandCholesky& factor, const SparseMatrix& system,
                                const Vector& b, const char* what) {
        Vector x = factor.solve(b);
        Vector r = system.apply(x);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
        const double nb = norm2(b);
        if (nb > 0.0 && norm2(r) > 1e-8 * nb) {
            throw SolverError(std::string(what) + " solve failed residual check at level " +
                              std::to_string(level_hint_));
        }
        return x;
    };
    level_hint_ = state.level;

    Vector rhs, coupling;
    for (int k = 1; k <= split.max_iterations; ++k) {
        // Step 1: pressure with stabilization and lagged volumetric coupling.
        rhs = terms.rhs_p_base;
        axpy(split.stabilization, mass_p_.apply(p_k), rhs);
        axpy(-params_.alpha, div_b_.apply(u_k), rhs);
        apply_dirichlet_rhs(rhs, p_mask_);
        Vector p_next = checked_solve(pres, pressure_system_, rhs, "pressure");

        // Step 2: mechanics with the fresh pressure.
        rhs = terms.rhs_u_base;
        coupling = div_bt_.apply(p_next);
        axpy(tau2 * params_.alpha, coupling, rhs);
        coupling = grad_coupling_impl_.apply(p_next);
        axpy(tau2, coupling, rhs);
        apply_dirichlet_rhs(rhs, u_mask_);
        Vector u_next = checked_solve(mech, mechanics_system_, rhs, "mechanics");

        Vector dp = p_next;
        axpy(-1.0, p_k, dp);
        const double inc = mass_norm(mass_p_, dp);
        const double pnorm = mass_norm(mass_p_, p_next);
        const double rel = pnorm > 0.0 ? inc / pnorm : inc;
        report.increments.push_back(rel);
        report.iterations = k;
        report.final_increment = rel;

        u_k = std::move(u_next);
        p_k = std::move(p_next);

        if (inc <= split.eps_r * pnorm || inc == 0.0) {
            report.converged = true;
            break;
        }
    }

    if (report.converged) {
        advance(state, u_k, p_k);
    }
    return {std::move(u_k), std::move(p_k), std::move(report)};
}

double BiotDiscretization::monolithic_residual(const SchemeState& state, const Sources& sources,
                                               const Vector& u, const Vector& p) {
    const StepTerms terms = assemble_step_terms(state, sources);
    monolithic_factor();
    const Vector rhs = monolithic_system_.concat(terms.rhs_u_base, terms.rhs_p_base);
    const Vector x = monolithic_system_.concat(u, p);
    Vector residual = monolithic_system_.matrix.apply(x);
    for (std::size_t i = 0; i < residual.size(); ++i) residual[i] = rhs[i] - residual[i];
    const double nb = norm2(rhs);
    return nb > 0.0 ? norm2(residual) / nb : norm2(residual);
}

double SimulationResult::average_iterations() const {
    if (reports.empty()) return 0.0;
    double total = 0.0;
    for (const auto& r : reports) total += r.iterations;
    return total / static_cast<double>(reports.size());
}

int SimulationResult::max_iterations() const {
    int m = 0;
    for (const auto& r : reports) m = std::max(m, r.iterations);
    return m;
}

SimulationResult run_simulation(Scheme scheme, const Mesh& mesh, const BiotParameters& params,
                                const PermeabilityKernel& kernel, const InitialData& initial,
                                const Sources& sources, const TimeGrid& grid,
                                const SplitConfig& split) {
    if (grid.n_levels() < 2) {
        throw std::invalid_argument("run_simulation: need T >= 2*tau (no level n >= 2 to solve)");
    }
    BiotDiscretization disc(mesh, params, kernel, grid.tau);
    SchemeState state = disc.initial_state(initial);

    SimulationResult result;
    result.times.push_back(0.0);
    result.times.push_back(grid.tau);
    result.displacement.push_back(initial.u0);
    result.pressure.push_back(initial.p0);
    result.displacement.push_back(state.u_prev);
    result.pressure.push_back(state.p_prev);

    for (int n = 2; n <= grid.n_levels(); ++n) {
        if (scheme == Scheme::Monolithic) {
            auto [u, p] = disc.monolithic_step(state, sources);
            StepReport report;
            report.level = n;
            report.iterations = 1;
            result.reports.push_back(report);
            result.times.push_back(grid.time(n));
            result.displacement.push_back(std::move(u));
            result.pressure.push_back(std::move(p));
        } else {
            auto [u, p, report] = disc.fixed_stress_step(state, sources, split);
            result.reports.push_back(report);
            if (!report.converged) {
                result.completed = false;
                result.failed_level = n;
                result.failed_increment = report.final_increment;
                return result;
            }
            result.times.push_back(grid.time(n));
            result.displacement.push_back(std::move(u));
            result.pressure.push_back(std::move(p));
        }
    }
    return result;
}

}  // namespace dynbiot
