#ifndef DYNBIOT_SCHEMES_HPP
#define DYNBIOT_SCHEMES_HPP

#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "dynbiot/assembly.hpp"
#include "dynbiot/biot.hpp"
#include "dynbiot/dof_map.hpp"
#include "dynbiot/mesh.hpp"
#include "dynbiot/solvers.hpp"
#include "dynbiot/sparse.hpp"

namespace dynbiot {

using TimeScalar = std::function<double(const Vec2&, double)>;
using TimeVector = std::function<Vec2(const Vec2&, double)>;

/// Uniform partition of [0, T]. T/tau must be an integer within 1e-12.
struct TimeGrid {
    double final_time = 1.0;
    double tau = 0.1;

    TimeGrid() = default;
    TimeGrid(double T, double step);

    int n_levels() const { return levels_; }  ///< N with t_N = T
    double time(int n) const { return n * tau; }

  private:
    int levels_ = 0;
};

/// Volume source terms; a null function means identically zero.
struct Sources {
    TimeVector f1;  ///< external force density (mechanics)
    TimeScalar f2;  ///< volumetric fluid source (flow)
};

/// Coefficient vectors of the initial data, plus either the prescribed
/// first-level pair or the fallback rule u1 = u0 + tau*v0, p1 = p0.
struct InitialData {
    Vector u0;
    Vector v0;  ///< initial velocity coefficients
    Vector p0;
    std::optional<std::pair<Vector, Vector>> first_step;  ///< (u^1, p^1)

    std::pair<Vector, Vector> first_level(double tau) const;
};

/// Fixed-stress iteration controls.
struct SplitConfig {
    double stabilization = 0.05;  ///< L >= 0
    double eps_r = 1e-9;          ///< relative L2 stopping tolerance, in (0,1)
    int max_iterations = 200;

    void validate() const;
};

/// Outcome of one fixed-stress time step.
struct StepReport {
    int level = 0;
    int iterations = 0;
    bool converged = true;
    double final_increment = 0.0;          ///< last relative increment
    std::vector<double> increments;        ///< per-iteration relative increments
};

/// Rolling state of the two-step time discretization: the next level to
/// solve, the two previous displacements, previous pressure, and the full
/// pressure history the convolutions consume.
struct SchemeState {
    int level = 2;  ///< next level n to compute
    Vector u_prev, u_prev2, p_prev;
    HistoryStore history;  ///< p^0 .. p^{n-1}
};

/// Classical fixed-stress stabilization alpha^2 / K_dr, K_dr = 2 mu/d + lambda.
double default_stabilization(const BiotParameters& params);

/// Assembled operators for one (mesh, parameters, kernel, tau) combination.
/// System matrices are constant in time, so their factorizations are cached
/// across steps; the per-step work is right-hand sides and history sums.
class BiotDiscretization {
  public:
    BiotDiscretization(Mesh mesh, BiotParameters params, PermeabilityKernel kernel, double tau);

    const Mesh& mesh() const { return mesh_; }
    const BiotParameters& params() const { return params_; }
    const PermeabilityKernel& kernel() const { return kernel_; }
    double tau() const { return tau_; }

    const SparseMatrix& pressure_mass() const { return mass_p_; }
    const SparseMatrix& displacement_mass() const { return mass_u_; }
    const SparseMatrix& elasticity() const { return elasticity_; }
    const SparseMatrix& div_coupling() const { return div_b_; }
    const std::vector<std::uint8_t>& pressure_mask() const { return p_mask_; }
    const std::vector<std::uint8_t>& displacement_mask() const { return u_mask_; }

    int n_pressure_dofs() const { return mass_p_.rows(); }
    int n_displacement_dofs() const { return mass_u_.rows(); }

    /// Seeds levels 0 and 1 (the scheme solves from level 2 on).
    SchemeState initial_state(const InitialData& data) const;

    /// One implicit-Euler step of the fully coupled system. Advances the
    /// state and returns (u^n, p^n). Throws SolverError with the level index
    /// on linear-solver failure.
    std::pair<Vector, Vector> monolithic_step(SchemeState& state, const Sources& sources);

    /// One fixed-stress-split step: iterates the stabilized pressure solve
    /// and the mechanics solve until the relative pressure increment in the
    /// mass norm drops below eps_r. Non-convergence is reported, not thrown.
    /// Optional guesses override the warm start (u^{n-1}, p^{n-1}).
    std::tuple<Vector, Vector, StepReport> fixed_stress_step(SchemeState& state,
                                                             const Sources& sources,
                                                             const SplitConfig& split,
                                                             const Vector* u_guess = nullptr,
                                                             const Vector* p_guess = nullptr);

    /// Residual of the monolithic system at the given pair for the state's
    /// next level, relative to the right-hand side norm. Does not advance.
    double monolithic_residual(const SchemeState& state, const Sources& sources, const Vector& u,
                               const Vector& p);

  private:
    struct StepTerms {
        Vector rhs_u_base;
        Vector rhs_p_base;
    };
    StepTerms assemble_step_terms(const SchemeState& state, const Sources& sources) const;
    void advance(SchemeState& state, Vector u, Vector p) const;
    const BandLU& monolithic_factor();
    const BandCholesky& mechanics_factor();
    const BandCholesky& pressure_factor(double stabilization);

    Mesh mesh_;
    BiotParameters params_;
    PermeabilityKernel kernel_;
    double tau_;
    int load_degree_ = 6;

    SparseMatrix mass_p_, mass_u_, elasticity_, div_b_, div_bt_;
    SparseMatrix flow_stiffness0_;     ///< K(A(0))
    SparseMatrix grad_coupling_impl_;  ///< G(A(0) + w_n (A(0) - A(-tau)))
    GradGradComponents grad_grad_;
    VectorGradComponents vector_grad_;
    std::vector<std::uint8_t> u_mask_, p_mask_, full_mask_;

    int level_hint_ = 0;  // for solver error messages

    BlockSystem monolithic_system_;
    std::unique_ptr<BandLU> monolithic_lu_;
    SparseMatrix mechanics_system_;
    std::unique_ptr<BandCholesky> mechanics_chol_;
    double pressure_system_l_ = -1.0;
    SparseMatrix pressure_system_;
    std::unique_ptr<BandCholesky> pressure_chol_;
};

enum class Scheme { Monolithic, FixedStress };

/// Full trajectory {(t_n, u^n, p^n)} plus per-step reports for n >= 2.
struct SimulationResult {
    bool completed = true;
    int failed_level = -1;
    double failed_increment = 0.0;
    std::vector<double> times;
    std::vector<Vector> displacement;
    std::vector<Vector> pressure;
    std::vector<StepReport> reports;

    double average_iterations() const;
    int max_iterations() const;
};

/// Runs the chosen scheme from level 2 to N. Iteration exhaustion stops the
/// run and is reported in the result; solver failures propagate as
/// SolverError with the failing level.
SimulationResult run_simulation(Scheme scheme, const Mesh& mesh, const BiotParameters& params,
                                const PermeabilityKernel& kernel, const InitialData& initial,
                                const Sources& sources, const TimeGrid& grid,
                                const SplitConfig& split);

}  // namespace dynbiot

#endif
