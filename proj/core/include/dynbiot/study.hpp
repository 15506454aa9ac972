#ifndef DYNBIOT_STUDY_HPP
#define DYNBIOT_STUDY_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dynbiot/mms.hpp"
#include "dynbiot/schemes.hpp"

namespace dynbiot {

/// Invalid experiment configuration (maps to its own process exit code).
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// One experiment configuration. `example` 1 and 2 select the manufactured
/// cases; 0 runs the homogeneous (zero data, zero source) problem.
struct RunConfig {
    int example = 1;
    int n = 16;
    double tau = 0.1;
    double final_time = 1.0;
    Scheme scheme = Scheme::FixedStress;
    double stabilization = -1.0;  ///< < 0 means "auto" (alpha^2 / K_dr)
    double eps_r = 1e-9;
    int max_iterations = 200;
    std::string out_dir = ".";
    bool write_vtk = false;
    std::string kernel_name = "example7";
    double k0 = 1.0;
    double kernel_amplitude = 0.02;
    double kernel_frequency = 3.14159265358979323846;
    BiotParameters params{};

    void validate() const;  ///< throws ConfigError
    double resolved_stabilization() const;
    PermeabilityKernel build_kernel() const;
};

/// One row of a convergence table; order is defined from the second row on.
struct ConvergenceRow {
    double h = 0.0;
    double tau = 0.0;
    double err_p = 0.0;
    double err_u = 0.0;
    std::optional<double> order_p;
    double avg_iters = 0.0;
    int max_iters = 0;
};

struct SweepRow {
    double stabilization = 0.0;
    double avg_iters = 0.0;
    bool converged = false;
};

struct RunSummary {
    bool completed = true;
    int failed_level = -1;
    double failed_increment = 0.0;
    ConvergenceRow row;
    SimulationResult result;
};

/// Executes one run; writes `summary.csv` into the output directory and, when
/// enabled, per-level VTK snapshots `fields_NNNN.vtk`.
RunSummary run(const RunConfig& config);

enum class TauRule { Fixed, Halving };

/// Convergence study over a mesh list; tau either fixed at config.tau or
/// halved with each mesh. Writes `convergence.csv`. A failing run aborts the
/// table; rows completed so far are preserved in the file and the error is
/// rethrown.
std::vector<ConvergenceRow> convergence_study(const RunConfig& base, const std::vector<int>& meshes,
                                              TauRule rule);

/// Average fixed-stress iterations per stabilization value at fixed mesh and
/// step. Non-convergent entries are recorded, not fatal. Writes `sweep.csv`.
std::vector<SweepRow> stabilization_sweep(const RunConfig& base,
                                          const std::vector<double>& l_values);

// Deterministic CSV renderings (also written by the drivers above).
std::string convergence_csv(const std::vector<ConvergenceRow>& rows);
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Observed order log2(e_coarse / e_fine); 0 when either error vanishes.
double observed_order(double err_coarse, double err_fine);

}  // namespace dynbiot

#endif
