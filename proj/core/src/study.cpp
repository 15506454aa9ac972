#include "dynbiot/study.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "dynbiot/vtk.hpp"

namespace dynbiot {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_text_file(const std::string& dir, const std::string& name, const std::string& content) {
    std::filesystem::create_directories(dir);
    const std::string path = dir + "/" + name;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << content;
    if (!out) throw std::runtime_error("write failure on " + path);
}

}  // namespace

void RunConfig::validate() const {
    if (example != 0 && example != 1 && example != 2) {
        throw ConfigError("example must be 1, 2 or 0 (custom zero-data run)");
    }
    if (n < 1) throw ConfigError("mesh subdivisions n must be >= 1");
    if (!(tau > 0.0)) throw ConfigError("tau must be positive");
    if (!(final_time > 0.0)) throw ConfigError("T must be positive");
    const double ratio = final_time / tau;
    const double rounded = std::llround(ratio);
    if (std::abs(ratio - rounded) > 1e-12 * std::max(1.0, ratio)) {
        throw ConfigError("T/tau must be an integer");
    }
    if (rounded < 2.0) {
        throw ConfigError("T >= 2*tau required: the scheme solves levels n >= 2 only");
    }
    if (!(eps_r > 0.0 && eps_r < 1.0)) throw ConfigError("eps-r must lie in (0,1)");
    if (stabilization < 0.0 && stabilization != -1.0) {
        throw ConfigError("L must be >= 0 or auto");
    }
    if (max_iterations < 1) throw ConfigError("max-iters must be >= 1");
    if (!(k0 > 0.0)) throw ConfigError("k0 must be positive");
    if (kernel_name != "constant" && kernel_name != "example7" && kernel_name != "sine") {
        throw ConfigError("kernel must be one of: constant, example7, sine");
    }
    try {
        params.validate();
    } catch (const std::invalid_argument& err) {
        throw ConfigError(err.what());
    }
}

double RunConfig::resolved_stabilization() const {
    return stabilization < 0.0 ? default_stabilization(params) : stabilization;
}

PermeabilityKernel RunConfig::build_kernel() const {
    return PermeabilityKernel::from_name(kernel_name, k0, kernel_amplitude, kernel_frequency);
}

double observed_order(double err_coarse, double err_fine) {
    if (!(err_coarse > 0.0) || !(err_fine > 0.0)) return 0.0;
    return std::log2(err_coarse / err_fine);
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
    std::string out = "h,tau,err_p_L2,err_u_L2,order_p,avg_iters,max_iters\n";
    for (const auto& r : rows) {
        out += fmt(r.h);
        out += ',';
        out += fmt(r.tau);
        out += ',';
        out += fmt(r.err_p);
        out += ',';
        out += fmt(r.err_u);
        out += ',';
        if (r.order_p) out += fmt(*r.order_p);
        out += ',';
        out += fmt(r.avg_iters);
        out += ',';
        out += std::to_string(r.max_iters);
        out += '\n';
    }
    return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "L,avg_iters,converged\n";
    for (const auto& r : rows) {
        out += fmt(r.stabilization);
        out += ',';
        out += fmt(r.avg_iters);
        out += ',';
        out += r.converged ? '1' : '0';
        out += '\n';
    }
    return out;
}

RunSummary run(const RunConfig& config) {
    config.validate();

    const Mesh mesh = build_unit_square_mesh(config.n);
    const TimeGrid grid(config.final_time, config.tau);
    SplitConfig split;
    split.stabilization = config.resolved_stabilization();
    split.eps_r = config.eps_r;
    split.max_iterations = config.max_iterations;

    PermeabilityKernel kernel = config.build_kernel();

    InitialData initial;
    Sources sources;
    TimeScalar exact_p;
    TimeVector exact_u;
    if (config.example == 0) {
        const int n_scalar = mesh.n_vertices() + mesh.n_edges();
        initial.u0.assign(2 * n_scalar, 0.0);
        initial.v0.assign(2 * n_scalar, 0.0);
        initial.p0.assign(mesh.n_vertices(), 0.0);
        exact_p = [](const Vec2&, double) { return 0.0; };
        exact_u = [](const Vec2&, double) { return Vec2{0.0, 0.0}; };
    } else {
        // The case's sources are built against the configured kernel so the
        // scheme and the manufactured right-hand sides always agree.
        const ManufacturedCase mc = example_case(config.example, config.params, kernel);
        initial = mc.initial_data(mesh, config.tau);
        sources = mc.sources();
        exact_p = mc.p;
        exact_u = mc.u;
    }

    RunSummary summary;
    summary.result = run_simulation(config.scheme, mesh, config.params, kernel, initial, sources,
                                    grid, split);
    summary.completed = summary.result.completed;
    summary.failed_level = summary.result.failed_level;
    summary.failed_increment = summary.result.failed_increment;

    ConvergenceRow row;
    row.h = mesh.h;
    row.tau = config.tau;
    if (summary.completed) {
        const double T = config.final_time;
        row.err_p = l2_error(mesh, Space::P1, summary.result.pressure.back(),
                             [&](const Vec2& x) { return exact_p(x, T); });
        row.err_u = l2_error(mesh, Space::P2Vec, summary.result.displacement.back(),
                             [&](const Vec2& x) { return exact_u(x, T); });
        row.avg_iters = summary.result.average_iterations();
        row.max_iters = summary.result.max_iterations();
    }
    summary.row = row;

    write_text_file(config.out_dir, "summary.csv", convergence_csv({row}));

    if (config.write_vtk && summary.completed) {
        for (std::size_t level = 0; level < summary.result.times.size(); ++level) {
            char name[32];
            std::snprintf(name, sizeof(name), "fields_%04zu.vtk", level);
            std::filesystem::create_directories(config.out_dir);
            export_vtk(mesh, summary.result.displacement[level], summary.result.pressure[level],
                       config.out_dir + "/" + name);
        }
    }
    return summary;
}

std::vector<ConvergenceRow> convergence_study(const RunConfig& base, const std::vector<int>& meshes,
                                              TauRule rule) {
    if (meshes.size() < 2) throw ConfigError("convergence study needs at least two meshes");

    std::vector<ConvergenceRow> rows;
    for (std::size_t k = 0; k < meshes.size(); ++k) {
        RunConfig config = base;
        config.n = meshes[k];
        config.write_vtk = false;
        if (rule == TauRule::Halving) {
            config.tau = base.tau / static_cast<double>(1 << k);
        }
        try {
            RunSummary summary = run(config);
            if (!summary.completed) {
                write_text_file(base.out_dir, "convergence.csv", convergence_csv(rows));
                throw SolverError("convergence study: run n=" + std::to_string(config.n) +
                                  " failed to converge at level " +
                                  std::to_string(summary.failed_level));
            }
            ConvergenceRow row = summary.row;
            if (!rows.empty()) row.order_p = observed_order(rows.back().err_p, row.err_p);
            rows.push_back(row);
        } catch (const SolverError&) {
            write_text_file(base.out_dir, "convergence.csv", convergence_csv(rows));
            throw;
        }
    }
    write_text_file(base.out_dir, "convergence.csv", convergence_csv(rows));
    return rows;
}

std::vector<SweepRow> stabilization_sweep(const RunConfig& base,
                                          const std::vector<double>& l_values) {
    std::vector<SweepRow> rows;
    for (double l : l_values) {
        if (l < 0.0) throw ConfigError("stabilization sweep: L values must be >= 0");
        RunConfig config = base;
        config.stabilization = l;
        config.write_vtk = false;
        RunSummary summary = run(config);
        SweepRow row;
        row.stabilization = l;
        row.avg_iters = summary.result.average_iterations();
        row.converged = summary.completed;
        rows.push_back(row);
    }
    write_text_file(base.out_dir, "sweep.csv", sweep_csv(rows));
    return rows;
}

}  // namespace dynbiot
