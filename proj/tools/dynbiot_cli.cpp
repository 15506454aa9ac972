// Command-line experiment driver: single runs, mesh-convergence studies and
// stabilization sweeps, with CSV tables and optional VTK snapshots.
//
// Exit codes: 0 success, 2 configuration error, 3 linear-solver failure,
// 4 fixed-stress iteration exhaustion.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dynbiot/study.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitIterations = 4;

struct CliOptions {
    dynbiot::RunConfig config;
    std::string scheme = "fixed-stress";
    std::string example = "1";
    std::string stabilization = "auto";
    std::vector<int> meshes = {4, 8, 16, 32};
    std::string tau_rule = "fixed";
    std::vector<double> l_values;
};

void add_common_options(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--example", opt.example, "Manufactured case: 1, 2 or custom");
    cmd->add_option("--n", opt.config.n, "Mesh subdivisions per side");
    cmd->add_option("--tau", opt.config.tau, "Time step size");
    cmd->add_option("--T", opt.config.final_time, "Final time");
    cmd->add_option("--scheme", opt.scheme, "monolithic or fixed-stress");
    cmd->add_option("--L", opt.stabilization, "Stabilization parameter or 'auto'");
    cmd->add_option("--eps-r", opt.config.eps_r, "Relative stopping tolerance");
    cmd->add_option("--max-iters", opt.config.max_iterations, "Iteration cap per step");
    cmd->add_option("--out", opt.config.out_dir, "Output directory");
    cmd->add_flag("--vtk", opt.config.write_vtk, "Write per-level VTK snapshots");
    cmd->add_option("--kernel", opt.config.kernel_name,
                    "Permeability kernel: constant, example7 or sine");
    cmd->add_option("--k0", opt.config.k0, "Base permeability");
    cmd->add_option("--kernel-amplitude", opt.config.kernel_amplitude,
                    "Relative modulation amplitude of the sine kernel");
    cmd->add_option("--kernel-frequency", opt.config.kernel_frequency,
                    "Angular frequency of the sine kernel");
    cmd->set_config("--config", "", "Plain-text key=value configuration file");
}

// Resolves the string-typed options; throws dynbiot::ConfigError on bad input.
void finalize(CliOptions& opt) {
    if (opt.example == "custom" || opt.example == "0") {
        opt.config.example = 0;
    } else if (opt.example == "1" || opt.example == "2") {
        opt.config.example = std::stoi(opt.example);
    } else {
        throw dynbiot::ConfigError("--example must be 1, 2 or custom");
    }
    if (opt.scheme == "monolithic") {
        opt.config.scheme = dynbiot::Scheme::Monolithic;
    } else if (opt.scheme == "fixed-stress") {
        opt.config.scheme = dynbiot::Scheme::FixedStress;
    } else {
        throw dynbiot::ConfigError("--scheme must be monolithic or fixed-stress");
    }
    if (opt.stabilization == "auto") {
        opt.config.stabilization = -1.0;
    } else {
        try {
            std::size_t pos = 0;
            opt.config.stabilization = std::stod(opt.stabilization, &pos);
            if (pos != opt.stabilization.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw dynbiot::ConfigError("--L must be a number or 'auto'");
        }
    }
    opt.config.validate();
}

int run_single(CliOptions& opt) {
    finalize(opt);
    const dynbiot::RunSummary summary = dynbiot::run(opt.config);
    if (!summary.completed) {
        std::fprintf(stderr, "fixed-stress did not converge at level %d (last increment %.3e)\n",
                     summary.failed_level, summary.failed_increment);
        return kExitIterations;
    }
    std::printf("h=%g tau=%g err_p_L2=%.6e err_u_L2=%.6e avg_iters=%.3f max_iters=%d\n",
                summary.row.h, summary.row.tau, summary.row.err_p, summary.row.err_u,
                summary.row.avg_iters, summary.row.max_iters);
    std::printf("wrote %s/summary.csv\n", opt.config.out_dir.c_str());
    return 0;
}

int run_convergence(CliOptions& opt) {
    finalize(opt);
    dynbiot::TauRule rule;
    if (opt.tau_rule == "fixed") {
        rule = dynbiot::TauRule::Fixed;
    } else if (opt.tau_rule == "halving") {
        rule = dynbiot::TauRule::Halving;
    } else {
        throw dynbiot::ConfigError("--tau-rule must be fixed or halving");
    }
    const auto rows = dynbiot::convergence_study(opt.config, opt.meshes, rule);
    for (const auto& row : rows) {
        std::printf("h=%-10g tau=%-8g err_p_L2=%.6e order_p=%-8s avg_iters=%.3f\n", row.h, row.tau,
                    row.err_p, row.order_p ? std::to_string(*row.order_p).c_str() : "-",
                    row.avg_iters);
    }
    std::printf("wrote %s/convergence.csv\n", opt.config.out_dir.c_str());
    return 0;
}

int run_sweep(CliOptions& opt) {
    finalize(opt);
    const auto rows = dynbiot::stabilization_sweep(opt.config, opt.l_values);
    for (const auto& row : rows) {
        std::printf("L=%-12g avg_iters=%-8.3f converged=%d\n", row.stabilization, row.avg_iters,
                    row.converged ? 1 : 0);
    }
    std::printf("wrote %s/sweep.csv\n", opt.config.out_dir.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"History-dependent dynamic Biot solver and experiment harness"};
    app.require_subcommand(1);

    CliOptions run_opt, conv_opt, sweep_opt;

    CLI::App* cmd_run = app.add_subcommand("run", "Single simulation run");
    add_common_options(cmd_run, run_opt);

    CLI::App* cmd_conv = app.add_subcommand("convergence", "Mesh-refinement convergence study");
    add_common_options(cmd_conv, conv_opt);
    cmd_conv->add_option("--meshes", conv_opt.meshes, "Mesh subdivision list")->delimiter(',');
    cmd_conv->add_option("--tau-rule", conv_opt.tau_rule, "fixed or halving");

    CLI::App* cmd_sweep = app.add_subcommand("sweep", "Stabilization parameter sweep");
    add_common_options(cmd_sweep, sweep_opt);
    cmd_sweep->add_option("--L-list", sweep_opt.l_values, "Stabilization values")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (cmd_run->parsed()) return run_single(run_opt);
        if (cmd_conv->parsed()) return run_convergence(conv_opt);
        if (cmd_sweep->parsed()) return run_sweep(sweep_opt);
    } catch (const dynbiot::ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return kExitConfig;
    } catch (const dynbiot::SolverError& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return kExitSolver;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitSolver;
    }
    return kExitConfig;
}
