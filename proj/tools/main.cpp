// Command-line front end: Cole-Cole dispersive wave simulations (1D/2D),
// standalone memory-oscillator studies, the enrichment convergence table, and
// the mapped-quadrature accuracy sweep.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "colecole/config.hpp"
#include "colecole/driver.hpp"
#include "colecole/errors.hpp"

namespace {

struct CommonArgs {
    std::string config;
    std::vector<std::pair<std::string, std::string>> overrides;
};

// Shared flags; every value lands in the same key=value map the config file
// uses, so the CLI and file syntax stay in lockstep.
void add_override(CLI::App* cmd, CommonArgs& args, const std::string& flag,
                  const std::string& key, const std::string& help) {
    auto cb = [&args, key](const std::string& v) {
        args.overrides.emplace_back(key, v);
    };
    cmd->add_option_function<std::string>(flag, cb, help);
}

colecole::ConfigMap resolve(const CommonArgs& args) {
    colecole::ConfigMap cfg;
    if (!args.config.empty()) cfg = colecole::parse_config_file(args.config);
    for (const auto& [key, val] : args.overrides) cfg[key] = val;
    return cfg;
}

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config, "key = value config file or a run.json");
    add_override(cmd, args, "--out", "out", "output directory");
    add_override(cmd, args, "--alpha", "alpha", "fractional order in (0,1)");
    add_override(cmd, args, "--tau", "tau", "singularity extraction threshold (>= 2)");
    add_override(cmd, args, "--intervals", "intervals", "time subinterval count K");
    add_override(cmd, args, "--colloc", "colloc", "collocation degree per interval");
    add_override(cmd, args, "--map-order", "map_order", "singular map order r");
    add_override(cmd, args, "--quad-n", "quad_n", "kernel quadrature size");
    add_override(cmd, args, "--T", "T", "time horizon");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral solver for electromagnetic waves in Cole-Cole dispersive media"};
    app.require_subcommand(1);

    CommonArgs sim_args, ide_args, conv_args, quad_args;

    CLI::App* sim = app.add_subcommand("simulate", "1D/2D Cole-Cole wave simulation");
    add_common(sim, sim_args);
    add_override(sim, sim_args, "--dim", "dim", "spatial dimension (1 or 2)");
    add_override(sim, sim_args, "--spatial-n", "spatial_n", "spatial polynomial cutoff N");
    add_override(sim, sim_args, "--c", "c", "wave coefficient (direct mode)");
    add_override(sim, sim_args, "--d", "d", "memory coefficient (direct mode)");
    add_override(sim, sim_args, "--lambda", "lambda", "kernel decay (direct mode)");
    add_override(sim, sim_args, "--ic", "ic",
                 "initial profile: square_impulse | sine_product | custom_table");
    add_override(sim, sim_args, "--threads", "threads", "worker threads (0 = auto)");
    sim->add_flag_callback("--dense-output",
                           [&sim_args]() { sim_args.overrides.emplace_back("dense_output", "true"); },
                           "also sample fields inside each time interval");

    CLI::App* ide = app.add_subcommand("ide", "standalone memory-oscillator study");
    add_common(ide, ide_args);
    add_override(ide, ide_args, "--c", "c", "reaction coefficient c");
    add_override(ide, ide_args, "--d", "d", "memory coefficient d");
    add_override(ide, ide_args, "--lambda", "lambda", "kernel decay");
    add_override(ide, ide_args, "--u0", "u0", "initial value");
    add_override(ide, ide_args, "--u1", "u1", "initial slope");
    ide->add_flag_callback("--dense-output",
                           [&ide_args]() { ide_args.overrides.emplace_back("dense_output", "true"); },
                           "sample the trace inside each interval");

    CLI::App* conv = app.add_subcommand("convergence",
                                        "enrichment convergence table on the "
                                        "manufactured fractional-power solution");
    add_common(conv, conv_args);
    add_override(conv, conv_args, "--c", "c", "reaction coefficient c");
    add_override(conv, conv_args, "--d", "d", "memory coefficient d");
    add_override(conv, conv_args, "--lambda", "lambda", "kernel decay");
    add_override(conv, conv_args, "--n-sweep", "n_sweep", "comma list of degrees N");
    add_override(conv, conv_args, "--k-sweep", "k_sweep", "comma list of interval counts K");
    add_override(conv, conv_args, "--taus", "taus", "comma list of extraction thresholds");

    CLI::App* quad = app.add_subcommand("quadtest",
                                        "mapped vs plain Gauss accuracy on the "
                                        "reference kernel integrals");
    quad->add_option("--config", quad_args.config, "key = value config file or a run.json");
    add_override(quad, quad_args, "--out", "out", "output directory");
    add_override(quad, quad_args, "--n-sweep", "n_sweep", "comma list of quadrature sizes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed()) {
            const auto spec = colecole::make_simulate_spec(resolve(sim_args));
            const auto result = colecole::run_simulation(spec);
            std::printf("wrote %zu file(s) to %s (max condition estimate %.3g)\n",
                        result.files_written.size(), spec.out_dir.c_str(),
                        result.max_condition_estimate);
        } else if (ide->parsed()) {
            const auto spec = colecole::make_ide_spec(resolve(ide_args));
            const auto result = colecole::run_ide_study(spec);
            std::printf("wrote %zu file(s) to %s (H(0) = %s)\n",
                        result.files_written.size(), spec.out_dir.c_str(),
                        colecole::format_number(result.h.front()).c_str());
        } else if (conv->parsed()) {
            const auto spec = colecole::make_convergence_spec(resolve(conv_args));
            const auto result = colecole::run_convergence_study(spec);
            std::printf("wrote %zu file(s) to %s\n", result.files_written.size(),
                        spec.out_dir.c_str());
        } else if (quad->parsed()) {
            const auto spec = colecole::make_quadtest_spec(resolve(quad_args));
            const auto result = colecole::run_quadtest(spec);
            std::printf("wrote %zu file(s) to %s\n", result.files_written.size(),
                        spec.out_dir.c_str());
        }
    } catch (const colecole::config_error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
