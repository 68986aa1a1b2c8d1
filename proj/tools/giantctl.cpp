// giantctl.cpp — Command-line front end over the giant C interface

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "giant/giant_c.h"

int main(int argc, char** argv) {
    CLI::App app{"Giant-emitter simulator and design toolkit"};
    app.set_version_flag("--version", std::string(giant_version()));
    app.require_subcommand(1, 1);

    std::string config;
    std::string out;
    int threads = 0;
    double dt = 0.0;
    app.add_option("--config", config, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
    app.add_option("--out", out, "Output directory (overrides output_dir)");
    app.add_option("--threads", threads, "Worker threads (default: all cores)")->check(CLI::PositiveNumber);
    app.add_option("--dt", dt, "Integration step override")->check(CLI::PositiveNumber);
    app.fallthrough();

    app.add_subcommand("simulate", "Propagate one emitter and export fields and series");
    app.add_subcommand("design", "Inverse-design and truncate a coupling profile");
    app.add_subcommand("floquet-check", "Compare moving and averaged couplings over a drive sweep");
    app.add_subcommand("interactions", "Collective coherent and dissipative matrices");
    app.add_subcommand("spectral-density", "Coupling-weighted density of states");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const std::string sub = app.get_subcommands().front()->get_name();
    const int code = giant_run(sub.c_str(), config.c_str(), out.empty() ? nullptr : out.c_str(), threads, dt);
    if (code != 0) std::fprintf(stderr, "%s\n", giant_last_error());
    return code;
}
