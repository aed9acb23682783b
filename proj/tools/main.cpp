/// @file main.cpp
/// @brief odeflow command line: certify / embed / verify / simulate / gates.

#include <CLI11.hpp>

#include <string>

#include "odeflow/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"odeflow: conservation certificates and Euler-flow embeddings "
                 "for quadratic ODEs"};
    app.require_subcommand(1);

    odeflow::RunConfig config;
    std::string tspan;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--model", config.model_path, "model JSON file");
        cmd->add_option("--gate", config.gate, "built-in gate name");
        cmd->add_option("--params", config.params, "gate parameters K=V,...");
        cmd->add_option("--seed", config.seed, "master seed (default 0)");
        cmd->add_option("--out", config.out_path, "output path (default stdout)");
    };

    CLI::App* certify = app.add_subcommand("certify", "find a conservation certificate");
    add_common(certify);
    certify->add_option("--tol", config.tol, "certificate residual tolerance");

    CLI::App* embed = app.add_subcommand("embed", "construct the Euler-flow embedding");
    add_common(embed);
    embed->add_option("--tol", config.tol, "certificate residual tolerance");
    embed->add_option("--samples", config.samples, "sample budget for choosing C");

    CLI::App* verify = app.add_subcommand("verify", "run the equation check suite");
    add_common(verify);
    verify->add_option("--tol", config.tol, "certificate residual tolerance");
    verify->add_option("--samples", config.samples, "pointwise samples per check");
    verify
        ->add_flag("--inject-skew-defect", config.inject_skew_defect,
                   "debug: corrupt one S generator (negative control)")
        ->group("");

    CLI::App* simulate = app.add_subcommand("simulate", "integrate the ODE");
    add_common(simulate);
    simulate->add_option("--step", config.step, "integrator step (default 1e-3)");
    simulate->add_option("--tspan", tspan, "time span A:B (default 0:10)");
    simulate->add_option("--integrator", config.integrator, "rk4 | midpoint");
    simulate->add_option("--y0", config.y0, "initial state y1,y2,...");
    simulate->add_option("--fp-tol", config.fp_tol, "midpoint fixed-point tolerance");
    simulate->add_flag("--particles", config.particles, "also export the SO(n) particle flow");

    CLI::App* gates = app.add_subcommand("gates", "list gates or emit a gate model");
    add_common(gates);

    CLI11_PARSE(app, argc, argv);

    if (!tspan.empty()) {
        const auto colon = tspan.find(':');
        if (colon == std::string::npos) {
            std::fprintf(stderr, "error: --tspan expects A:B\n");
            return 2;
        }
        try {
            config.t0 = std::stod(tspan.substr(0, colon));
            config.t1 = std::stod(tspan.substr(colon + 1));
        } catch (const std::exception&) {
            std::fprintf(stderr, "error: --tspan expects numeric A:B\n");
            return 2;
        }
    }

    for (auto* sub : {certify, embed, verify, simulate, gates}) {
        if (sub->parsed()) {
            config.command = sub->get_name();
            break;
        }
    }
    return odeflow::run_cli(config);
}
