/// @file cli.hpp
/// @brief Command implementations behind the odeflow binary. Each command
/// returns a process exit code: 0 success/verified, 1 checked failure
/// (verification or integration or no certificate), 2 invalid input.

#pragma once

#include <cstdint>
#include <string>

namespace odeflow {

struct RunConfig {
    std::string command;      // certify | embed | verify | simulate | gates
    std::string model_path;
    std::string gate;         // gate name, alternative to a model file
    std::string params;       // "K=V,..." gate parameters
    std::uint64_t seed = 0;
    int samples = 100;
    double tol = 1e-10;
    double step = 1e-3;
    double t0 = 0.0;
    double t1 = 10.0;
    std::string out_path;     // empty: stdout
    bool particles = false;
    std::string integrator = "rk4";  // rk4 | midpoint
    std::string y0;           // comma-separated initial state, overrides model
    double fp_tol = 1e-14;
    bool inject_skew_defect = false;  // debug hook: breaks one S generator
};

int cmd_certify(const RunConfig& config);
int cmd_embed(const RunConfig& config);
int cmd_verify(const RunConfig& config);
int cmd_simulate(const RunConfig& config);
int cmd_gates(const RunConfig& config);

/// Dispatches on config.command and maps exceptions to exit codes
/// (std::invalid_argument -> 2, runtime failures -> 1).
int run_cli(const RunConfig& config);

}  // namespace odeflow
