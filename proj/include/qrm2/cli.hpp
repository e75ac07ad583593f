// cli.hpp — command-line front door
//
// Commands: spectrum | gscan | sweep | verify | darkstate.
// Exit codes: 0 success, 2 usage error, 3 convergence warning present,
// 4 verification failure.

#pragma once

#include <optional>
#include <string>

#include "qrm2/io.hpp"
#include "qrm2/spectrum.hpp"

namespace qrm2::cli {

struct RunConfig {
    double delta1{0.0}, delta2{0.0}, g1{0.0}, g2{0.0};
    std::optional<double> e_min, e_max;
    double grid_step{0.005};
    int n_max{0};  // 0 = regime default
    int oracle_n{200};
    std::string parity{"both"};
    std::string out{"csv"};
    std::string output_path;  // empty = stdout
    double match_tol{1e-6};
    // sweep
    double g_from{0.05}, g_to{1.0};
    int g_steps{20};
    // gscan
    int samples{1000};

    SolveOptions solve_options() const;
    ModelParams params() const;  // validated + canonicalized
};

// Parses argv and runs one command. Writes data to config.output_path or
// stdout; diagnostics go to stderr.
int run(int argc, const char* const* argv);

}  // namespace qrm2::cli
