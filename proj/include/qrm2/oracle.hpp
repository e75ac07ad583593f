// oracle.hpp — Exact-diagonalization ground truth in a truncated Fock basis
//
// The rotated Hamiltonian is assembled as a dense symmetric matrix over the
// product basis {|1,1>, |1,-1>, |-1,1>, |-1,-1>} x {|0..N>}, block-diagonalized
// into the two parity sectors, and solved with a dense symmetric eigensolver.
// Every G-function level is validated against these eigenvalues.

#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

#include "qrm2/model.hpp"

namespace qrm2::oracle {

struct TruncatedHamiltonian {
    Eigen::MatrixXd matrix;  // dim 4*(N+1), exactly symmetric
    int n_photon_max{0};
    ModelParams params;

    int dim() const noexcept { return static_cast<int>(matrix.rows()); }
};

struct ParityBlocks {
    Eigen::MatrixXd even_block;  // dim 2*(N+1)
    Eigen::MatrixXd odd_block;   // dim 2*(N+1)
};

// Assembles the full rotated Hamiltonian. Throws std::length_error when the
// requested truncation exceeds the dense-storage budget.
TruncatedHamiltonian build_hamiltonian(const ModelParams& p, int n_photon_max);

// Change of basis to the parity-adapted combinations
//   (|1,1> +- (-1)^n |-1,-1>)/sqrt(2),  (|1,-1> +- (-1)^n |-1,1>)/sqrt(2).
// Cross-parity matrix elements vanish identically; the two diagonal blocks
// are returned.
ParityBlocks parity_blocks(const TruncatedHamiltonian& h);

// Direct assembly of one parity block without building the full matrix:
//   [[ T(g), -K ], [ -K, T(g') ]],  T(c) = diag(n) + c*(sqrt(n+1) off-diag),
//   K = diag(delta2 + parity*(-1)^n*delta1).
Eigen::MatrixXd parity_block(const ModelParams& p, Parity parity, int n_photon_max);

// All eigenvalues of a symmetric matrix, ascending. Verifies the input is
// exactly symmetric and checks eigenpair residuals ||Hv - lambda v|| on the
// lowest 20 pairs against 1e-9*||H||; throws on contract violations.
std::vector<double> eigen_spectrum(const Eigen::MatrixXd& block);

// Eigenvalues of one parity sector.
std::vector<double> levels(const ModelParams& p, Parity parity, int n_photon_max);

// Levels restricted to [e_min, e_max], with an automatic convergence check:
// the truncation is accepted when N and ceil(1.3*N) agree to 1e-9 on every
// level in the window.
struct ConvergedLevels {
    std::vector<double> values;
    bool converged{false};
    double max_shift{0.0};
};
ConvergedLevels levels_in_window(const ModelParams& p, Parity parity, int n_photon_max,
                                 double e_min, double e_max);

struct ComparisonReport {
    struct Pair {
        double solver_energy;
        double oracle_energy;
    };
    std::vector<Pair> matched;
    std::vector<double> unmatched_solver;
    std::vector<double> unmatched_oracle;
    double max_abs_residual{0.0};
    double mean_abs_residual{0.0};
};

// Greedy nearest matching between a solver level list and an oracle level
// list; pairs farther apart than match_tol stay unmatched.
ComparisonReport compare_spectra(const std::vector<double>& solver_levels,
                                 const std::vector<double>& oracle_levels,
                                 double match_tol);

}  // namespace qrm2::oracle
