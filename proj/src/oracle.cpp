#include "qrm2/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qrm2::oracle {

namespace {

// d^dag d + c (d^dag + d) on |0..N>, tridiagonal.
Eigen::MatrixXd displaced_number_op(double c, int n) {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n + 1, n + 1);
    for (int i = 0; i <= n; ++i) {
        t(i, i) = static_cast<double>(i);
        if (i < n) {
            const double hop = c * std::sqrt(static_cast<double>(i + 1));
            t(i, i + 1) = hop;
            t(i + 1, i) = hop;
        }
    }
    return t;
}

}  // namespace

TruncatedHamiltonian build_hamiltonian(const ModelParams& p, int n_photon_max) {
    if (n_photon_max < 1) {
        throw std::invalid_argument("build_hamiltonian: n_photon_max must be >= 1");
    }
    if (n_photon_max > 1023) {
        throw std::length_error("build_hamiltonian: dense storage budget exceeded (N > 1023)");
    }
    const int nb = n_photon_max + 1;
    const auto [g, gp] = derived_couplings(p);

    TruncatedHamiltonian h;
    h.n_photon_max = n_photon_max;
    h.params = p;
    h.matrix = Eigen::MatrixXd::Zero(4 * nb, 4 * nb);

    const double displacement[4] = {g, gp, -gp, -g};
    for (int q = 0; q < 4; ++q) {
        h.matrix.block(q * nb, q * nb, nb, nb) = displaced_number_op(displacement[q], n_photon_max);
    }
    const Eigen::MatrixXd d1 = p.delta1 * Eigen::MatrixXd::Identity(nb, nb);
    const Eigen::MatrixXd d2 = p.delta2 * Eigen::MatrixXd::Identity(nb, nb);
    // qubit flips: -delta2 couples (1,1)<->(1,-1) and (-1,1)<->(-1,-1);
    //              -delta1 couples (1,1)<->(-1,1) and (1,-1)<->(-1,-1).
    h.matrix.block(0 * nb, 1 * nb, nb, nb) = -d2;
    h.matrix.block(1 * nb, 0 * nb, nb, nb) = -d2;
    h.matrix.block(2 * nb, 3 * nb, nb, nb) = -d2;
    h.matrix.block(3 * nb, 2 * nb, nb, nb) = -d2;
    h.matrix.block(0 * nb, 2 * nb, nb, nb) = -d1;
    h.matrix.block(2 * nb, 0 * nb, nb, nb) = -d1;
    h.matrix.block(1 * nb, 3 * nb, nb, nb) = -d1;
    h.matrix.block(3 * nb, 1 * nb, nb, nb) = -d1;
    return h;
}

ParityBlocks parity_blocks(const TruncatedHamiltonian& h) {
    const int nb = h.n_photon_max + 1;
    const int dim = 4 * nb;
    // Orthonormal parity-adapted basis, one column per basis vector.
    // Ordering inside each block: a-type (n=0..N), then b-type (n=0..N).
    auto basis_for = [&](int parity) {
        Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(dim, 2 * nb);
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        for (int n = 0; n < nb; ++n) {
            const double s = parity * ((n % 2 == 0) ? 1.0 : -1.0);
            basis(0 * nb + n, n) = inv_sqrt2;           // |1,1>
            basis(3 * nb + n, n) = s * inv_sqrt2;       // |-1,-1>
            basis(1 * nb + n, nb + n) = inv_sqrt2;      // |1,-1>
            basis(2 * nb + n, nb + n) = s * inv_sqrt2;  // |-1,1>
        }
        return basis;
    };
    const Eigen::MatrixXd be = basis_for(+1);
    const Eigen::MatrixXd bo = basis_for(-1);
    ParityBlocks blocks;
    blocks.even_block = be.transpose() * h.matrix * be;
    blocks.odd_block = bo.transpose() * h.matrix * bo;
    // Symmetrize away representation round-off so downstream checks see an
    // exactly symmetric matrix.
    blocks.even_block = ((blocks.even_block + blocks.even_block.transpose()) / 2.0).eval();
    blocks.odd_block = ((blocks.odd_block + blocks.odd_block.transpose()) / 2.0).eval();
    return blocks;
}

Eigen::MatrixXd parity_block(const ModelParams& p, Parity parity, int n_photon_max) {
    const int nb = n_photon_max + 1;
    const auto [g, gp] = derived_couplings(p);
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(2 * nb, 2 * nb);
    block.block(0, 0, nb, nb) = displaced_number_op(g, n_photon_max);
    block.block(nb, nb, nb, nb) = displaced_number_op(gp, n_photon_max);
    for (int n = 0; n < nb; ++n) {
        const double k = p.delta2 + sign_of(parity) * ((n % 2 == 0) ? 1.0 : -1.0) * p.delta1;
        block(n, nb + n) = -k;
        block(nb + n, n) = -k;
    }
    return block;
}

std::vector<double> eigen_spectrum(const Eigen::MatrixXd& block) {
    if (block.rows() != block.cols() || block.rows() == 0) {
        throw std::invalid_argument("eigen_spectrum: matrix must be square and non-empty");
    }
    if ((block - block.transpose()).cwiseAbs().maxCoeff() != 0.0) {
        throw std::invalid_argument("eigen_spectrum: matrix must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(block);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigen_spectrum: eigensolver failed to converge");
    }
    const double norm = std::max(block.cwiseAbs().maxCoeff(), 1.0);
    const int n_check = std::min<int>(20, static_cast<int>(block.rows()));
    for (int i = 0; i < n_check; ++i) {
        const Eigen::VectorXd v = solver.eigenvectors().col(i);
        const double residual = (block * v - solver.eigenvalues()(i) * v).norm();
        if (residual > 1e-9 * norm) {
            throw std::runtime_error("eigen_spectrum: eigenpair residual check failed");
        }
    }
    return {solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size()};
}

std::vector<double> levels(const ModelParams& p, Parity parity, int n_photon_max) {
    return eigen_spectrum(parity_block(p, parity, n_photon_max));
}

ConvergedLevels levels_in_window(const ModelParams& p, Parity parity, int n_photon_max,
                                 double e_min, double e_max) {
    auto in_window = [&](const std::vector<double>& all) {
        std::vector<double> out;
        for (double e : all) {
            if (e > e_min && e < e_max) out.push_back(e);
        }
        return out;
    };
    const auto base = in_window(levels(p, parity, n_photon_max));
    const int n_ref = static_cast<int>(std::ceil(1.3 * n_photon_max));
    const auto ref = in_window(levels(p, parity, n_ref));

    ConvergedLevels result;
    result.values = base;
    result.converged = base.size() == ref.size();
    if (result.converged) {
        for (std::size_t i = 0; i < base.size(); ++i) {
            result.max_shift = std::max(result.max_shift, std::abs(base[i] - ref[i]));
        }
        result.converged = result.max_shift < 1e-9;
    } else {
        result.max_shift = std::numeric_limits<double>::infinity();
    }
    return result;
}

ComparisonReport compare_spectra(const std::vector<double>& solver_levels,
                                 const std::vector<double>& oracle_levels,
                                 double match_tol) {
    ComparisonReport report;
    std::vector<bool> solver_used(solver_levels.size(), false);
    std::vector<bool> oracle_used(oracle_levels.size(), false);

    // Repeatedly match the globally closest unmatched pair.
    while (true) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < solver_levels.size(); ++i) {
            if (solver_used[i]) continue;
            for (std::size_t j = 0; j < oracle_levels.size(); ++j) {
                if (oracle_used[j]) continue;
                const double d = std::abs(solver_levels[i] - oracle_levels[j]);
                if (d < best) {
                    best = d;
                    bi = i;
                    bj = j;
                }
            }
        }
        if (!std::isfinite(best) || best > match_tol) break;
        solver_used[bi] = true;
        oracle_used[bj] = true;
        report.matched.push_back({solver_levels[bi], oracle_levels[bj]});
    }
    for (std::size_t i = 0; i < solver_levels.size(); ++i) {
        if (!solver_used[i]) report.unmatched_solver.push_back(solver_levels[i]);
    }
    for (std::size_t j = 0; j < oracle_levels.size(); ++j) {
        if (!oracle_used[j]) report.unmatched_oracle.push_back(oracle_levels[j]);
    }
    double sum = 0.0;
    for (const auto& m : report.matched) {
        const double d = std::abs(m.solver_energy - m.oracle_energy);
        report.max_abs_residual = std::max(report.max_abs_residual, d);
        sum += d;
    }
    report.mean_abs_residual = report.matched.empty() ? 0.0 : sum / report.matched.size();
    return report;
}

}  // namespace qrm2::oracle
