#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "qrm2/oracle.hpp"

using namespace qrm2;

namespace {

const ModelParams kFig1 = validate_params(0.7, 0.4, 0.8, 0.4);

std::vector<double> combined_levels(const ModelParams& p, int n) {
    auto all = oracle::levels(p, Parity::even, n);
    const auto odd = oracle::levels(p, Parity::odd, n);
    all.insert(all.end(), odd.begin(), odd.end());
    std::sort(all.begin(), all.end());
    return all;
}

}  // namespace

TEST_CASE("free field is diagonal with the photon ladder repeated per qubit state") {
    const auto h = oracle::build_hamiltonian(validate_params(0, 0, 0, 0), 3);
    CHECK(h.dim() == 16);
    for (int i = 0; i < 16; ++i) {
        for (int j = 0; j < 16; ++j) {
            if (i == j) {
                CHECK(h.matrix(i, j) == static_cast<double>(i % 4));
            } else {
                CHECK(h.matrix(i, j) == 0.0);
            }
        }
    }
}

TEST_CASE("N=1 matrix entries transcribe the rotated block structure") {
    const auto h = oracle::build_hamiltonian(kFig1, 1);
    REQUIRE(h.dim() == 8);
    // photon couplings c*sqrt(1) on each diagonal block, c in {1.2, 0.4, -0.4, -1.2}
    CHECK(h.matrix(0, 1) == doctest::Approx(1.2));
    CHECK(h.matrix(2, 3) == doctest::Approx(0.4));
    CHECK(h.matrix(4, 5) == doctest::Approx(-0.4));
    CHECK(h.matrix(6, 7) == doctest::Approx(-1.2));
    // photon number on the diagonal
    for (int q = 0; q < 4; ++q) {
        CHECK(h.matrix(2 * q, 2 * q) == 0.0);
        CHECK(h.matrix(2 * q + 1, 2 * q + 1) == 1.0);
    }
    // qubit flips: -delta2 between blocks (0,1) and (2,3); -delta1 between (0,2) and (1,3)
    CHECK(h.matrix(0, 2) == doctest::Approx(-0.4));
    CHECK(h.matrix(4, 6) == doctest::Approx(-0.4));
    CHECK(h.matrix(0, 4) == doctest::Approx(-0.7));
    CHECK(h.matrix(2, 6) == doctest::Approx(-0.7));
    // no direct coupling between (1,1) and (-1,-1)
    CHECK(h.matrix(0, 6) == 0.0);
    CHECK(h.matrix(1, 7) == 0.0);
}

TEST_CASE("built Hamiltonians are exactly symmetric") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(0.0, 1.5);
    for (int i = 0; i < 5; ++i) {
        const auto p = validate_params(dist(rng), dist(rng), dist(rng), dist(rng));
        const auto h = oracle::build_hamiltonian(p, 12);
        CHECK((h.matrix - h.matrix.transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("build_hamiltonian rejects out-of-budget truncations") {
    CHECK_THROWS_AS(oracle::build_hamiltonian(kFig1, 0), std::invalid_argument);
    CHECK_THROWS_AS(oracle::build_hamiltonian(kFig1, 5000), std::length_error);
}

TEST_CASE("eigen_spectrum closed form for a 2x2 block") {
    for (double delta : {0.3, 0.7, 1.1}) {
        Eigen::MatrixXd m(2, 2);
        m << 0.0, -delta, -delta, 1.0;
        const auto ev = oracle::eigen_spectrum(m);
        const double root = std::sqrt(1.0 + 4.0 * delta * delta);
        CHECK(ev[0] == doctest::Approx((1.0 - root) / 2.0).epsilon(1e-14));
        CHECK(ev[1] == doctest::Approx((1.0 + root) / 2.0).epsilon(1e-14));
    }
}

TEST_CASE("eigen_spectrum rejects non-symmetric input") {
    Eigen::MatrixXd m(2, 2);
    m << 0.0, 1.0, 0.5, 1.0;
    CHECK_THROWS_AS(oracle::eigen_spectrum(m), std::invalid_argument);
}

TEST_CASE("decoupled qubits give the displaced-oscillator ladders") {
    const auto p = validate_params(0, 0, 0.8, 0.3);
    const auto [g, gp] = derived_couplings(p);
    for (Parity parity : {Parity::even, Parity::odd}) {
        const auto ev = oracle::levels(p, parity, 200);
        std::vector<double> expect;
        for (int n = 0; n < 8; ++n) {
            expect.push_back(n - g * g);
            expect.push_back(n - gp * gp);
        }
        std::sort(expect.begin(), expect.end());
        for (int k = 0; k < 12; ++k) {
            CHECK(ev[k] == doctest::Approx(expect[k]).epsilon(1e-10));
        }
    }
}

TEST_CASE("parity blocks have the right dimensions and reproduce the full spectrum") {
    const int n = 24;
    const auto h = oracle::build_hamiltonian(kFig1, n);
    const auto blocks = oracle::parity_blocks(h);
    CHECK(blocks.even_block.rows() == 2 * (n + 1));
    CHECK(blocks.odd_block.rows() == 2 * (n + 1));

    auto even = oracle::eigen_spectrum(blocks.even_block);
    const auto odd = oracle::eigen_spectrum(blocks.odd_block);
    even.insert(even.end(), odd.begin(), odd.end());
    std::sort(even.begin(), even.end());
    const auto full = oracle::eigen_spectrum(h.matrix);
    REQUIRE(even.size() == full.size());
    for (std::size_t k = 0; k < full.size(); ++k) {
        CHECK(even[k] == doctest::Approx(full[k]).epsilon(1e-10));
    }
}

TEST_CASE("direct parity_block assembly matches the basis-change route") {
    const int n = 16;
    const auto h = oracle::build_hamiltonian(kFig1, n);
    const auto blocks = oracle::parity_blocks(h);
    const auto even = oracle::parity_block(kFig1, Parity::even, n);
    const auto odd = oracle::parity_block(kFig1, Parity::odd, n);
    CHECK((blocks.even_block - even).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((blocks.odd_block - odd).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("cross-parity matrix elements vanish") {
    // independent re-derivation of the parity combinations
    const int n = 10;
    const int nb = n + 1;
    const auto h = oracle::build_hamiltonian(kFig1, n);
    auto basis_for = [&](int parity) {
        Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(4 * nb, 2 * nb);
        for (int k = 0; k < nb; ++k) {
            const double s = parity * ((k % 2 == 0) ? 1.0 : -1.0);
            basis(0 * nb + k, k) = 1.0 / std::sqrt(2.0);
            basis(3 * nb + k, k) = s / std::sqrt(2.0);
            basis(1 * nb + k, nb + k) = 1.0 / std::sqrt(2.0);
            basis(2 * nb + k, nb + k) = s / std::sqrt(2.0);
        }
        return basis;
    };
    const Eigen::MatrixXd cross = basis_for(+1).transpose() * h.matrix * basis_for(-1);
    const double scale = h.matrix.cwiseAbs().maxCoeff();
    CHECK(cross.cwiseAbs().maxCoeff() < 1e-14 * scale);
}

TEST_CASE("zero coupling parity assignment matches n +- d1 +- d2") {
    const auto p = validate_params(0.7, 0.4, 0.0, 0.0);
    for (Parity parity : {Parity::even, Parity::odd}) {
        std::vector<double> expect;
        for (int n = 0; n < 10; ++n) {
            for (int s1 : {+1, -1}) {
                for (int s2 : {+1, -1}) {
                    if (s1 * s2 * ((n % 2 == 0) ? 1 : -1) == sign_of(parity)) {
                        expect.push_back(n - s1 * p.delta1 - s2 * p.delta2);
                    }
                }
            }
        }
        std::sort(expect.begin(), expect.end());
        const auto ev = oracle::levels(p, parity, 120);
        for (int k = 0; k < 14; ++k) {
            CHECK(ev[k] == doctest::Approx(expect[k]).epsilon(1e-10));
        }
    }
}

TEST_CASE("variational monotonicity in the truncation") {
    for (Parity parity : {Parity::even, Parity::odd}) {
        const auto small = oracle::levels(kFig1, parity, 30);
        const auto large = oracle::levels(kFig1, parity, 40);
        for (int k = 0; k < 10; ++k) {
            CHECK(large[k] <= small[k] + 1e-12);
        }
    }
}

TEST_CASE("gauge and relabeling invariance") {
    const auto base = validate_params(0.7, 0.4, 0.8, 0.3);
    const auto relabeled = validate_params(0.4, 0.7, 0.3, 0.8);
    for (Parity parity : {Parity::even, Parity::odd}) {
        const auto a = oracle::levels(base, parity, 80);
        const auto b = oracle::levels(relabeled, parity, 80);
        for (int k = 0; k < 16; ++k) {
            CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-10));
        }
    }
}

TEST_CASE("truncation convergence at the reference parameters") {
    for (Parity parity : {Parity::even, Parity::odd}) {
        const auto a = oracle::levels(kFig1, parity, 200);
        const auto b = oracle::levels(kFig1, parity, 260);
        for (int k = 0; k < 20; ++k) {
            CHECK(std::abs(a[k] - b[k]) < 1e-9);
        }
    }
}

TEST_CASE("levels_in_window flags convergence") {
    const auto lv = oracle::levels_in_window(kFig1, Parity::even, 200, -1.0, 3.0);
    CHECK(lv.converged);
    CHECK(lv.values.size() == 8);
    const auto tiny = oracle::levels_in_window(kFig1, Parity::even, 8, -1.0, 3.0);
    CHECK_FALSE(tiny.converged);
}

TEST_CASE("compare_spectra greedy matching") {
    const std::vector<double> a{-0.5, 0.2, 1.7};
    CHECK(oracle::compare_spectra(a, a, 1e-9).max_abs_residual == 0.0);
    CHECK(oracle::compare_spectra(a, a, 1e-9).unmatched_solver.empty());

    const std::vector<double> oracle_side{-0.5, 0.2, 0.64, 1.7};
    const auto rep = oracle::compare_spectra(a, oracle_side, 1e-3);
    CHECK(rep.matched.size() == 3);
    REQUIRE(rep.unmatched_oracle.size() == 1);
    CHECK(rep.unmatched_oracle[0] == 0.64);
}

TEST_CASE("displaced-oscillator limit: unmatched exceptional level is reported") {
    // at delta1=delta2=0 every pole energy is an eigenvalue; a solver list
    // missing one shows up under unmatched_oracle
    const auto p = validate_params(0, 0, 0.8, 0.3);
    const auto ev = oracle::levels(p, Parity::even, 160);
    std::vector<double> solver(ev.begin(), ev.begin() + 6);
    solver.erase(solver.begin() + 2);
    const auto rep = oracle::compare_spectra(
        solver, std::vector<double>(ev.begin(), ev.begin() + 6), 1e-6);
    CHECK(rep.matched.size() == 5);
    CHECK(rep.unmatched_oracle.size() == 1);
}
