// recurrence.hpp — coefficient chains of the two-qubit Rabi solver
//
// Public, double-precision views of the chains in detail/chains.hpp. All
// series are stored pre-scaled (element n holds c_n * scale^n). Operations
// validate regime and pole preconditions and throw typed errors; the
// G-function module drives the same kernels at adaptive precision and with
// its own pole windows.

#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qrm2/model.hpp"

namespace qrm2 {

struct TruncationConfig {
    int n_max{80};     // retained series terms (displaced-space truncation)
    int n_max_step{1};  // increment used by convergence re-runs

    void validate() const {
        if (n_max < 2) throw std::invalid_argument("TruncationConfig: n_max must be >= 2");
        if (n_max_step < 1) throw std::invalid_argument("TruncationConfig: n_max_step must be >= 1");
    }
};

// Trial energy sits within eps_pole of a pole of the named chain.
// space: 'A' (+g displaced), 'B' (+g' displaced), 'I' (integer poles of the
// equal-coupling three-term chain).
struct PoleError : std::runtime_error {
    char space;
    int index;
    PoleError(char space_, int index_, double energy)
        : std::runtime_error(std::string("pole in ") + space_ + "-chain at m=" +
                             std::to_string(index_) + " near E=" + std::to_string(energy)),
          space(space_),
          index(index_) {}
};

// Operation invoked outside the coupling regime it is defined for.
struct RegimeError : std::domain_error {
    using std::domain_error::domain_error;
};

struct DSeries {
    std::vector<double> a, b;  // a_n*scale^n, b_n*scale^n
    Parity parity{Parity::even};
    double energy{0.0};
    double scale{0.0};  // = g1+g2
};

struct ASeries {
    std::vector<double> u, v, w, z;  // c_n*scale^n, scale = g1+g2
    double energy{0.0};
    double scale{0.0};
};

struct BSeries {
    std::vector<double> u, v, w, z;  // c_n*scale^n, scale = g1-g2
    double energy{0.0};
    double scale{0.0};
};

struct EqSeries {
    std::vector<double> u, y, y_swap, z;  // c_n*scale^n, scale = g1+g2
    double energy{0.0};
    double scale{0.0};
};

// One vacuum-overlap projection value. The projection series is asymptotic
// for unequal couplings; it is summed to its smallest term, whose magnitude
// estimates the attainable accuracy.
struct ProjectedValue {
    double value{0.0};
    double tail_estimate{0.0};
    int terms_used{0};
    bool converged{true};  // false when the tail never fell below tail_tol*|value|
};

struct ASeed {
    ProjectedValue v0, w0, z0;
};

struct BSeed {
    ProjectedValue u0, w0, z0;
};

struct EqSeed {
    ProjectedValue y0, y_swap0, z0;
};

enum class ThreeTermSeed { b0_one, a0_one };

// Photon-basis chain from seed (a0, b0). Requires the general regime.
DSeries d_space_coeffs(const ModelParams& p, Parity parity, double energy,
                       std::pair<double, double> init, const TruncationConfig& trunc);

// +g displaced chain from seed (v0, w0, z0). Throws PoleError('A', m) when
// energy is within eps_pole of m - g^2 for a retained m.
ASeries a_space_coeffs(const ModelParams& p, double energy, std::array<double, 3> init,
                       const TruncationConfig& trunc, double eps_pole = 1e-6);

// +g' displaced chain from seed (u0, w0, z0). Throws PoleError('B', m) near
// m - g'^2.
BSeries b_space_coeffs(const ModelParams& p, double energy, std::array<double, 3> init,
                       const TruncationConfig& trunc, double eps_pole = 1e-6);

// Vacuum-overlap seeds of the displaced chains, from the photon-basis series:
//   v0 = sum b_n(-g)^n, w0 = +/- sum b_n g^n, z0 = +/- sum a_n g^n
// and the g'-displacement mirror
//   u0 = sum a_n(-g')^n, w0 = +/- sum b_n g'^n, z0 = +/- sum a_n g'^n.
ASeed a_initial_from_d(const DSeries& d, const ModelParams& p, double tail_tol = 1e-12);
BSeed b_initial_from_d(const DSeries& d, const ModelParams& p, double tail_tol = 1e-12);

// Equal-coupling three-term chain. Seed rule: b0=1 unless delta1 == delta2,
// where a0=1 avoids the spurious divergence of a0 = -E/(d2 +/- d1).
// Throws PoleError('I', m) near integer energies with nonvanishing bracket.
ThreeTermSeed default_three_term_seed(const ModelParams& p) noexcept;
DSeries three_term_coeffs(const ModelParams& p, Parity parity, double energy, ThreeTermSeed seed,
                          const TruncationConfig& trunc, double eps_pole = 1e-6);

// Seeds of the equal-coupling reduced chain: y0 = d2*v0 + d1*w0 and the
// swapped companion y_swap0 = d1*v0 + d2*w0, with (v0, w0) the
// +g-displacement overlaps above; z0 as in the general case.
EqSeed eq_initial_from_d(const DSeries& d, const ModelParams& p, double tail_tol = 1e-12);

// Equal-coupling reduced chain from (y0, y_swap0, z0); poles at m - g^2 only.
EqSeries eq_coupling_coeffs(const ModelParams& p, double energy, const EqSeed& seed,
                            const TruncationConfig& trunc, double eps_pole = 1e-6);

}  // namespace qrm2
