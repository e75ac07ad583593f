// model.hpp — Two-qubit Rabi model parameters, derived couplings, solver regimes

#pragma once

#include <stdexcept>
#include <string>

namespace qrm2 {

// Z2 parity sector. The integer value is the sign used throughout the
// parity-adapted expansions.
enum class Parity : int { even = +1, odd = -1 };

constexpr int sign_of(Parity p) noexcept { return static_cast<int>(p); }
constexpr const char* to_string(Parity p) noexcept {
    return p == Parity::even ? "even" : "odd";
}

// Which solver path a parameter point is routed to.
enum class Regime { general, equal_coupling, zero_coupling, single_qubit_like };
const char* to_string(Regime r) noexcept;

// Physical parameter set, in units of the cavity frequency (omega == 1).
// Couplings and splittings are canonicalized to be non-negative; flipping the
// sign of either is a gauge choice absorbed by a qubit rotation.
struct ModelParams {
    double delta1{0.0};
    double delta2{0.0};
    double g1{0.0};
    double g2{0.0};
    bool sign_flipped{false};  // true if validate_params canonicalized any sign

    static constexpr double omega = 1.0;
};

struct DerivedCouplings {
    double g_sum{0.0};   // g1 + g2
    double g_diff{0.0};  // g1 - g2; negative when g2 > g1
};

// Validates and canonicalizes raw inputs. Throws std::invalid_argument naming
// the offending field for non-finite values.
ModelParams validate_params(double delta1, double delta2, double g1, double g2);

DerivedCouplings derived_couplings(const ModelParams& p) noexcept;

Regime classify_regime(const ModelParams& p, double eps_eq = 1e-12) noexcept;

}  // namespace qrm2
