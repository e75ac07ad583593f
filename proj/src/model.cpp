#include "qrm2/model.hpp"

#include <cmath>

namespace qrm2 {

const char* to_string(Regime r) noexcept {
    switch (r) {
        case Regime::general: return "general";
        case Regime::equal_coupling: return "equal_coupling";
        case Regime::zero_coupling: return "zero_coupling";
        case Regime::single_qubit_like: return "single_qubit_like";
    }
    return "unknown";
}

ModelParams validate_params(double delta1, double delta2, double g1, double g2) {
    const struct { const char* name; double value; } fields[] = {
        {"delta1", delta1}, {"delta2", delta2}, {"g1", g1}, {"g2", g2}};
    for (const auto& f : fields) {
        if (!std::isfinite(f.value)) {
            throw std::invalid_argument(std::string(f.name) + ": value must be finite");
        }
    }
    ModelParams p;
    p.sign_flipped = delta1 < 0.0 || delta2 < 0.0 || g1 < 0.0 || g2 < 0.0;
    p.delta1 = std::abs(delta1);
    p.delta2 = std::abs(delta2);
    p.g1 = std::abs(g1);
    p.g2 = std::abs(g2);
    return p;
}

DerivedCouplings derived_couplings(const ModelParams& p) noexcept {
    return {p.g1 + p.g2, p.g1 - p.g2};
}

Regime classify_regime(const ModelParams& p, double eps_eq) noexcept {
    const bool z1 = p.g1 <= eps_eq;
    const bool z2 = p.g2 <= eps_eq;
    if (z1 && z2) return Regime::zero_coupling;
    if (z1 != z2) return Regime::single_qubit_like;
    if (std::abs(p.g1 - p.g2) <= eps_eq) return Regime::equal_coupling;
    return Regime::general;
}

}  // namespace qrm2
