// precision.hpp — working-precision ladder for the unequal-coupling G path
//
// The unequal-coupling series are asymptotic: the scaled photon-basis chain
// grows like (g/g')^n and the +g-displaced chain like (g/(g-g'))^n, while
// their dominant parts cancel inside the determinant. Rounding noise breaks
// that cancellation at roughly eps * ratio^n_max, so the working precision
// must scale with n_max * log10(ratio). The ladder below covers n_max up to
// a few hundred at moderate coupling ratios.

#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <utility>

#include "qrm2/model.hpp"

namespace qrm2 {

namespace mp = boost::multiprecision;
using float_d32 = mp::number<mp::cpp_bin_float<32>, mp::et_off>;
using float_d56 = mp::number<mp::cpp_bin_float<56>, mp::et_off>;
using float_d88 = mp::number<mp::cpp_bin_float<88>, mp::et_off>;
using float_d128 = mp::number<mp::cpp_bin_float<128>, mp::et_off>;

enum class PrecisionRung { f64, f80, d32, d56, d88, d128 };

constexpr int rung_digits(PrecisionRung r) noexcept {
    switch (r) {
        case PrecisionRung::f64: return 15;
        case PrecisionRung::f80: return 18;
        case PrecisionRung::d32: return 32;
        case PrecisionRung::d56: return 56;
        case PrecisionRung::d88: return 88;
        case PrecisionRung::d128: return 128;
    }
    return 15;
}

// Per-step growth of the dominant (cancelling) solution parts, relative to
// the physical scale: max over the photon-basis and displaced chains.
inline double pollution_ratio(const ModelParams& p) noexcept {
    const auto [g, gp] = derived_couplings(p);
    const double gmin = std::min(p.g1, p.g2);
    if (g <= 0.0) return 1.0;
    double r = 1.0;
    if (std::abs(gp) > 0.0) r = std::max(r, g / std::abs(gp));
    if (gmin > 0.0) r = std::max(r, g / (2.0 * gmin));
    return r;
}

inline int digits_required(int n_max, double ratio) noexcept {
    const double guard = 14.0;
    if (ratio <= 1.0) return static_cast<int>(guard) + 1;
    return static_cast<int>(std::ceil(n_max * std::log10(ratio) + guard));
}

// Smallest rung with at least the requested decimal digits; clamped indicates
// the top rung was insufficient.
inline std::pair<PrecisionRung, bool> rung_for(int digits) noexcept {
    if (digits <= rung_digits(PrecisionRung::f64)) return {PrecisionRung::f64, false};
    if (digits <= rung_digits(PrecisionRung::f80)) return {PrecisionRung::f80, false};
    if (digits <= 32) return {PrecisionRung::d32, false};
    if (digits <= 56) return {PrecisionRung::d56, false};
    if (digits <= 88) return {PrecisionRung::d88, false};
    return {PrecisionRung::d128, digits > 128};
}

// Invokes fn with a tag identifying the scalar type of the rung.
template <class Fn>
auto dispatch_precision(PrecisionRung rung, Fn&& fn) {
    switch (rung) {
        case PrecisionRung::f64: return fn(std::type_identity<double>{});
        case PrecisionRung::f80: return fn(std::type_identity<long double>{});
        case PrecisionRung::d32: return fn(std::type_identity<float_d32>{});
        case PrecisionRung::d56: return fn(std::type_identity<float_d56>{});
        case PrecisionRung::d88: return fn(std::type_identity<float_d88>{});
        case PrecisionRung::d128: return fn(std::type_identity<float_d128>{});
    }
    return fn(std::type_identity<double>{});
}

}  // namespace qrm2
