#include "qrm2/gfunction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qrm2/detail/chains.hpp"
#include "qrm2/precision.hpp"

namespace qrm2 {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool near_shifted_integer(double energy, double base, int n_max, double eps) {
    const double x = energy - base;
    const int m = static_cast<int>(std::lround(x));
    return m >= 0 && m <= n_max && std::abs(x - m) < eps;
}

bool pole_adjacent_energy(const ModelParams& p, Regime regime, double energy,
                          const TruncationConfig& trunc, double eps_pole,
                          const detail::ChainConstants<double>* cc) {
    const auto [g, gp] = derived_couplings(p);
    if (near_shifted_integer(energy, -g * g, trunc.n_max, eps_pole)) return true;
    if (regime == Regime::general) {
        return near_shifted_integer(energy, -gp * gp, trunc.n_max, eps_pole);
    }
    // equal coupling: integer poles of the three-term chain, lifted where the
    // bracket factor vanishes
    const int m = static_cast<int>(std::lround(energy));
    if (m >= 0 && m <= trunc.n_max && std::abs(energy - m) < eps_pole && cc != nullptr &&
        std::abs(cc->bracket(m)) > 1e-14) {
        return true;
    }
    return false;
}

PrecisionRung select_rung(const ModelParams& p, const TruncationConfig& trunc,
                          const GOptions& opts, bool* clamped) {
    const int digits = opts.forced_digits > 0
                           ? opts.forced_digits
                           : digits_required(trunc.n_max + trunc.n_max_step, pollution_ratio(p));
    auto [rung, was_clamped] = rung_for(digits);
    if (clamped != nullptr) *clamped = was_clamped;
    return rung;
}

struct DetParts {
    double g11, g12, g21, g22;
    bool tail_warning;
};

template <class Real>
DetParts eval_det_parts(const ModelParams& p, Parity parity, double energy, int n_max) {
    const auto c = detail::ChainConstants<Real>::make(p, parity);
    const Real e(energy);
    const Real par(sign_of(parity));
    double entries[2][2];
    bool warning = false;
    for (int col = 0; col < 2; ++col) {
        const Real a0 = col == 0 ? Real(1) : Real(0);
        const Real b0 = col == 0 ? Real(0) : Real(1);
        const auto d = detail::d_chain(c, e, a0, b0, n_max);
        const auto seeds = detail::project_seeds(c, d);
        if (seeds.a_turn >= n_max || seeds.b_turn >= n_max) warning = true;
        const auto a = detail::a_chain(c, e, seeds.v0_a, seeds.w0_a, seeds.z0_a, n_max);
        const auto b = detail::b_chain(c, e, seeds.u0_b, seeds.w0_b, seeds.z0_b, n_max);
        Real ga(0), gb(0);
        for (int n = 0; n <= n_max; ++n) {
            ga += a.u[n] - par * a.z[n];
            gb += b.v[n] - par * b.w[n];
        }
        entries[0][col] = static_cast<double>(ga);
        entries[1][col] = static_cast<double>(gb);
    }
    return {entries[0][0], entries[0][1], entries[1][0], entries[1][1], warning};
}

template <class Real>
double eval_equal_g(const ModelParams& p, Parity parity, double energy, int n_max,
                    double tail_tol, bool* tail_warning) {
    const auto c = detail::ChainConstants<Real>::make(p, parity);
    const Real e(energy);
    const Real par(sign_of(parity));
    const bool seed_b0 = std::abs(p.delta1 - p.delta2) > 1e-12;
    const auto d = detail::three_term_chain(c, e, seed_b0, n_max);
    // +g-displacement overlaps
    Real v0(0), w0(0), z0(0);
    for (int n = 0; n <= n_max; ++n) {
        const Real sgn = (n % 2 == 0) ? Real(1) : Real(-1);
        v0 += d.b[n] * sgn;
        w0 += d.b[n];
        z0 += d.a[n];
    }
    w0 *= par;
    z0 *= par;
    const Real y0 = c.d2 * v0 + c.d1 * w0;
    const Real ys0 = c.d1 * v0 + c.d2 * w0;
    const auto q = detail::eq_chain(c, e, y0, ys0, z0, n_max);
    Real sum(0);
    using std::abs;
    Real peak(0), last(0);
    for (int n = 0; n <= n_max; ++n) {
        const Real term = q.u[n] - par * q.z[n];
        sum += term;
        last = abs(term);
        if (last > peak) peak = last;
    }
    if (tail_warning != nullptr) {
        *tail_warning = peak > Real(0) && last > Real(tail_tol) * peak;
    }
    return static_cast<double>(sum);
}

}  // namespace

std::vector<double> PoleMap::all() const {
    std::vector<double> merged = a_poles;
    merged.insert(merged.end(), b_poles.begin(), b_poles.end());
    for (int m : integer_poles) merged.push_back(static_cast<double>(m));
    std::sort(merged.begin(), merged.end());
    return merged;
}

PoleMap pole_map(const ModelParams& p, const TruncationConfig& trunc) {
    trunc.validate();
    const auto [g, gp] = derived_couplings(p);
    const Regime regime = classify_regime(p);
    PoleMap map;
    for (int m = 0; m <= trunc.n_max; ++m) {
        map.a_poles.push_back(m - g * g);
    }
    if (regime == Regime::equal_coupling) {
        for (int m = 0; m <= trunc.n_max; ++m) map.integer_poles.push_back(m);
    } else {
        for (int m = 0; m <= trunc.n_max; ++m) map.b_poles.push_back(m - gp * gp);
    }
    return map;
}

double g_entry(const ModelParams& p, Parity parity, double energy, int which,
               const TruncationConfig& trunc, const GOptions& opts) {
    if (which != 11 && which != 12 && which != 21 && which != 22) {
        throw std::invalid_argument("g_entry: which must be one of 11, 12, 21, 22");
    }
    const GEvaluation eval = g_det(p, parity, energy, trunc, opts);
    if (eval.pole_adjacent) {
        const auto [g, gp] = derived_couplings(p);
        const char space = near_shifted_integer(energy, -g * g, trunc.n_max, opts.eps_pole)
                               ? 'A'
                               : 'B';
        const double base = space == 'A' ? -g * g : -gp * gp;
        throw PoleError(space, static_cast<int>(std::lround(energy - base)), energy);
    }
    const auto& e = *eval.entries;
    switch (which) {
        case 11: return e[0];
        case 12: return e[1];
        case 21: return e[2];
        default: return e[3];
    }
}

GEvaluation g_det(const ModelParams& p, Parity parity, double energy,
                  const TruncationConfig& trunc, const GOptions& opts) {
    trunc.validate();
    if (classify_regime(p) != Regime::general) {
        throw RegimeError("g_det: requires the general regime");
    }
    GEvaluation out;
    out.energy = energy;
    out.parity = parity;
    out.n_max_used = trunc.n_max;
    if (pole_adjacent_energy(p, Regime::general, energy, trunc, opts.eps_pole, nullptr)) {
        out.pole_adjacent = true;
        out.value = kNaN;
        return out;
    }
    bool clamped = false;
    const PrecisionRung rung = select_rung(p, trunc, opts, &clamped);
    const DetParts parts = dispatch_precision(rung, [&](auto tag) {
        using Real = typename decltype(tag)::type;
        return eval_det_parts<Real>(p, parity, energy, trunc.n_max);
    });
    out.entries = {parts.g11, parts.g12, parts.g21, parts.g22};
    out.value = parts.g11 * parts.g22 - parts.g12 * parts.g21;
    out.tail_warning = parts.tail_warning || clamped;
    return out;
}

GEvaluation g_equal(const ModelParams& p, Parity parity, double energy,
                    const TruncationConfig& trunc, const GOptions& opts) {
    trunc.validate();
    if (classify_regime(p) != Regime::equal_coupling) {
        throw RegimeError("g_equal: requires the equal-coupling regime");
    }
    GEvaluation out;
    out.energy = energy;
    out.parity = parity;
    out.n_max_used = trunc.n_max;
    const auto cc = detail::ChainConstants<double>::make(p, parity);
    if (pole_adjacent_energy(p, Regime::equal_coupling, energy, trunc, opts.eps_pole, &cc)) {
        out.pole_adjacent = true;
        out.value = kNaN;
        return out;
    }
    bool warning = false;
    out.value = eval_equal_g<double>(p, parity, energy, trunc.n_max, opts.tail_tol, &warning);
    out.tail_warning = warning;
    return out;
}

double cf_residual(const ModelParams& p, Parity parity, double energy,
                   const TruncationConfig& trunc, const GOptions& opts) {
    trunc.validate();
    if (classify_regime(p) != Regime::equal_coupling) {
        throw RegimeError("cf_residual: requires the equal-coupling regime");
    }
    const auto c = detail::ChainConstants<double>::make(p, parity);
    const int m = static_cast<int>(std::lround(energy));
    if (m >= 0 && m <= trunc.n_max && std::abs(energy - m) < opts.eps_pole &&
        std::abs(c.bracket(m)) > 1e-14) {
        return kNaN;
    }
    const bool seed_b0 = std::abs(p.delta1 - p.delta2) > 1e-12;
    const auto d = detail::three_term_chain(c, energy, seed_b0, trunc.n_max);
    double peak = 0.0;
    for (double v : d.a) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) return 0.0;
    return d.a.back() / peak;
}

SummandProfiles det_summand_profiles(const ModelParams& p, Parity parity, double energy,
                                     double a0, double b0, const TruncationConfig& trunc,
                                     const GOptions& opts) {
    trunc.validate();
    bool clamped = false;
    const PrecisionRung rung = select_rung(p, trunc, opts, &clamped);
    return dispatch_precision(rung, [&](auto tag) {
        using Real = typename decltype(tag)::type;
        using std::abs;
        const auto c = detail::ChainConstants<Real>::make(p, parity);
        const Real e(energy);
        const Real par(sign_of(parity));
        const auto d = detail::d_chain(c, e, Real(a0), Real(b0), trunc.n_max);
        const auto seeds = detail::project_seeds(c, d);
        const auto a = detail::a_chain(c, e, seeds.v0_a, seeds.w0_a, seeds.z0_a, trunc.n_max);
        const auto b = detail::b_chain(c, e, seeds.u0_b, seeds.w0_b, seeds.z0_b, trunc.n_max);
        SummandProfiles out;
        out.a_profile.resize(trunc.n_max + 1);
        out.b_profile.resize(trunc.n_max + 1);
        for (int n = 0; n <= trunc.n_max; ++n) {
            out.a_profile[n] = static_cast<double>(abs(a.u[n] - par * a.z[n]));
            out.b_profile[n] = static_cast<double>(abs(b.v[n] - par * b.w[n]));
        }
        return out;
    });
}

std::vector<double> equal_summand_profile(const ModelParams& p, Parity parity, double energy,
                                          const TruncationConfig& trunc, const GOptions& opts) {
    (void)opts;
    trunc.validate();
    const auto c = detail::ChainConstants<double>::make(p, parity);
    const double par = sign_of(parity);
    const bool seed_b0 = std::abs(p.delta1 - p.delta2) > 1e-12;
    const auto d = detail::three_term_chain(c, energy, seed_b0, trunc.n_max);
    double v0 = 0.0, w0 = 0.0, z0 = 0.0;
    for (int n = 0; n <= trunc.n_max; ++n) {
        const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
        v0 += d.b[n] * sgn;
        w0 += d.b[n];
        z0 += d.a[n];
    }
    w0 *= par;
    z0 *= par;
    const auto q = detail::eq_chain(c, energy, p.delta2 * v0 + p.delta1 * w0,
                                    p.delta1 * v0 + p.delta2 * w0, z0, trunc.n_max);
    std::vector<double> out(trunc.n_max + 1);
    for (int n = 0; n <= trunc.n_max; ++n) {
        out[n] = std::abs(q.u[n] - par * q.z[n]);
    }
    return out;
}

double best_window_decay(const std::vector<double>& magnitudes, int k_lo) {
    if (magnitudes.size() < static_cast<std::size_t>(k_lo) + 1) return 1.0;
    double best = 1.0;
    double peak = 0.0;
    for (int k = 0; k < static_cast<int>(magnitudes.size()); ++k) {
        peak = std::max(peak, magnitudes[k]);
        if (k < k_lo || peak == 0.0) continue;
        const double tail = std::max({magnitudes[k], magnitudes[k - 1], magnitudes[k - 2]});
        best = std::min(best, tail / peak);
    }
    return best;
}

}  // namespace qrm2
