#include "qrm2/recurrence.hpp"

#include <cmath>

#include "qrm2/detail/chains.hpp"

namespace qrm2 {

namespace {

void require_general(const ModelParams& p, const char* op) {
    if (classify_regime(p) != Regime::general) {
        throw RegimeError(std::string(op) + ": requires the general regime (g1 != g2, both > 0)");
    }
}

void require_equal(const ModelParams& p, const char* op) {
    if (classify_regime(p) != Regime::equal_coupling) {
        throw RegimeError(std::string(op) + ": requires the equal-coupling regime (g1 == g2 > 0)");
    }
}

// Throws when energy is within eps_pole of base + m for a retained m >= 0.
void check_shifted_integer_pole(double energy, double base, int n_max, double eps_pole,
                                char space) {
    const double x = energy - base;
    const int m = static_cast<int>(std::lround(x));
    if (m >= 0 && m <= n_max && std::abs(x - m) < eps_pole) {
        throw PoleError(space, m, energy);
    }
}

// Asymptotic-series evaluation: sum to the smallest nonzero |term| (exact
// zeros carry no turning-point information).
ProjectedValue optimal_sum(const std::vector<double>& terms, double tail_tol) {
    ProjectedValue out;
    double best = -1.0;
    int best_idx = static_cast<int>(terms.size()) - 1;
    for (int n = 0; n < static_cast<int>(terms.size()); ++n) {
        const double mag = std::abs(terms[n]);
        if (mag > 0.0 && (best < 0.0 || mag < best)) {
            best = mag;
            best_idx = n;
        }
    }
    if (best < 0.0) best = 0.0;  // all-zero series
    double sum = 0.0;
    for (int n = 0; n <= best_idx; ++n) sum += terms[n];
    out.value = sum;
    out.tail_estimate = best;
    out.terms_used = best_idx + 1;
    out.converged = best <= tail_tol * std::max(std::abs(sum), 1e-300);
    return out;
}

}  // namespace

DSeries d_space_coeffs(const ModelParams& p, Parity parity, double energy,
                       std::pair<double, double> init, const TruncationConfig& trunc) {
    trunc.validate();
    require_general(p, "d_space_coeffs");
    if (!std::isfinite(energy)) throw std::invalid_argument("d_space_coeffs: energy must be finite");
    const auto c = detail::ChainConstants<double>::make(p, parity);
    auto chain = detail::d_chain(c, energy, init.first, init.second, trunc.n_max);
    DSeries out;
    out.a = std::move(chain.a);
    out.b = std::move(chain.b);
    out.parity = parity;
    out.energy = energy;
    out.scale = p.g1 + p.g2;
    return out;
}

ASeries a_space_coeffs(const ModelParams& p, double energy, std::array<double, 3> init,
                       const TruncationConfig& trunc, double eps_pole) {
    trunc.validate();
    require_general(p, "a_space_coeffs");
    const auto [g, gp] = derived_couplings(p);
    check_shifted_integer_pole(energy, -g * g, trunc.n_max, eps_pole, 'A');
    const auto c = detail::ChainConstants<double>::make(p, Parity::even);
    auto chain = detail::a_chain(c, energy, init[0], init[1], init[2], trunc.n_max);
    ASeries out;
    out.u = std::move(chain.u);
    out.v = std::move(chain.v);
    out.w = std::move(chain.w);
    out.z = std::move(chain.z);
    out.energy = energy;
    out.scale = g;
    return out;
}

BSeries b_space_coeffs(const ModelParams& p, double energy, std::array<double, 3> init,
                       const TruncationConfig& trunc, double eps_pole) {
    trunc.validate();
    require_general(p, "b_space_coeffs");
    const auto [g, gp] = derived_couplings(p);
    check_shifted_integer_pole(energy, -gp * gp, trunc.n_max, eps_pole, 'B');
    const auto c = detail::ChainConstants<double>::make(p, Parity::even);
    auto chain = detail::b_chain(c, energy, init[0], init[1], init[2], trunc.n_max);
    BSeries out;
    out.u = std::move(chain.u);
    out.v = std::move(chain.v);
    out.w = std::move(chain.w);
    out.z = std::move(chain.z);
    out.energy = energy;
    out.scale = gp;
    return out;
}

ASeed a_initial_from_d(const DSeries& d, const ModelParams& p, double tail_tol) {
    (void)p;
    const int n = static_cast<int>(d.b.size());
    std::vector<double> tv(n), tw(n), tz(n);
    for (int i = 0; i < n; ++i) {
        const double sgn = (i % 2 == 0) ? 1.0 : -1.0;
        tv[i] = d.b[i] * sgn;
        tw[i] = d.b[i];
        tz[i] = d.a[i];
    }
    ASeed seed;
    seed.v0 = optimal_sum(tv, tail_tol);
    seed.w0 = optimal_sum(tw, tail_tol);
    seed.z0 = optimal_sum(tz, tail_tol);
    seed.w0.value *= sign_of(d.parity);
    seed.z0.value *= sign_of(d.parity);
    return seed;
}

BSeed b_initial_from_d(const DSeries& d, const ModelParams& p, double tail_tol) {
    const auto [g, gp] = derived_couplings(p);
    const double q = d.scale == 0.0 ? 0.0 : gp / d.scale;
    const int n = static_cast<int>(d.a.size());
    std::vector<double> tu(n), tw(n), tz(n);
    double qp = 1.0;
    for (int i = 0; i < n; ++i) {
        const double sgn = (i % 2 == 0) ? 1.0 : -1.0;
        tu[i] = d.a[i] * qp * sgn;
        tw[i] = d.b[i] * qp;
        tz[i] = d.a[i] * qp;
        qp *= q;
    }
    BSeed seed;
    seed.u0 = optimal_sum(tu, tail_tol);
    seed.w0 = optimal_sum(tw, tail_tol);
    seed.z0 = optimal_sum(tz, tail_tol);
    seed.w0.value *= sign_of(d.parity);
    seed.z0.value *= sign_of(d.parity);
    return seed;
}

ThreeTermSeed default_three_term_seed(const ModelParams& p) noexcept {
    return std::abs(p.delta1 - p.delta2) > 1e-12 ? ThreeTermSeed::b0_one : ThreeTermSeed::a0_one;
}

DSeries three_term_coeffs(const ModelParams& p, Parity parity, double energy, ThreeTermSeed seed,
                          const TruncationConfig& trunc, double eps_pole) {
    trunc.validate();
    require_equal(p, "three_term_coeffs");
    if (!std::isfinite(energy)) {
        throw std::invalid_argument("three_term_coeffs: energy must be finite");
    }
    const auto c = detail::ChainConstants<double>::make(p, parity);
    // Integer energies are poles only where the bracket factor survives.
    const int m = static_cast<int>(std::lround(energy));
    if (m >= 0 && m <= trunc.n_max && std::abs(energy - m) < eps_pole &&
        std::abs(c.bracket(m)) > 1e-14) {
        throw PoleError('I', m, energy);
    }
    auto chain = detail::three_term_chain(c, energy, seed == ThreeTermSeed::b0_one, trunc.n_max);
    DSeries out;
    out.a = std::move(chain.a);
    out.b = std::move(chain.b);
    out.parity = parity;
    out.energy = energy;
    out.scale = p.g1 + p.g2;
    return out;
}

EqSeed eq_initial_from_d(const DSeries& d, const ModelParams& p, double tail_tol) {
    ASeed a = a_initial_from_d(d, p, tail_tol);
    EqSeed seed;
    seed.y0 = a.v0;  // carries terms_used/converged of the dominant part
    seed.y0.value = p.delta2 * a.v0.value + p.delta1 * a.w0.value;
    seed.y0.tail_estimate = p.delta2 * a.v0.tail_estimate + p.delta1 * a.w0.tail_estimate;
    seed.y0.converged = a.v0.converged && a.w0.converged;
    seed.y_swap0 = a.w0;
    seed.y_swap0.value = p.delta1 * a.v0.value + p.delta2 * a.w0.value;
    seed.y_swap0.tail_estimate = p.delta1 * a.v0.tail_estimate + p.delta2 * a.w0.tail_estimate;
    seed.y_swap0.converged = seed.y0.converged;
    seed.z0 = a.z0;
    return seed;
}

EqSeries eq_coupling_coeffs(const ModelParams& p, double energy, const EqSeed& seed,
                            const TruncationConfig& trunc, double eps_pole) {
    trunc.validate();
    require_equal(p, "eq_coupling_coeffs");
    const auto [g, gp] = derived_couplings(p);
    check_shifted_integer_pole(energy, -g * g, trunc.n_max, eps_pole, 'A');
    const auto c = detail::ChainConstants<double>::make(p, Parity::even);
    auto chain = detail::eq_chain(c, energy, seed.y0.value, seed.y_swap0.value, seed.z0.value,
                                  trunc.n_max);
    EqSeries out;
    out.u = std::move(chain.u);
    out.y = std::move(chain.y);
    out.y_swap = std::move(chain.y_swap);
    out.z = std::move(chain.z);
    out.energy = energy;
    out.scale = g;
    return out;
}

}  // namespace qrm2
