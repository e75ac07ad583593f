#include "qrm2/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qrm2 {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

double eval_g(const ModelParams& p, Regime regime, Parity parity, double energy,
              const TruncationConfig& trunc, const GOptions& gopts) {
    if (regime == Regime::general) {
        return g_det(p, parity, energy, trunc, gopts).value;
    }
    return g_equal(p, parity, energy, trunc, gopts).value;
}

std::vector<std::pair<double, double>> pole_free_segments(const ModelParams& p, double e_min,
                                                          double e_max,
                                                          const TruncationConfig& trunc,
                                                          double eps_pole) {
    const auto poles = pole_map(p, trunc).all();
    std::vector<std::pair<double, double>> segments;
    double lo = e_min;
    for (double pole : poles) {
        if (pole - eps_pole <= lo) {
            lo = std::max(lo, pole + eps_pole);
            continue;
        }
        if (pole + eps_pole >= e_max && pole - eps_pole >= e_max) break;
        if (pole - eps_pole > e_max) break;
        segments.emplace_back(lo, pole - eps_pole);
        lo = pole + eps_pole;
    }
    if (lo < e_max) segments.emplace_back(lo, e_max);
    return segments;
}

std::vector<Bracket> scan_segment(const ModelParams& p, Regime regime, Parity parity, double lo,
                                  double hi, double step, const TruncationConfig& trunc,
                                  const GOptions& gopts) {
    const int n = std::max(2, static_cast<int>(std::ceil((hi - lo) / step)));
    std::vector<Bracket> brackets;
    double x_prev = lo;
    double f_prev = eval_g(p, regime, parity, x_prev, trunc, gopts);
    for (int i = 1; i <= n; ++i) {
        const double x = lo + (hi - lo) * i / n;
        const double f = eval_g(p, regime, parity, x, trunc, gopts);
        if (std::isfinite(f_prev) && std::isfinite(f) && f_prev * f < 0.0) {
            brackets.push_back({x_prev, x});
        }
        x_prev = x;
        f_prev = f;
    }
    return brackets;
}

bool has_touching(const std::vector<Bracket>& brackets) {
    for (std::size_t i = 1; i < brackets.size(); ++i) {
        if (brackets[i].lo == brackets[i - 1].hi) return true;
    }
    return false;
}

}  // namespace

const char* to_string(LevelKind k) noexcept {
    switch (k) {
        case LevelKind::regular: return "regular";
        case LevelKind::exceptional: return "exceptional";
        case LevelKind::dark: return "dark";
        case LevelKind::singlet: return "singlet";
    }
    return "unknown";
}

TruncationConfig effective_trunc(const TruncationConfig& trunc, Regime regime) noexcept {
    TruncationConfig out = trunc;
    if (out.n_max <= 0) {
        out.n_max = regime == Regime::equal_coupling ? 120 : 80;
    }
    if (out.n_max_step <= 0) out.n_max_step = 1;
    return out;
}

double default_e_min(const ModelParams& p) noexcept {
    const auto [g, gp] = derived_couplings(p);
    return -std::max(g * g, gp * gp) - p.delta1 - p.delta2 - 0.5;
}

std::vector<Bracket> scan_sign_changes(const ModelParams& p, Parity parity, double e_min,
                                       double e_max, double grid_step,
                                       const TruncationConfig& trunc, const GOptions& gopts) {
    if (!(e_max > e_min)) throw std::invalid_argument("scan_sign_changes: empty window");
    if (!(grid_step > 0.0)) throw std::invalid_argument("scan_sign_changes: grid_step must be > 0");
    const Regime regime = classify_regime(p);
    if (regime != Regime::general && regime != Regime::equal_coupling) {
        throw RegimeError("scan_sign_changes: no G-function in this regime");
    }
    std::vector<Bracket> all;
    for (const auto& [lo, hi] : pole_free_segments(p, e_min, e_max, trunc, gopts.eps_pole)) {
        double step = grid_step;
        auto brackets = scan_segment(p, regime, parity, lo, hi, step, trunc, gopts);
        for (int round = 0; round < 3 && has_touching(brackets); ++round) {
            step /= 2.0;
            brackets = scan_segment(p, regime, parity, lo, hi, step, trunc, gopts);
        }
        all.insert(all.end(), brackets.begin(), brackets.end());
    }
    return all;
}

double refine_zero(const Bracket& bracket, const ModelParams& p, Parity parity,
                   const TruncationConfig& trunc, double refine_tol, const GOptions& gopts) {
    const Regime regime = classify_regime(p);
    double lo = bracket.lo;
    double hi = bracket.hi;
    double f_lo = eval_g(p, regime, parity, lo, trunc, gopts);
    double f_hi = eval_g(p, regime, parity, hi, trunc, gopts);
    if (!std::isfinite(f_lo) || !std::isfinite(f_hi) || f_lo * f_hi > 0.0) {
        // numerical noise: widen once and retry
        const double mid = 0.5 * (lo + hi);
        const double half = (hi - lo);
        lo = mid - half;
        hi = mid + half;
        f_lo = eval_g(p, regime, parity, lo, trunc, gopts);
        f_hi = eval_g(p, regime, parity, hi, trunc, gopts);
        if (!std::isfinite(f_lo) || !std::isfinite(f_hi) || f_lo * f_hi > 0.0) {
            return kNaN;
        }
    }
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    while (hi - lo > refine_tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // hit representable resolution
        const double f_mid = eval_g(p, regime, parity, mid, trunc, gopts);
        if (!std::isfinite(f_mid)) return kNaN;
        if (f_mid == 0.0) return mid;
        if (f_lo * f_mid < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    return 0.5 * (lo + hi);
}

namespace {

// Finds a sign-change bracket of G at the given truncation near a root found
// at another truncation. Returns nullopt when none exists within +-1e-3.
std::optional<Bracket> rebracket(const ModelParams& p, Regime regime, Parity parity, double root,
                                 const TruncationConfig& trunc, const GOptions& gopts,
                                 bool* hit_pole) {
    for (double half = 1e-8; half <= 1.1e-3; half *= 10.0) {
        const double lo = root - half;
        const double hi = root + half;
        const double f_lo = eval_g(p, regime, parity, lo, trunc, gopts);
        const double f_hi = eval_g(p, regime, parity, hi, trunc, gopts);
        if (!std::isfinite(f_lo) || !std::isfinite(f_hi)) {
            if (hit_pole != nullptr) *hit_pole = true;
            return std::nullopt;
        }
        if (f_lo * f_hi < 0.0) return Bracket{lo, hi};
    }
    return std::nullopt;
}

double classification_decay(const ModelParams& p, Regime regime, Parity parity, double root,
                            const TruncationConfig& trunc, const GOptions& gopts) {
    if (regime == Regime::equal_coupling) {
        return best_window_decay(equal_summand_profile(p, parity, root, trunc, gopts));
    }
    const GEvaluation eval = g_det(p, parity, root, trunc, gopts);
    if (!eval.entries) return 1.0;
    const auto& e = *eval.entries;
    // null vector of the 2x2 system from the better-conditioned row
    const double r0 = std::max(std::abs(e[0]), std::abs(e[1]));
    const double r1 = std::max(std::abs(e[2]), std::abs(e[3]));
    double a0, b0;
    if (r0 >= r1) {
        a0 = e[1];
        b0 = -e[0];
    } else {
        a0 = e[3];
        b0 = -e[2];
    }
    const double norm = std::max(std::abs(a0), std::abs(b0));
    if (norm == 0.0) return 1.0;
    const auto profiles = det_summand_profiles(p, parity, root, a0 / norm, b0 / norm, trunc, gopts);
    return std::max(best_window_decay(profiles.a_profile), best_window_decay(profiles.b_profile));
}

}  // namespace

Classification classify_zero(double root, const ModelParams& p, Parity parity,
                             const TruncationConfig& trunc, const SolveOptions& opts) {
    const Regime regime = classify_regime(p);
    GOptions gopts;
    gopts.eps_pole = opts.eps_pole;
    gopts.tail_tol = opts.tail_tol;

    Classification out;
    out.rejected.energy = root;
    out.rejected.parity = parity;

    TruncationConfig bumped = trunc;
    bumped.n_max += trunc.n_max_step;

    bool hit_pole = false;
    const auto b1 = rebracket(p, regime, parity, root, trunc, gopts, &hit_pole);
    const auto b2 = rebracket(p, regime, parity, root, bumped, gopts, &hit_pole);
    if (!b1 || !b2) {
        out.stable = false;
        out.rejected.drift = kInf;
        out.rejected.r_nc = kNaN;
        out.rejected.pole_drift = hit_pole;
        out.rejected.coeff_decay = 1.0;
        return out;
    }
    const double r1 = refine_zero(*b1, p, parity, trunc, opts.refine_tol, gopts);
    const double r2 = refine_zero(*b2, p, parity, bumped, opts.refine_tol, gopts);
    if (!std::isfinite(r1) || !std::isfinite(r2)) {
        out.stable = false;
        out.rejected.drift = kInf;
        out.rejected.r_nc = kNaN;
        out.rejected.coeff_decay = 1.0;
        return out;
    }
    const double drift = std::abs(r1 - r2);
    const double rel_drift = drift / std::max(std::abs(r2), 1e-3);
    const double r_nc = (r1 / r2 > 0.0) ? std::log(r1 / r2) : kNaN;
    const double decay = classification_decay(p, regime, parity, r1, trunc, gopts);

    out.rejected.r_nc = r_nc;
    out.rejected.drift = drift;
    out.rejected.coeff_decay = decay;

    if (rel_drift < opts.stable_rel_tol && decay < opts.decay_tol) {
        out.stable = true;
        out.level.energy = r1;
        out.level.parity = parity;
        out.level.kind = LevelKind::regular;
        out.level.r_nc = r_nc;
        out.level.coeff_decay = decay;
        out.level.n_max_used = trunc.n_max;
    }
    return out;
}

std::vector<DarkStateReport> detect_dark_states(const ModelParams& p, double cond_tol) {
    if (classify_regime(p) != Regime::equal_coupling) {
        throw RegimeError("detect_dark_states: requires the equal-coupling regime");
    }
    if (std::abs(p.delta1 - p.delta2) <= 1e-12) {
        throw RegimeError("detect_dark_states: requires delta1 != delta2");
    }
    const double even_res = std::abs((p.delta2 + p.delta1) * (p.delta2 + p.delta1) - 1.0);
    const double odd_res = std::abs((p.delta2 - p.delta1) * (p.delta2 - p.delta1) - 1.0);
    return {{Parity::even, even_res, even_res < cond_tol},
            {Parity::odd, odd_res, odd_res < cond_tol}};
}

std::vector<EnergyLevel> singlet_levels(const ModelParams& p, Parity parity, double e_min,
                                        double e_max) {
    if (classify_regime(p) != Regime::equal_coupling ||
        std::abs(p.delta1 - p.delta2) > 1e-12) {
        return {};
    }
    std::vector<EnergyLevel> out;
    const int m_lo = std::max(0, static_cast<int>(std::ceil(e_min)));
    for (int m = m_lo; m <= static_cast<int>(std::floor(e_max)); ++m) {
        const bool wanted = (m % 2 == 0) ? parity == Parity::odd : parity == Parity::even;
        if (!wanted) continue;
        EnergyLevel level;
        level.energy = static_cast<double>(m);
        level.parity = parity;
        level.kind = LevelKind::singlet;
        out.push_back(level);
    }
    return out;
}

std::vector<ExceptionalCandidate> exceptional_candidates(const ModelParams& p, double e_min,
                                                         double e_max,
                                                         const TruncationConfig& trunc,
                                                         int oracle_n) {
    const auto map = pole_map(p, effective_trunc(trunc, classify_regime(p)));
    const auto even = oracle::levels(p, Parity::even, oracle_n);
    const auto odd = oracle::levels(p, Parity::odd, oracle_n);
    auto nearest_gap = [](const std::vector<double>& levels, double e) {
        double best = kInf;
        for (double v : levels) best = std::min(best, std::abs(v - e));
        return best;
    };
    std::vector<ExceptionalCandidate> out;
    auto add_family = [&](const std::vector<double>& poles, char family) {
        for (int m = 0; m < static_cast<int>(poles.size()); ++m) {
            const double e = poles[m];
            if (e <= e_min || e >= e_max) continue;
            ExceptionalCandidate cand;
            cand.energy = e;
            cand.family = family;
            cand.index = m;
            cand.oracle_gap = std::min(nearest_gap(even, e), nearest_gap(odd, e));
            cand.is_eigenvalue = cand.oracle_gap < 1e-7;
            out.push_back(cand);
        }
    };
    add_family(map.a_poles, 'A');
    add_family(map.b_poles, 'B');
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.energy < b.energy; });
    return out;
}

namespace {

std::vector<Parity> selected_parities(ParityChoice choice) {
    switch (choice) {
        case ParityChoice::even: return {Parity::even};
        case ParityChoice::odd: return {Parity::odd};
        default: return {Parity::even, Parity::odd};
    }
}

void attach_oracle_comparison(SpectrumResult& result, const SolveOptions& opts) {
    for (Parity parity : selected_parities(opts.parity)) {
        std::vector<double> solver;
        for (const auto& level : result.levels) {
            if (level.parity == parity) solver.push_back(level.energy);
        }
        const auto oracle_lv =
            oracle::levels_in_window(result.params, parity, opts.oracle_n, result.e_min,
                                     result.e_max);
        auto report = oracle::compare_spectra(solver, oracle_lv.values, opts.match_tol);
        if (parity == Parity::even) {
            result.comparison_even = std::move(report);
        } else {
            result.comparison_odd = std::move(report);
        }
        if (!oracle_lv.converged) result.has_warnings = true;
    }
}

// Equal-coupling cross-check: the three-term residual must vanish where the
// reduced-chain G does.
bool cf_confirms(const ModelParams& p, Parity parity, double root, const TruncationConfig& trunc,
                 const GOptions& gopts, double agree_tol) {
    auto f = [&](double e) { return cf_residual(p, parity, e, trunc, gopts); };
    double half = std::max(1e-7, 4.0 * agree_tol);
    for (; half <= 1.1e-3; half *= 10.0) {
        const double f_lo = f(root - half);
        const double f_hi = f(root + half);
        if (!std::isfinite(f_lo) || !std::isfinite(f_hi)) return false;
        if (f_lo * f_hi < 0.0) {
            double lo = root - half, hi = root + half, fl = f_lo;
            while (hi - lo > 1e-12) {
                const double mid = 0.5 * (lo + hi);
                const double fm = f(mid);
                if (!std::isfinite(fm)) return false;
                if (fl * fm <= 0.0) {
                    hi = mid;
                } else {
                    lo = mid;
                    fl = fm;
                }
            }
            return std::abs(0.5 * (lo + hi) - root) < agree_tol;
        }
    }
    return false;
}

}  // namespace

SpectrumResult compute_spectrum(const ModelParams& p, const SolveOptions& opts) {
    const Regime regime = classify_regime(p);
    const TruncationConfig trunc = effective_trunc(opts.trunc, regime);
    SpectrumResult result;
    result.params = p;
    result.regime = regime;
    result.trunc = trunc;
    result.e_min = opts.e_min.value_or(default_e_min(p));
    result.e_max = opts.e_max.value_or(3.0);
    if (!(result.e_max > result.e_min)) {
        throw std::invalid_argument("compute_spectrum: empty energy window");
    }

    GOptions gopts;
    gopts.eps_pole = opts.eps_pole;
    gopts.tail_tol = opts.tail_tol;

    const auto parities = selected_parities(opts.parity);

    if (regime == Regime::zero_coupling || regime == Regime::single_qubit_like) {
        result.oracle_only = true;
        result.notice = std::string("regime ") + to_string(regime) +
                        ": displaced-basis chains are singular; spectrum from exact "
                        "diagonalization only";
        for (Parity parity : parities) {
            const auto lv = oracle::levels_in_window(p, parity, opts.oracle_n, result.e_min,
                                                     result.e_max);
            for (double e : lv.values) {
                EnergyLevel level;
                level.energy = e;
                level.parity = parity;
                level.kind = LevelKind::regular;
                level.n_max_used = opts.oracle_n;
                level.warning = !lv.converged;
                result.levels.push_back(level);
            }
            if (!lv.converged) result.has_warnings = true;
        }
    } else {
        for (Parity parity : parities) {
            const auto brackets = scan_sign_changes(p, parity, result.e_min, result.e_max,
                                                    opts.grid_step, trunc, gopts);
            for (const auto& bracket : brackets) {
                const double root = refine_zero(bracket, p, parity, trunc, opts.refine_tol, gopts);
                if (!std::isfinite(root)) continue;
                auto cls = classify_zero(root, p, parity, trunc, opts);
                if (cls.stable) {
                    if (regime == Regime::equal_coupling &&
                        !cf_confirms(p, parity, cls.level.energy, trunc, gopts, 1e-8)) {
                        cls.level.warning = true;
                        result.has_warnings = true;
                    }
                    result.levels.push_back(cls.level);
                } else {
                    result.rejected_zeros.push_back(cls.rejected);
                }
            }
        }
        if (regime == Regime::equal_coupling) {
            if (std::abs(p.delta1 - p.delta2) > 1e-12) {
                for (const auto& report : detect_dark_states(p)) {
                    if (!report.active) continue;
                    const bool selected =
                        std::find(parities.begin(), parities.end(), report.parity) !=
                        parities.end();
                    if (!selected) continue;
                    if (1.0 <= result.e_min || 1.0 >= result.e_max) continue;
                    EnergyLevel level;
                    level.energy = 1.0;
                    level.parity = report.parity;
                    level.kind = LevelKind::dark;
                    level.n_max_used = trunc.n_max;
                    result.levels.push_back(level);
                }
            } else {
                for (Parity parity : parities) {
                    for (auto& level : singlet_levels(p, parity, result.e_min, result.e_max)) {
                        level.n_max_used = trunc.n_max;
                        result.levels.push_back(level);
                    }
                }
            }
        }
    }

    if (opts.with_oracle) {
        result.exceptional =
            exceptional_candidates(p, result.e_min, result.e_max, trunc, opts.oracle_n);
        if (!result.oracle_only) {
            for (const auto& cand : result.exceptional) {
                if (!cand.is_eigenvalue) continue;
                for (Parity parity : parities) {
                    const auto lv = oracle::levels(p, parity, opts.oracle_n);
                    for (double e : lv) {
                        if (std::abs(e - cand.energy) < 1e-7) {
                            EnergyLevel level;
                            level.energy = e;
                            level.parity = parity;
                            level.kind = LevelKind::exceptional;
                            level.n_max_used = opts.oracle_n;
                            result.levels.push_back(level);
                            break;
                        }
                    }
                }
            }
        }
    }

    std::sort(result.levels.begin(), result.levels.end(),
              [](const EnergyLevel& a, const EnergyLevel& b) { return a.energy < b.energy; });
    for (std::size_t i = 1; i < result.levels.size(); ++i) {
        auto& a = result.levels[i - 1];
        auto& b = result.levels[i];
        if (a.parity == b.parity && std::abs(a.energy - b.energy) < 2.0 * opts.refine_tol) {
            a.degenerate = true;
            b.degenerate = true;
        }
    }
    for (const auto& level : result.levels) {
        if (level.warning) result.has_warnings = true;
    }
    if (opts.with_oracle) attach_oracle_comparison(result, opts);
    return result;
}

SweepResult sweep_coupling(const ModelParams& p_base, double g_from, double g_to, int steps,
                           const SolveOptions& opts) {
    if (steps < 2) throw std::invalid_argument("sweep_coupling: steps must be >= 2");
    if (!(g_from > 0.0) || !(g_to > g_from)) {
        throw std::invalid_argument("sweep_coupling: need 0 < g_from < g_to");
    }
    const double base_total = p_base.g1 + p_base.g2;
    const double fraction2 = base_total > 0.0 ? p_base.g2 / base_total : 0.5;

    SweepResult sweep;
    sweep.steps.reserve(steps);
    for (int i = 0; i < steps; ++i) {
        const double g_total = g_from + (g_to - g_from) * i / (steps - 1);
        ModelParams p = p_base;
        p.g2 = fraction2 * g_total;
        p.g1 = g_total - p.g2;
        SweepStep step;
        step.g_total = g_total;
        step.result = compute_spectrum(p, opts);
        sweep.steps.push_back(std::move(step));
    }
    // continuity: same level count per parity and index-matched shifts small
    // compared to the level spacing
    for (std::size_t i = 1; i < sweep.steps.size(); ++i) {
        auto& cur = sweep.steps[i];
        const auto& prev = sweep.steps[i - 1];
        for (Parity parity : {Parity::even, Parity::odd}) {
            std::vector<double> a, b;
            for (const auto& level : prev.result.levels) {
                if (level.parity == parity) a.push_back(level.energy);
            }
            for (const auto& level : cur.result.levels) {
                if (level.parity == parity) b.push_back(level.energy);
            }
            if (a.size() != b.size()) {
                cur.continuity_ok = false;
                continue;
            }
            double max_shift = 0.0, min_gap = kInf;
            for (std::size_t k = 0; k < a.size(); ++k) {
                max_shift = std::max(max_shift, std::abs(a[k] - b[k]));
                if (k > 0) min_gap = std::min(min_gap, b[k] - b[k - 1]);
            }
            if (a.size() > 1 && max_shift > 0.5 * min_gap) cur.continuity_ok = false;
        }
    }
    return sweep;
}

}  // namespace qrm2
