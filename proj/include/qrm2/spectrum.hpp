// spectrum.hpp — certified level lists from G evaluations
//
// Grid scans bracket sign changes of the regime's G-function inside pole-free
// subintervals; bisection refines each bracket; every refined zero is
// re-refined at an enlarged truncation and kept only when its position is
// truncation-stable and its chain coefficients decay. Dark, spin-singlet and
// exceptional levels, which are invisible to the G-functions, come from
// dedicated detectors backed by the exact-diagonalization oracle.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qrm2/gfunction.hpp"
#include "qrm2/model.hpp"
#include "qrm2/oracle.hpp"
#include "qrm2/recurrence.hpp"

namespace qrm2 {

enum class LevelKind { regular, exceptional, dark, singlet };
const char* to_string(LevelKind k) noexcept;

struct EnergyLevel {
    double energy{0.0};
    Parity parity{Parity::even};
    LevelKind kind{LevelKind::regular};
    double r_nc{0.0};        // ln(E at n_max / E at n_max + n_max_step); NaN if signs differ
    double coeff_decay{0.0};  // best-window tail-to-peak of the scaled G summands
    int n_max_used{0};
    bool degenerate{false};  // another same-parity level within 2*refine_tol
    bool warning{false};     // convergence warning attached
};

struct RejectedZero {
    double energy{0.0};
    Parity parity{Parity::even};
    double r_nc{0.0};
    double drift{0.0};  // |root(n_max) - root(n_max + step)|, inf when the zero vanished
    double coeff_decay{0.0};
    bool pole_drift{false};  // re-truncated root ran into a pole window
};

struct ExceptionalCandidate {
    double energy{0.0};
    char family{'A'};  // 'A': m - g^2, 'B': m - g'^2
    int index{0};
    bool is_eigenvalue{false};
    double oracle_gap{0.0};
};

struct DarkStateReport {
    Parity parity{Parity::even};
    double condition_residual{0.0};  // |(d2 +- d1)^2 - 1|
    bool active{false};
};

struct Bracket {
    double lo{0.0};
    double hi{0.0};
};

enum class ParityChoice { both, even, odd };

struct SolveOptions {
    std::optional<double> e_min;  // default: -max(g^2, g'^2) - d1 - d2 - 0.5
    std::optional<double> e_max;  // default: 3.0
    double grid_step{0.005};
    TruncationConfig trunc{0, 1};  // n_max 0 = regime default (80 general, 120 equal)
    double refine_tol{1e-10};
    double stable_rel_tol{1e-8};
    double decay_tol{1e-8};
    double eps_pole{1e-6};
    double tail_tol{1e-12};
    int oracle_n{200};
    bool with_oracle{true};
    double match_tol{1e-6};
    ParityChoice parity{ParityChoice::both};
};

struct SpectrumResult {
    ModelParams params;
    Regime regime{Regime::general};
    double e_min{0.0};
    double e_max{0.0};
    TruncationConfig trunc{};
    std::vector<EnergyLevel> levels;  // ascending
    std::vector<RejectedZero> rejected_zeros;
    std::vector<ExceptionalCandidate> exceptional;
    std::optional<oracle::ComparisonReport> comparison_even;
    std::optional<oracle::ComparisonReport> comparison_odd;
    bool oracle_only{false};
    bool has_warnings{false};
    std::string notice;
};

struct SweepStep {
    double g_total{0.0};  // g1 + g2 at this step
    SpectrumResult result;
    bool continuity_ok{true};
};

struct SweepResult {
    std::vector<SweepStep> steps;
};

// Effective truncation for a regime when the user left n_max at 0.
TruncationConfig effective_trunc(const TruncationConfig& trunc, Regime regime) noexcept;

// Default scan window floor.
double default_e_min(const ModelParams& p) noexcept;

// Sign-change brackets of the regime's G-function over [e_min, e_max], each
// inside one pole-free subinterval. Adjacent touching brackets trigger a
// half-step rescan of their segment.
std::vector<Bracket> scan_sign_changes(const ModelParams& p, Parity parity, double e_min,
                                       double e_max, double grid_step,
                                       const TruncationConfig& trunc, const GOptions& gopts = {});

// Bisection to |hi - lo| < refine_tol. Returns NaN when the bracket's signs
// agree even after one widen-and-retry.
double refine_zero(const Bracket& bracket, const ModelParams& p, Parity parity,
                   const TruncationConfig& trunc, double refine_tol,
                   const GOptions& gopts = {});

struct Classification {
    bool stable{false};
    EnergyLevel level;
    RejectedZero rejected;
};

// Re-refines the root at n_max and n_max + n_max_step and applies the
// stability criteria: relative drift below stable_rel_tol and coefficient
// decay below decay_tol.
Classification classify_zero(double root, const ModelParams& p, Parity parity,
                             const TruncationConfig& trunc, const SolveOptions& opts);

// Coupling-independent E=1 levels at equal coupling, present when
// (d2 + d1)^2 = 1 (even parity) or (d2 - d1)^2 = 1 (odd parity).
std::vector<DarkStateReport> detect_dark_states(const ModelParams& p, double cond_tol = 1e-10);

// Trivial integer levels of the decoupled qubit-singlet at delta1 == delta2:
// even m in the odd-parity sector, odd m in the even-parity sector.
std::vector<EnergyLevel> singlet_levels(const ModelParams& p, Parity parity, double e_min,
                                        double e_max);

// Pole energies in the window, checked against the oracle for true
// eigenvalues within 1e-7.
std::vector<ExceptionalCandidate> exceptional_candidates(const ModelParams& p, double e_min,
                                                         double e_max,
                                                         const TruncationConfig& trunc,
                                                         int oracle_n);

// Full solve: routes by regime, merges detector levels, attaches oracle
// comparisons.
SpectrumResult compute_spectrum(const ModelParams& p, const SolveOptions& opts = {});

// Spectra along a coupling sweep; g_total = g1 + g2 runs over [g_from, g_to]
// with the ratio g2/g1 of p_base preserved (equal coupling stays equal).
SweepResult sweep_coupling(const ModelParams& p_base, double g_from, double g_to, int steps,
                           const SolveOptions& opts = {});

}  // namespace qrm2
