// gfunction.hpp — transcendental G-functions whose zeros are the regular
// spectrum
//
// Unequal couplings: a 2x2 determinant built from the two vacuum-projected
// linear conditions, one column per photon-basis seed (a0,b0) in
// {(1,0),(0,1)}. Equal couplings: a determinant-free scalar series from the
// reduced +g-displaced chain, plus a continued-fraction-style residual from
// the three-term chain as an independent cross-check.

#pragma once

#include <array>
#include <optional>
#include <vector>

#include "qrm2/model.hpp"
#include "qrm2/recurrence.hpp"

namespace qrm2 {

struct GOptions {
    double eps_pole{1e-6};   // exclusion radius around chain poles
    double tail_tol{1e-12};  // projection tail tolerance
    int forced_digits{0};    // 0 = choose working precision from n_max and couplings
};

struct GEvaluation {
    double energy{0.0};
    double value{0.0};  // NaN when pole_adjacent
    Parity parity{Parity::even};
    int n_max_used{0};
    bool pole_adjacent{false};
    bool tail_warning{false};
    std::optional<std::array<double, 4>> entries;  // G11, G12, G21, G22 (determinant path)
};

// Energies excluded from G evaluation: poles of the pointwise-determined
// coefficients (m - g^2 and m - g'^2), and in the equal-coupling regime the
// integer poles of the three-term photon-basis chain.
struct PoleMap {
    std::vector<double> a_poles;
    std::vector<double> b_poles;
    std::vector<int> integer_poles;

    std::vector<double> all() const;  // merged, sorted
};

PoleMap pole_map(const ModelParams& p, const TruncationConfig& trunc);

// One determinant entry. which is 11, 12, 21 or 22; rows select the +g / +g'
// projected condition, columns the photon-basis seed. Throws PoleError when
// energy is pole-adjacent.
double g_entry(const ModelParams& p, Parity parity, double energy, int which,
               const TruncationConfig& trunc, const GOptions& opts = {});

// The 2x2 determinant; requires the general regime.
GEvaluation g_det(const ModelParams& p, Parity parity, double energy,
                  const TruncationConfig& trunc, const GOptions& opts = {});

// Determinant-free equal-coupling G.
GEvaluation g_equal(const ModelParams& p, Parity parity, double energy,
                    const TruncationConfig& trunc, const GOptions& opts = {});

// Normalized tail of the forward three-term chain; its sign changes locate
// the same eigenvalues as g_equal. NaN when pole-adjacent.
double cf_residual(const ModelParams& p, Parity parity, double energy,
                   const TruncationConfig& trunc, const GOptions& opts = {});

// |scaled G summand| profiles used by the stability classifier. For the
// determinant path, seeded by (a0, b0) in the photon basis; returns the
// +g-displaced profile |u_n -/+ z_n| and the +g'-displaced |v_n -/+ w_n|.
struct SummandProfiles {
    std::vector<double> a_profile;
    std::vector<double> b_profile;
};
SummandProfiles det_summand_profiles(const ModelParams& p, Parity parity, double energy,
                                     double a0, double b0, const TruncationConfig& trunc,
                                     const GOptions& opts = {});
std::vector<double> equal_summand_profile(const ModelParams& p, Parity parity, double energy,
                                          const TruncationConfig& trunc,
                                          const GOptions& opts = {});

// Best tail-to-peak ratio over any prefix window of length >= k_lo. A stable
// zero's profile dips sharply (coefficients decay) before truncation noise
// takes over; an unstable zero's never does.
double best_window_decay(const std::vector<double>& magnitudes, int k_lo = 8);

}  // namespace qrm2
