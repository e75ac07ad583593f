// detail/chains.hpp — scaled coefficient chains behind the recurrence and
// G-function modules.
//
// Every chain is stored pre-scaled: element n holds c_n * s^n where s is the
// chain's natural displacement (g for the photon-basis and +g-displaced
// chains, g' for the +g'-displaced chain). The G series and the vacuum
// projections only ever consume c_n * s^n, so the scaled form sums them
// directly and keeps intermediate magnitudes observable.
//
// Kernels are templated on the working scalar so the same code runs in
// double, long double, or a multiprecision type picked per evaluation.

#pragma once

#include <cmath>
#include <cstdlib>
#include <vector>

#include "qrm2/model.hpp"

namespace qrm2::detail {

template <class Real>
struct ChainConstants {
    Real d1, d2;  // qubit splittings
    Real g, gp;   // g1+g2, g1-g2
    int parity;   // +1 even, -1 odd

    static ChainConstants make(const ModelParams& p, Parity parity) {
        return {Real(p.delta1), Real(p.delta2), Real(p.g1) + Real(p.g2),
                Real(p.g1) - Real(p.g2), sign_of(parity)};
    }
    // bracket factor delta2 + parity*(-1)^m*delta1
    Real bracket(int m) const {
        return (parity * (m % 2 == 0 ? 1 : -1)) > 0 ? d2 + d1 : d2 - d1;
    }
};

template <class Real>
struct DChain {
    std::vector<Real> a, b;  // a_n*g^n, b_n*g^n
};

// Photon-basis chain from seed (a0, b0); two coupled second-order recurrences.
template <class Real>
DChain<Real> d_chain(const ChainConstants<Real>& c, const Real& energy, const Real& a0,
                     const Real& b0, int n_max) {
    DChain<Real> r;
    r.a.assign(n_max + 1, Real(0));
    r.b.assign(n_max + 1, Real(0));
    r.a[0] = a0;
    r.b[0] = b0;
    const Real g2 = c.g * c.g;
    for (int m = 0; m < n_max; ++m) {
        const Real br = c.bracket(m);
        const Real am1 = m >= 1 ? r.a[m - 1] : Real(0);
        const Real bm1 = m >= 1 ? r.b[m - 1] : Real(0);
        const Real me = Real(m) - energy;
        r.a[m + 1] = (br * r.b[m] - me * r.a[m] - g2 * am1) / Real(m + 1);
        r.b[m + 1] = (c.g / c.gp) * (br * r.a[m] - me * r.b[m]) / Real(m + 1) -
                     g2 * bm1 / Real(m + 1);
    }
    return r;
}

template <class Real>
struct AChain {
    std::vector<Real> u, v, w, z;  // each c_n*g^n
};

// Chain in the +g-displaced basis; u is fixed pointwise (poles at m - g^2),
// the seed is (v0, w0, z0).
template <class Real>
AChain<Real> a_chain(const ChainConstants<Real>& c, const Real& energy, const Real& v0,
                     const Real& w0, const Real& z0, int n_max) {
    AChain<Real> r;
    r.u.assign(n_max + 1, Real(0));
    r.v.assign(n_max + 1, Real(0));
    r.w.assign(n_max + 1, Real(0));
    r.z.assign(n_max + 1, Real(0));
    r.v[0] = v0;
    r.w[0] = w0;
    r.z[0] = z0;
    const Real g2 = c.g * c.g;
    const Real two_ggp = Real(2) * c.g * c.gp;
    for (int m = 0; m <= n_max; ++m) {
        r.u[m] = (c.d2 * r.v[m] + c.d1 * r.w[m]) / (Real(m) - energy - g2);
        if (m == n_max) break;
        const Real vm1 = m >= 1 ? r.v[m - 1] : Real(0);
        const Real wm1 = m >= 1 ? r.w[m - 1] : Real(0);
        const Real zm1 = m >= 1 ? r.z[m - 1] : Real(0);
        const Real me = Real(m) - energy;
        r.v[m + 1] = -c.g * (c.d1 * r.z[m] + c.d2 * r.u[m] - (me + g2 - two_ggp) * r.v[m]) /
                         (Real(m + 1) * (c.g - c.gp)) -
                     g2 * vm1 / Real(m + 1);
        r.w[m + 1] = -c.g * (c.d2 * r.z[m] + c.d1 * r.u[m] - (me + g2 + two_ggp) * r.w[m]) /
                         ((c.g + c.gp) * Real(m + 1)) -
                     g2 * wm1 / Real(m + 1);
        r.z[m + 1] = -(c.d1 * r.v[m] + c.d2 * r.w[m] - (me + Real(3) * g2) * r.z[m]) /
                         (Real(2) * Real(m + 1)) -
                     g2 * zm1 / Real(m + 1);
    }
    return r;
}

template <class Real>
struct BChain {
    std::vector<Real> u, v, w, z;  // each c_n*g'^n
};

// Chain in the +g'-displaced basis; v is fixed pointwise (poles at m - g'^2),
// the seed is (u0, w0, z0).
template <class Real>
BChain<Real> b_chain(const ChainConstants<Real>& c, const Real& energy, const Real& u0,
                     const Real& w0, const Real& z0, int n_max) {
    BChain<Real> r;
    r.u.assign(n_max + 1, Real(0));
    r.v.assign(n_max + 1, Real(0));
    r.w.assign(n_max + 1, Real(0));
    r.z.assign(n_max + 1, Real(0));
    r.u[0] = u0;
    r.w[0] = w0;
    r.z[0] = z0;
    const Real gp2 = c.gp * c.gp;
    const Real two_gpg = Real(2) * c.gp * c.g;
    for (int m = 0; m <= n_max; ++m) {
        r.v[m] = (c.d1 * r.z[m] + c.d2 * r.u[m]) / (Real(m) - energy - gp2);
        if (m == n_max) break;
        const Real um1 = m >= 1 ? r.u[m - 1] : Real(0);
        const Real wm1 = m >= 1 ? r.w[m - 1] : Real(0);
        const Real zm1 = m >= 1 ? r.z[m - 1] : Real(0);
        const Real me = Real(m) - energy;
        r.u[m + 1] = -c.gp * (c.d2 * r.v[m] + c.d1 * r.w[m] - (me + gp2 - two_gpg) * r.u[m]) /
                         (Real(m + 1) * (c.gp - c.g)) -
                     gp2 * um1 / Real(m + 1);
        r.w[m + 1] = -(c.d2 * r.z[m] + c.d1 * r.u[m] - (me + Real(3) * gp2) * r.w[m]) /
                         (Real(2) * Real(m + 1)) -
                     gp2 * wm1 / Real(m + 1);
        r.z[m + 1] = -c.gp * (c.d1 * r.v[m] + c.d2 * r.w[m] - (me + gp2 + two_gpg) * r.z[m]) /
                         (Real(m + 1) * (c.g + c.gp)) -
                     gp2 * zm1 / Real(m + 1);
    }
    return r;
}

// Equal-coupling three-term chain for the a-coefficients, with b tied
// pointwise through b_m = bracket_m * a_m / (m - E) (integer poles whenever
// the bracket does not vanish).
template <class Real>
DChain<Real> three_term_chain(const ChainConstants<Real>& c, const Real& energy, bool seed_b0,
                              int n_max) {
    DChain<Real> r;
    r.a.assign(n_max + 1, Real(0));
    r.b.assign(n_max + 1, Real(0));
    const Real br0 = c.bracket(0);
    if (seed_b0) {
        r.b[0] = Real(1);
        r.a[0] = -energy * r.b[0] / br0;
    } else {
        r.a[0] = Real(1);
        r.b[0] = br0 == Real(0) ? Real(0) : br0 * r.a[0] / (Real(0) - energy);
    }
    const Real g2 = c.g * c.g;
    for (int m = 0; m < n_max; ++m) {
        const Real br = c.bracket(m);
        const Real me = Real(m) - energy;
        const Real am1 = m >= 1 ? r.a[m - 1] : Real(0);
        const Real factor = br == Real(0) ? -me : br * br / me - me;
        r.a[m + 1] = (factor * r.a[m] - g2 * am1) / Real(m + 1);
        const Real brn = c.bracket(m + 1);
        r.b[m + 1] = brn == Real(0) ? Real(0) : brn * r.a[m + 1] / (Real(m + 1) - energy);
    }
    return r;
}

template <class Real>
struct EqChain {
    std::vector<Real> u, y, y_swap, z;  // each c_n*g^n
};

// Equal-coupling reduction of the +g-displaced chain. The z advance couples
// to the swapped combination y_swap = d1*v + d2*w, which closes the system
// together with y = d2*v + d1*w; both are tracked.
template <class Real>
EqChain<Real> eq_chain(const ChainConstants<Real>& c, const Real& energy, const Real& y0,
                       const Real& y_swap0, const Real& z0, int n_max) {
    EqChain<Real> r;
    r.u.assign(n_max + 1, Real(0));
    r.y.assign(n_max + 1, Real(0));
    r.y_swap.assign(n_max + 1, Real(0));
    r.z.assign(n_max + 1, Real(0));
    r.y[0] = y0;
    r.y_swap[0] = y_swap0;
    r.z[0] = z0;
    const Real g2 = c.g * c.g;
    const Real cross = Real(2) * c.d1 * c.d2;
    const Real diag = c.d1 * c.d1 + c.d2 * c.d2;
    for (int m = 0; m <= n_max; ++m) {
        r.u[m] = r.y[m] / (Real(m) - energy - g2);
        if (m == n_max) break;
        const Real ym1 = m >= 1 ? r.y[m - 1] : Real(0);
        const Real sm1 = m >= 1 ? r.y_swap[m - 1] : Real(0);
        const Real zm1 = m >= 1 ? r.z[m - 1] : Real(0);
        const Real me = Real(m) - energy;
        r.y[m + 1] = -(cross * r.z[m] + diag * r.u[m] - (me + g2) * r.y[m]) / Real(m + 1) -
                     g2 * ym1 / Real(m + 1);
        r.y_swap[m + 1] =
            -(diag * r.z[m] + cross * r.u[m] - (me + g2) * r.y_swap[m]) / Real(m + 1) -
            g2 * sm1 / Real(m + 1);
        r.z[m + 1] = -(r.y_swap[m] - (me + Real(3) * g2) * r.z[m]) / (Real(2) * Real(m + 1)) -
                     g2 * zm1 / Real(m + 1);
    }
    return r;
}

// Vacuum-overlap seed sums taken over the full photon-basis chain. The
// +g-displacement overlaps consume b_n*(-g)^n, b_n*g^n, a_n*g^n; the
// +g'-displacement ones consume a_n*(-g')^n, b_n*g'^n, a_n*g'^n.
template <class Real>
struct SeedProjections {
    Real v0_a, w0_a, z0_a;
    Real u0_b, w0_b, z0_b;
    // Index of the smallest |term| seen in each family's worst sum; when it
    // equals n_max the series never reached its turning point.
    int a_turn{0}, b_turn{0};
};

template <class Real>
SeedProjections<Real> project_seeds(const ChainConstants<Real>& c, const DChain<Real>& d) {
    using std::abs;
    SeedProjections<Real> s{Real(0), Real(0), Real(0), Real(0), Real(0), Real(0)};
    const int n_max = static_cast<int>(d.a.size()) - 1;
    const Real par = Real(c.parity);
    const Real q = c.g == Real(0) ? Real(0) : c.gp / c.g;

    Real qp = Real(1);  // q^n
    Real min_a = Real(-1), min_b = Real(-1);
    for (int n = 0; n <= n_max; ++n) {
        const Real sgn = (n % 2 == 0) ? Real(1) : Real(-1);
        s.v0_a += d.b[n] * sgn;
        s.w0_a += d.b[n];
        s.z0_a += d.a[n];
        s.u0_b += d.a[n] * qp * sgn;
        s.w0_b += d.b[n] * qp;
        s.z0_b += d.a[n] * qp;
        const Real ta = abs(d.b[n]) + abs(d.a[n]);
        const Real tb = (abs(d.a[n]) + abs(d.b[n])) * abs(qp);
        if (min_a < Real(0) || ta < min_a) {
            min_a = ta;
            s.a_turn = n;
        }
        if (min_b < Real(0) || tb < min_b) {
            min_b = tb;
            s.b_turn = n;
        }
        qp *= q;
    }
    s.w0_a *= par;
    s.z0_a *= par;
    s.w0_b *= par;
    s.z0_b *= par;
    return s;
}

}  // namespace qrm2::detail
