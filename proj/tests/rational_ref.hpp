// rational_ref.hpp — exact-rational reference evaluation of the coefficient
// chains, independent of the library implementation.
//
// Each chain is re-derived here directly from the block structure of the
// rotated Hamiltonian, in unscaled form over boost::multiprecision rationals,
// and only converted to the library's scaled representation at comparison
// time. Keep this file free of qrm2/detail includes.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <vector>

namespace rational_ref {

using Rat = boost::multiprecision::cpp_rational;

struct Params {
    Rat d1, d2, g1, g2;
    Rat g() const { return g1 + g2; }
    Rat gp() const { return g1 - g2; }
};

inline Rat bracket(const Params& p, int parity, int m) {
    return m % 2 == 0 ? p.d2 + Rat(parity) * p.d1 : p.d2 - Rat(parity) * p.d1;
}

// Photon-basis chain, unscaled:
//   g(m+1) a_{m+1} = br_m b_m - (m-E) a_m - g a_{m-1}
//   g'(m+1) b_{m+1} = br_m a_m - (m-E) b_m - g' b_{m-1}
inline std::array<std::vector<Rat>, 2> d_chain(const Params& p, int parity, const Rat& e,
                                               const Rat& a0, const Rat& b0, int n_max) {
    std::vector<Rat> a(n_max + 1), b(n_max + 1);
    a[0] = a0;
    b[0] = b0;
    for (int m = 0; m < n_max; ++m) {
        const Rat br = bracket(p, parity, m);
        const Rat me = Rat(m) - e;
        const Rat am1 = m >= 1 ? a[m - 1] : Rat(0);
        const Rat bm1 = m >= 1 ? b[m - 1] : Rat(0);
        a[m + 1] = (br * b[m] - me * a[m] - p.g() * am1) / (p.g() * Rat(m + 1));
        b[m + 1] = (br * a[m] - me * b[m] - p.gp() * bm1) / (p.gp() * Rat(m + 1));
    }
    return {a, b};
}

// +g displaced chain, unscaled. u_m is fixed by (m - E - g^2) u_m = d2 v_m + d1 w_m.
inline std::array<std::vector<Rat>, 4> a_chain(const Params& p, const Rat& e, const Rat& v0,
                                               const Rat& w0, const Rat& z0, int n_max) {
    std::vector<Rat> u(n_max + 1), v(n_max + 1), w(n_max + 1), z(n_max + 1);
    v[0] = v0;
    w[0] = w0;
    z[0] = z0;
    const Rat g = p.g(), gp = p.gp(), g2 = g * g;
    for (int m = 0; m <= n_max; ++m) {
        u[m] = (p.d2 * v[m] + p.d1 * w[m]) / (Rat(m) - e - g2);
        if (m == n_max) break;
        const Rat me = Rat(m) - e;
        const Rat vm1 = m >= 1 ? v[m - 1] : Rat(0);
        const Rat wm1 = m >= 1 ? w[m - 1] : Rat(0);
        const Rat zm1 = m >= 1 ? z[m - 1] : Rat(0);
        v[m + 1] = -(p.d1 * z[m] + p.d2 * u[m] - (me + g2 - Rat(2) * g * gp) * v[m]) /
                       (Rat(m + 1) * (g - gp)) -
                   vm1 / Rat(m + 1);
        w[m + 1] = -(p.d2 * z[m] + p.d1 * u[m] - (me + g2 + Rat(2) * g * gp) * w[m]) /
                       ((g + gp) * Rat(m + 1)) -
                   wm1 / Rat(m + 1);
        z[m + 1] = -(p.d1 * v[m] + p.d2 * w[m] - (me + Rat(3) * g2) * z[m]) /
                       (Rat(2) * g * Rat(m + 1)) -
                   zm1 / Rat(m + 1);
    }
    return {u, v, w, z};
}

// +g' displaced chain, unscaled. v_m fixed by (m - E - g'^2) v_m = d1 z_m + d2 u_m.
inline std::array<std::vector<Rat>, 4> b_chain(const Params& p, const Rat& e, const Rat& u0,
                                               const Rat& w0, const Rat& z0, int n_max) {
    std::vector<Rat> u(n_max + 1), v(n_max + 1), w(n_max + 1), z(n_max + 1);
    u[0] = u0;
    w[0] = w0;
    z[0] = z0;
    const Rat g = p.g(), gp = p.gp(), gp2 = gp * gp;
    for (int m = 0; m <= n_max; ++m) {
        v[m] = (p.d1 * z[m] + p.d2 * u[m]) / (Rat(m) - e - gp2);
        if (m == n_max) break;
        const Rat me = Rat(m) - e;
        const Rat um1 = m >= 1 ? u[m - 1] : Rat(0);
        const Rat wm1 = m >= 1 ? w[m - 1] : Rat(0);
        const Rat zm1 = m >= 1 ? z[m - 1] : Rat(0);
        u[m + 1] = -(p.d2 * v[m] + p.d1 * w[m] - (me + gp2 - Rat(2) * gp * g) * u[m]) /
                       (Rat(m + 1) * (gp - g)) -
                   um1 / Rat(m + 1);
        w[m + 1] = -(p.d2 * z[m] + p.d1 * u[m] - (me + Rat(3) * gp2) * w[m]) /
                       (Rat(2) * gp * Rat(m + 1)) -
                   wm1 / Rat(m + 1);
        z[m + 1] = -(p.d1 * v[m] + p.d2 * w[m] - (me + gp2 + Rat(2) * gp * g) * z[m]) /
                       (Rat(m + 1) * (g + gp)) -
                   zm1 / Rat(m + 1);
    }
    return {u, v, w, z};
}

// Equal-coupling three-term chain for a, with b tied by
// br_m a_m = (m - E) b_m. Unscaled.
inline std::array<std::vector<Rat>, 2> three_term_chain(const Params& p, int parity, const Rat& e,
                                                        bool seed_b0, int n_max) {
    std::vector<Rat> a(n_max + 1), b(n_max + 1);
    const Rat g = p.g();
    if (seed_b0) {
        b[0] = 1;
        a[0] = -e * b[0] / bracket(p, parity, 0);
    } else {
        a[0] = 1;
        const Rat br0 = bracket(p, parity, 0);
        b[0] = br0 == 0 ? Rat(0) : Rat(br0 * a[0] / (Rat(0) - e));
    }
    for (int m = 0; m < n_max; ++m) {
        const Rat br = bracket(p, parity, m);
        const Rat me = Rat(m) - e;
        const Rat am1 = m >= 1 ? a[m - 1] : Rat(0);
        const Rat factor = br == 0 ? Rat(-me) : Rat(br * br / me - me);
        a[m + 1] = (factor * a[m] - g * am1) / (g * Rat(m + 1));
        const Rat brn = bracket(p, parity, m + 1);
        b[m + 1] = brn == 0 ? Rat(0) : Rat(brn * a[m + 1] / (Rat(m + 1) - e));
    }
    return {a, b};
}

// Equal-coupling reduced chain for (u, y, y_swap, z), unscaled.
inline std::array<std::vector<Rat>, 4> eq_chain(const Params& p, const Rat& e, const Rat& y0,
                                                const Rat& ys0, const Rat& z0, int n_max) {
    std::vector<Rat> u(n_max + 1), y(n_max + 1), ys(n_max + 1), z(n_max + 1);
    y[0] = y0;
    ys[0] = ys0;
    z[0] = z0;
    const Rat g = p.g(), g2 = p.g() * p.g();
    const Rat cross = Rat(2) * p.d1 * p.d2;
    const Rat diag = p.d1 * p.d1 + p.d2 * p.d2;
    for (int m = 0; m <= n_max; ++m) {
        u[m] = y[m] / (Rat(m) - e - g2);
        if (m == n_max) break;
        const Rat me = Rat(m) - e;
        const Rat ym1 = m >= 1 ? y[m - 1] : Rat(0);
        const Rat sm1 = m >= 1 ? ys[m - 1] : Rat(0);
        const Rat zm1 = m >= 1 ? z[m - 1] : Rat(0);
        y[m + 1] = -(cross * z[m] + diag * u[m] - (me + g2) * y[m]) / (Rat(m + 1) * g) -
                   ym1 / Rat(m + 1);
        ys[m + 1] = -(diag * z[m] + cross * u[m] - (me + g2) * ys[m]) / (Rat(m + 1) * g) -
                    sm1 / Rat(m + 1);
        z[m + 1] = -(ys[m] - (me + Rat(3) * g2) * z[m]) / (Rat(2) * g * Rat(m + 1)) -
                   zm1 / Rat(m + 1);
    }
    return {u, y, ys, z};
}

// Scaled view c_n * s^n of an unscaled chain, as double.
inline std::vector<double> scaled(const std::vector<Rat>& chain, const Rat& s) {
    std::vector<double> out(chain.size());
    Rat power = 1;
    for (std::size_t n = 0; n < chain.size(); ++n) {
        out[n] = static_cast<double>(chain[n] * power);
        power *= s;
    }
    return out;
}

}  // namespace rational_ref
