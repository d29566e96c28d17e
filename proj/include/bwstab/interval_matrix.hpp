#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

#include "bwstab/box.hpp"
#include "bwstab/errors.hpp"
#include "bwstab/interval.hpp"
#include "bwstab/jet.hpp"

// Derivative extraction from degree-6 jets and rigorous Hessian enclosures
// over a box, plus a small dense Jacobi eigensolver for point matrices.

namespace bwstab {

using Mat5 = std::array<std::array<Interval, 5>, 5>;

inline Interval jet_value(const Jet<Interval>& j) { return j.c[0]; }

inline std::array<Interval, 5> jet_gradient(const Jet<Interval>& j) {
    std::array<Interval, 5> g;
    for (int i = 0; i < 5; ++i) {
        std::array<std::uint8_t, 5> e{};
        e[i] = 1;
        g[i] = j.coeff(e);
    }
    return g;
}

// Hessian read straight off the degree-2 coefficients. When the jet was
// lifted over a box this already encloses the Hessian at every point of the
// box (the fallback enclosure); it just ignores how far from the midpoint the
// high-order terms act.
inline Mat5 jet_hessian(const Jet<Interval>& j) {
    Mat5 h;
    for (int i = 0; i < 5; ++i)
        for (int k = i; k < 5; ++k) {
            std::array<std::uint8_t, 5> e{};
            ++e[i];
            ++e[k];
            Interval v = j.coeff(e);
            if (i == k) v = v * Interval(2.0);
            h[i][k] = v;
            h[k][i] = v;
        }
    return h;
}

// Sharper Hessian enclosure over the box:
//
//   H_ij(x) c H_ij(m) + sum over 3 <= |alpha| <= 6, alpha >= e_i + e_j of
//              c_alpha(box) * mu_ij(alpha) * (box - m)^(alpha - e_i - e_j)
//
// where mu_ii = a_i (a_i - 1), mu_ij = a_i a_j. Terms with |alpha| <= 5 are
// the Taylor expansion of d_i d_j f at m; the |alpha| = 6 terms bound the
// Lagrange remainder because the box-lifted coefficients c_alpha(box)
// enclose c_alpha(xi) for every xi in the box. The result is intersected with
// the plain degree-2 readout, so it is never wider than the fallback.
//
// `mid` must be a point of `box`, and `mid_jet`/`box_jet` must be the same
// expression evaluated on variables lifted at `mid` and over `box`.
inline Mat5 hessian_enclosure(const Jet<Interval>& mid_jet, const Jet<Interval>& box_jet,
                              const Box& box, const std::array<double, 5>& mid) {
    if (box.size() != 5) throw InvariantViolation("hessian_enclosure expects a 5-dimensional box");
    for (int k = 0; k < 5; ++k)
        if (!box[k].contains(mid[k]))
            throw InvariantViolation("hessian_enclosure: expansion point outside the box");

    // per-dimension powers of (box - m), exponents 0..4
    std::array<std::array<Interval, 5>, 5> dpow;
    for (int k = 0; k < 5; ++k) {
        Interval d = box[k] - Interval(mid[k]);
        dpow[k][0] = Interval(1.0);
        for (int p = 1; p <= 4; ++p) dpow[k][p] = dpow[k][p - 1] * d;
    }

    Mat5 h = jet_hessian(mid_jet);
    const auto& tb = jet_detail::tables();
    for (int t = tb.deg_off[3]; t < tb.deg_off[7]; ++t) {
        const auto& a = tb.exps[t];
        const Interval& ca = box_jet.c[t];
        for (int i = 0; i < 5; ++i) {
            if (a[i] < 1) continue;
            for (int j = i; j < 5; ++j) {
                int mu;
                if (i == j) {
                    if (a[i] < 2) continue;
                    mu = a[i] * (a[i] - 1);
                } else {
                    if (a[j] < 1) continue;
                    mu = a[i] * a[j];
                }
                Interval term = ca * Interval(static_cast<double>(mu));
                for (int k = 0; k < 5; ++k) {
                    int p = a[k] - (k == i) - (k == j);
                    if (p > 0) term = term * dpow[k][p];
                }
                h[i][j] = h[i][j] + term;
                if (i != j) h[j][i] = h[i][j];
            }
        }
    }

    // never wider than the fallback, and the intersection must be nonempty
    // (both are enclosures of the same function values)
    Mat5 fb = jet_hessian(box_jet);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) h[i][j] = intersect(h[i][j], fb[i][j]);
    return h;
}

// Eigenvalues of a symmetric n x n double matrix (n <= 5) by cyclic Jacobi
// rotations; returns them sorted ascending. Plain double arithmetic: used for
// diagnostics and midpoint spectra, not for certification.
inline std::array<double, 5> jacobi_eigenvalues(std::array<std::array<double, 5>, 5> a, int n) {
    if (n < 1 || n > 5) throw InvariantViolation("jacobi_eigenvalues supports 1 <= n <= 5");
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
        if (off < 1e-30) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                if (a[p][q] == 0.0) continue;
                double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
    }
    std::array<double, 5> ev{};
    for (int i = 0; i < n; ++i) ev[i] = a[i][i];
    std::sort(ev.begin(), ev.begin() + n);
    return ev;
}

}  // namespace bwstab
