// Triangle/hexagon decomposition of a convex polygon K: the maximal inscribed
// triangle T, the width parameters t_i measuring how far K extends beyond each
// side of T, the circumscribed hexagon H2, and the inscribed hexagons H1
// (through boundary points of K at full width) and H0 (isosceles bumps over
// the sides of T).  The perimeter/mixed-area deficit is monotone along
// K -> H1 -> H0 against the fixed mixed area of H2, which is the sandwich
// chain checked here.
//
// Index conventions (0-based, all counterclockwise): side a_i of T is the
// side opposite vertex v_i, connecting v_{i+1} and v_{i+2}; n_i is its
// outward unit normal; h_i = 2 area(T) / a_i is the height over that side.
// The outer corner w[i][j] (i != j) is the intersection of the supporting
// line through v_i parallel to a_i with the line of a_j shifted outward by
// t_j h_j.

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "bwstab/errors.hpp"
#include "bwstab/mixed_area.hpp"
#include "bwstab/polygon.hpp"

namespace bwstab {

struct HexagonDecomposition {
    ConvexPolygon T;
    ConvexPolygon H1, H2;
    std::array<double, 3> a;  // side lengths, a[i] opposite T[i]
    std::array<double, 3> h;  // heights over the sides
    std::array<double, 3> t;  // width parameters, each in [0,1]
    std::array<std::array<Vec2, 3>, 3> w;  // outer corners w[i][j], i != j
    std::array<Vec2, 3> q;    // boundary points of K at full width over a_i
    std::array<Vec2, 3> p;    // isosceles bump apexes over a_i
    std::vector<Vec2> h0;     // hexagon v0 p2 v1 p0 v2 p1, possibly nonconvex
    bool h0_convex = true;
    double perimeter_h0 = 0.0;  // closed form, valid also when nonconvex
};

namespace hexagon_detail {

inline double polygon_scale(const ConvexPolygon& k) {
    double s = 1.0;
    for (const auto& v : k.vertices()) s = std::max({s, std::abs(v.x), std::abs(v.y)});
    return s;
}

// Intersection of the line through p with direction d and the line through
// q with direction e; the directions are never parallel here.
inline Vec2 line_intersect(Vec2 p, Vec2 d, Vec2 q, Vec2 e) {
    const double det = cross(d, e);
    const double s = cross(q - p, e) / det;
    return p + d * s;
}

}  // namespace hexagon_detail

// Maximum-area triangle with vertices among the vertices of K, by exhaustive
// search over all triples; ties break toward the lexicographically smallest
// index triple.  By maximality, the line through each vertex parallel to the
// opposite side supports K.
inline ConvexPolygon max_inscribed_triangle(const ConvexPolygon& k) {
    const std::size_t n = k.size();
    double best = -1.0;
    std::array<std::size_t, 3> pick{0, 1, 2};
    for (std::size_t i = 0; i + 2 < n; ++i)
        for (std::size_t j = i + 1; j + 1 < n; ++j)
            for (std::size_t l = j + 1; l < n; ++l) {
                const double area2 = cross(k[j] - k[i], k[l] - k[i]);
                if (area2 > best) {
                    best = area2;
                    pick = {i, j, l};
                }
            }
    ConvexPolygon t({k[pick[0]], k[pick[1]], k[pick[2]]});
    const double scale = hexagon_detail::polygon_scale(k);
    for (int i = 0; i < 3; ++i) {
        const Vec2 d = t[(i + 2) % 3] - t[(i + 1) % 3];
        const Vec2 nrm = Vec2(d.y, -d.x) * (1.0 / d.norm());
        // all of K on the a_i side of the line through v_i parallel to a_i
        if (support(k, -nrm) > dot(-nrm, t[i]) + 1e-9 * scale)
            throw InvariantViolation(
                "max_inscribed_triangle: supporting-line property failed at vertex " +
                std::to_string(i));
    }
    return t;
}

// Width parameters: t_i = width(K, n_i)/h_i - 1, clamped into [0,1] when
// within 1e-9 outside.  t_i > 1 contradicts the maximality of T.
inline std::array<double, 3> width_params(const ConvexPolygon& k, const ConvexPolygon& t) {
    if (t.size() != 3) throw DomainError("width_params: T must be a triangle");
    const double area2 = 2.0 * area(t);
    std::array<double, 3> out{};
    for (int i = 0; i < 3; ++i) {
        const Vec2 d = t[(i + 2) % 3] - t[(i + 1) % 3];
        const double a = d.norm();
        const double h = area2 / a;
        const Vec2 nrm = Vec2(d.y, -d.x) * (1.0 / a);
        const double width = support(k, nrm) + support(k, -nrm);
        double ti = width / h - 1.0;
        if (ti < -1e-9 || ti > 1.0 + 1e-9)
            throw InvariantViolation("width_params: t_" + std::to_string(i) + " = " +
                                     std::to_string(ti) + " outside [0,1]");
        out[i] = std::min(1.0, std::max(0.0, ti));
    }
    return out;
}

// Full decomposition from consistent (K, T, t).  Validates the side
// relations of the outer corners, the containments T in H1 in K in H2, and
// the H1 area identity.
inline HexagonDecomposition build_hexagons(const ConvexPolygon& k, const ConvexPolygon& t,
                                           const std::array<double, 3>& ts) {
    if (t.size() != 3) throw DomainError("build_hexagons: T must be a triangle");
    const double at = area(t);
    const double scale = hexagon_detail::polygon_scale(k);

    std::array<double, 3> a{}, h{};
    std::array<Vec2, 3> dir, nrm;
    for (int i = 0; i < 3; ++i) {
        const Vec2 d = t[(i + 2) % 3] - t[(i + 1) % 3];
        a[i] = d.norm();
        h[i] = 2.0 * at / a[i];
        dir[i] = d * (1.0 / a[i]);
        nrm[i] = {dir[i].y, -dir[i].x};
    }
    const double tsum = ts[0] + ts[1] + ts[2];
    if (tsum >= 1.5 + 1e-9)
        throw InvariantViolation("build_hexagons: t1+t2+t3 = " + std::to_string(tsum) +
                                 " not below 1.5");

    // Outer corners: line through v_i parallel to a_i meets the shifted a_j.
    std::array<std::array<Vec2, 3>, 3> w;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            const Vec2 on_aj = t[(j + 1) % 3] + nrm[j] * (ts[j] * h[j]);
            w[i][j] = hexagon_detail::line_intersect(t[i], dir[i], on_aj, dir[j]);
        }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            const int l = 3 - i - j;  // the third index
            if (std::abs((w[i][j] - t[i]).norm() - ts[j] * a[i]) > 1e-9 * scale)
                throw InvariantViolation("build_hexagons: |w_ij - v_i| != t_j a_i at i=" +
                                         std::to_string(i) + " j=" + std::to_string(j));
            if (std::abs((w[i][j] - w[l][j]).norm() - (1.0 - ts[j]) * a[j]) > 1e-9 * scale)
                throw InvariantViolation(
                    "build_hexagons: |w_ij - w_lj| != (1-t_j) a_j at i=" + std::to_string(i) +
                    " j=" + std::to_string(j));
        }

    // H2 in counterclockwise order, alternating supporting lines and shifted
    // side lines; degenerate corners (t_j = 0) merge inside the constructor.
    ConvexPolygon h2({w[0][2], w[1][2], w[1][0], w[2][0], w[2][1], w[0][1]});
    for (const auto& e : edge_fan(h2))
        for (const auto& v : k.vertices())
            if (dot(e.normal, v - e.a) > 1e-9 * scale)
                throw InvariantViolation("build_hexagons: K not contained in H2");

    // q_i: midpoint of the face of K in direction n_i (a point of K on the
    // segment [w_ji, w_li]); p_i: the isosceles apex on the perpendicular
    // bisector of a_i at the same height.
    std::array<Vec2, 3> q, p;
    double l_h0 = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double hk = support(k, nrm[i]);
        Vec2 lo{0, 0}, hi{0, 0};
        bool first = true;
        for (const auto& v : k.vertices()) {
            if (dot(nrm[i], v) < hk - 1e-12 * scale) continue;
            if (first || dot(dir[i], v) < dot(dir[i], lo)) lo = v;
            if (first || dot(dir[i], v) > dot(dir[i], hi)) hi = v;
            first = false;
        }
        q[i] = (lo + hi) * 0.5;
        p[i] = (t[(i + 1) % 3] + t[(i + 2) % 3]) * 0.5 + nrm[i] * (ts[i] * h[i]);
        l_h0 += std::sqrt(a[i] * a[i] + 4.0 * ts[i] * ts[i] * h[i] * h[i]);
    }

    ConvexPolygon h1({t[0], q[2], t[1], q[0], t[2], q[1]});
    if (std::abs(area(h1) - (1.0 + tsum) * at) > 1e-9 * scale * scale)
        throw InvariantViolation("build_hexagons: area(H1) != (1+t1+t2+t3) area(T)");
    for (const auto& e : edge_fan(k)) {
        for (const auto& v : h1.vertices())
            if (dot(e.normal, v - e.a) > 1e-9 * scale)
                throw InvariantViolation("build_hexagons: H1 not contained in K");
        for (const auto& v : t.vertices())
            if (dot(e.normal, v - e.a) > 1e-9 * scale)
                throw InvariantViolation("build_hexagons: T not contained in K");
    }

    std::vector<Vec2> h0 = {t[0], p[2], t[1], p[0], t[2], p[1]};
    bool h0_convex = true;
    for (std::size_t i = 0; i < h0.size(); ++i) {
        const Vec2 u = h0[(i + 1) % 6] - h0[i];
        const Vec2 v = h0[(i + 2) % 6] - h0[(i + 1) % 6];
        if (cross(u, v) < -1e-12 * scale * scale) h0_convex = false;
    }

    return HexagonDecomposition{t,  std::move(h1), std::move(h2), a, h, ts, w, q, p,
                                std::move(h0), h0_convex, l_h0};
}

inline HexagonDecomposition decompose(const ConvexPolygon& k) {
    const auto t = max_inscribed_triangle(k);
    return build_hexagons(k, t, width_params(k, t));
}

struct ChainReport {
    HexagonDecomposition dec;
    double deficit_k = 0.0;   // L(K)^2   - 6 sqrt(3) A(K,-K)
    double deficit_h1 = 0.0;  // L(H1)^2  - 6 sqrt(3) A(H2,-H2)
    double deficit_h0 = 0.0;  // L(H0)^2  - 6 sqrt(3) A(H2,-H2), closed form
};

// The sandwich chain: deficit(K) >= deficit(H1) >= deficit(H0), each within
// a relative slack of 1e-9.  H0 enters through its closed-form perimeter so
// that a nonconvex H0 is handled uniformly.
inline ChainReport chain_check(const ConvexPolygon& k) {
    ChainReport rep{decompose(k)};
    const double root3 = std::sqrt(3.0);
    const double lk = perimeter(k);
    const double ah2 = mixed_area_minkowski(rep.dec.H2, reflect(rep.dec.H2));
    rep.deficit_k = lk * lk - 6.0 * root3 * mixed_area_minkowski(k, reflect(k));
    const double lh1 = perimeter(rep.dec.H1);
    rep.deficit_h1 = lh1 * lh1 - 6.0 * root3 * ah2;
    rep.deficit_h0 = rep.dec.perimeter_h0 * rep.dec.perimeter_h0 - 6.0 * root3 * ah2;
    const double slack = 1e-9 * std::max(1.0, lk * lk);
    if (rep.deficit_k < rep.deficit_h1 - slack)
        throw InvariantViolation("chain_check: deficit(K) < deficit(H1)");
    if (rep.deficit_h1 < rep.deficit_h0 - slack)
        throw InvariantViolation("chain_check: deficit(H1) < deficit(H0)");
    return rep;
}

// Side lengths rho_1..rho_3 of a triangle whose area is at least xi*rho_1,
// with 0 <= xi <= rho_1: then rho_2 + rho_3 >= rho_1 + xi^2/rho_1 (up to
// 1e-12).  Preconditions are enforced, the conclusion is reported.
inline bool claim_33_check(double rho1, double rho2, double rho3, double xi) {
    if (!(rho1 > 0.0) || !(rho2 > 0.0) || !(rho3 > 0.0))
        throw DomainError("claim_33_check: side lengths must be positive");
    if (rho1 > rho2 + rho3 || rho2 > rho3 + rho1 || rho3 > rho1 + rho2)
        throw DomainError("claim_33_check: side lengths violate the triangle inequality");
    if (!(xi >= 0.0) || xi > rho1) throw DomainError("claim_33_check: xi outside [0, rho1]");
    const double s = (rho1 + rho2 + rho3) / 2.0;
    const double sq = s * (s - rho1) * (s - rho2) * (s - rho3);
    const double area = std::sqrt(std::max(0.0, sq));
    if (area < xi * rho1 - 1e-12)
        throw DomainError("claim_33_check: triangle area below xi*rho1");
    return rho2 + rho3 >= rho1 + xi * xi / rho1 - 1e-12;
}

}  // namespace bwstab
