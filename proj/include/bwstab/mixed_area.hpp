#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "bwstab/errors.hpp"
#include "bwstab/polygon.hpp"

namespace bwstab {

// The reference vector passed to the two-fan mixed-area formula coincides
// (within angular tolerance) with a forbidden normal direction. Carries an
// admissible substitute found by the deterministic retry scheme.
struct RetryWithPerturbedW : std::runtime_error {
    Vec2 suggested_w;
    RetryWithPerturbedW(const std::string& msg, Vec2 w)
        : std::runtime_error(msg), suggested_w(w) {}
};

// Mixed area by the support representation:
//
//   A(P, Q) = 1/2 sum over edges u of P of h_Q(u) S_P(u).
//
// Symmetric in its arguments and translation invariant; A(P, P) = area(P).
inline double mixed_area_minkowski(const ConvexPolygon& p, const ConvexPolygon& q) {
    double acc = 0.0;
    for (const Edge& e : edge_fan(p)) acc += support(q, e.normal) * e.length;
    return 0.5 * acc;
}

namespace mixed_detail {

// w lies within angular tolerance of direction u (both unit).
inline bool near_direction(const Vec2& w, const Vec2& u, double tol) {
    return std::fabs(cross(w, u)) < tol && dot(w, u) > 0.0;
}

inline bool admissible_w(const Vec2& w, const ConvexPolygon& p, const ConvexPolygon& q,
                         double tol = 1e-12) {
    for (const Edge& e : edge_fan(p))
        if (near_direction(w, e.normal, tol)) return false;
    for (const Edge& e : edge_fan(q))
        if (near_direction(w, -e.normal, tol)) return false;
    return true;
}

// Deterministic reference vector: rotate (1, 0) by successive multiples of
// the golden angle (an irrational multiple of the circle, so the sequence
// never cycles onto a fixed normal) and take the first admissible direction.
inline Vec2 pick_w(const ConvexPolygon& p, const ConvexPolygon& q) {
    const double golden = 3.0 - std::sqrt(5.0);  // times pi: ~2.3999 rad
    for (int j = 1; j <= 32; ++j) {
        const double th = golden * 3.14159265358979323846 * j;
        const Vec2 w(std::cos(th), std::sin(th));
        if (admissible_w(w, p, q)) return w;
    }
    throw InvariantViolation("no admissible reference vector in 32 rotations");
}

// Strict membership of w in the positive cone spanned by c1 and c2. With w
// bounded away from both boundary rays (the admissibility check), the sign
// tests are reliable; a degenerate spanning pair contributes nothing to the
// sum anyway since |det(u, v)| = 0.
inline bool in_pos_cone(const Vec2& w, const Vec2& c1, const Vec2& c2) {
    const double d = cross(c1, c2);
    if (d == 0.0) return false;
    const double a = cross(w, c2) / d;
    const double b = cross(c1, w) / d;
    return a > 0.0 && b > 0.0;
}

}  // namespace mixed_detail

// Mixed area by the two-fan formula:
//
//   2 A(P, Q) = sum over u in U(P), v in U(Q) with w in pos{u, -v} of
//               |det(u, v)| S_P(u) S_Q(v)
//
// for any unit w outside U(P) and U(-Q). The value is independent of the
// admissible w; each admissible choice selects a different telescoping of the
// same sum.
inline double mixed_area_betke(const ConvexPolygon& p, const ConvexPolygon& q, const Vec2& w) {
    const double wn = w.norm();
    if (wn == 0.0) throw DomainError("mixed_area_betke: zero reference vector");
    const Vec2 wu = w * (1.0 / wn);
    if (!mixed_detail::admissible_w(wu, p, q))
        throw RetryWithPerturbedW("reference vector coincides with a normal direction",
                                  mixed_detail::pick_w(p, q));
    double acc = 0.0;
    for (const Edge& ep : edge_fan(p))
        for (const Edge& eq : edge_fan(q))
            if (mixed_detail::in_pos_cone(wu, ep.normal, -eq.normal))
                acc += std::fabs(cross(ep.normal, eq.normal)) * ep.length * eq.length;
    return 0.5 * acc;
}

inline double mixed_area_betke(const ConvexPolygon& p, const ConvexPolygon& q) {
    return mixed_area_betke(p, q, mixed_detail::pick_w(p, q));
}

// Independent ground truth through the area of the Minkowski sum:
// A(P ⊕ Q) = A(P) + 2 A(P, Q) + A(Q).
inline double mixed_area_oracle(const ConvexPolygon& p, const ConvexPolygon& q) {
    return 0.5 * (area(minkowski_sum(p, q)) - area(p) - area(q));
}

// Deficit of the perimeter-vs-mixed-area inequality L(K)^2 >= 6 sqrt(3)
// A(K, -K) (Betke-Weil); zero exactly for regular triangles.
inline double bw_deficit(const ConvexPolygon& p) {
    const double l = perimeter(p);
    return l * l - 6.0 * std::sqrt(3.0) * mixed_area_minkowski(p, reflect(p));
}

}  // namespace bwstab
