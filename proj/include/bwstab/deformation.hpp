// Deformation moves that strictly decrease L^2/A(P,-P) for non-extremal
// polygons, and the closed-form quantities of regular odd polygons.
//
// Three mechanisms, by the structure of the normal fan:
//   * case1_move: if the reflected normal cone of a vertex fits inside the
//     normal cone of another vertex, sliding the first vertex along one of
//     its edges preserves A(P,-P) exactly and shortens the perimeter.
//   * case2_move: if the support line through a vertex v parallel to some
//     side touches P at v only, and its normal does not bisect the cone at
//     v, sliding v along that support line keeps A(P,-P) and (by Fermat's
//     principle) shortens the perimeter for a small step.
//   * perturb_side on equiangular polygons: pushing one side line outward
//     changes L and A(P,-P) by closed-form rates (kappa and a varrho-
//     weighted sum of far sides), giving an explicit descent direction
//     whenever the polygon is not regular.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "bwstab/dtr.hpp"
#include "bwstab/errors.hpp"
#include "bwstab/mixed_area.hpp"
#include "bwstab/polygon.hpp"

namespace bwstab {

namespace deformation_detail {

inline constexpr double kPi = 3.14159265358979323846;

// x inside the positive cone spanned from lo to hi (counterclockwise sector
// of width below pi), within an angular slack.
inline bool cone_contains(Vec2 lo, Vec2 hi, Vec2 x, double tol) {
    return cross(lo, x) >= -tol && cross(x, hi) >= -tol;
}

}  // namespace deformation_detail

// Convex polygon with all exterior angles equal to 2*pi/k: outward normal of
// side i points at angle phase + 2*pi*i/k, side i has length e[i] > 0, and
// the edge vectors close up to a cycle.
struct EquiangularPolygon {
    int k;
    std::vector<double> e;  // side lengths
    double phase;           // direction of the first outward normal

    EquiangularPolygon(int k_, std::vector<double> e_, double phase_ = 0.0)
        : k(k_), e(std::move(e_)), phase(phase_) {
        if (k < 3) throw DomainError("equiangular polygon needs at least 3 sides");
        if (static_cast<int>(e.size()) != k)
            throw DomainError("equiangular polygon: side count does not match k");
        double total = 0.0;
        Vec2 closure{0, 0};
        for (int i = 0; i < k; ++i) {
            if (!(e[i] > 0.0)) throw DomainError("equiangular polygon: sides must be positive");
            closure = closure + direction(i) * e[i];
            total += e[i];
        }
        if (closure.norm() > 1e-9 * total)
            throw DomainError("equiangular polygon: edge vectors do not close up");
    }

    Vec2 normal(int i) const {
        const double a = phase + 2.0 * deformation_detail::kPi * i / k;
        return {std::cos(a), std::sin(a)};
    }
    // edge direction for a counterclockwise boundary walk
    Vec2 direction(int i) const { return perp(normal(i)); }

    double perimeter() const {
        double s = 0.0;
        for (double ei : e) s += ei;
        return s;
    }
};

// Remove the closure defect of a raw side-length vector: the edge directions
// are equally spaced, so the orthogonal projection onto the two closure
// constraints has the simple form e_i -> e_i - (2/k) <d_i, sum e_j d_j>.
inline std::vector<double> project_closure(int k, std::vector<double> e, double phase = 0.0) {
    if (k < 3 || static_cast<int>(e.size()) != k)
        throw DomainError("project_closure: need k >= 3 side lengths");
    Vec2 r{0, 0};
    std::vector<Vec2> d(k);
    for (int i = 0; i < k; ++i) {
        const double a = phase + 2.0 * deformation_detail::kPi * i / k;
        d[i] = perp(Vec2{std::cos(a), std::sin(a)});
        r = r + d[i] * e[i];
    }
    for (int i = 0; i < k; ++i) e[i] -= 2.0 / k * dot(d[i], r);
    return e;
}

inline ConvexPolygon to_polygon(const EquiangularPolygon& p) {
    std::vector<Vec2> v;
    Vec2 cur{0, 0};
    for (int i = 0; i < p.k; ++i) {
        v.push_back(cur);
        cur = cur + p.direction(i) * p.e[i];
    }
    return ConvexPolygon(std::move(v));
}

// dL/dt when one side line of an equiangular k-gon moves outward at unit
// speed: the side gains 2 cos(theta)/sin(theta) less than the two neighbors
// gain together, theta = 2*pi/k.
inline double kappa(int k) {
    const double th = 2.0 * deformation_detail::kPi / k;
    return 2.0 * (1.0 - std::cos(th)) / std::sin(th);
}

// Geometric weight of the two opposite sides in dA(P,-P)/dt.
inline double varrho(int k) {
    return std::sin(deformation_detail::kPi / k) / std::sin(2.0 * deformation_detail::kPi / k);
}

// The polygon bounded by the same side lines with line i pushed outward by
// t (t may be negative).  Throws when a side length would vanish or turn
// negative, which is where the k-gon stops being one.
inline ConvexPolygon perturb_side(const EquiangularPolygon& p, int i, double t) {
    if (i < 0 || i >= p.k) throw DomainError("perturb_side: side index out of range");
    const auto base = to_polygon(p);
    std::vector<double> h(p.k);
    for (int j = 0; j < p.k; ++j) h[j] = dot(p.normal(j), base[j]);  // vertex j lies on line j
    h[i] += t;
    const double th = 2.0 * deformation_detail::kPi / p.k;
    for (int j = 0; j < p.k; ++j) {
        const double side = (h[(j + p.k - 1) % p.k] + h[(j + 1) % p.k] -
                             2.0 * h[j] * std::cos(th)) /
                            std::sin(th);
        if (!(side > 1e-12 * p.perimeter()))
            throw DomainError("perturb_side: step destroys convexity at side " +
                              std::to_string(j));
    }
    std::vector<Vec2> v(p.k);
    for (int j = 0; j < p.k; ++j) {
        // vertex j = intersection of side lines j-1 and j
        const Vec2 u1 = p.normal((j + p.k - 1) % p.k), u2 = p.normal(j);
        const double det = cross(u1, u2);
        v[j] = {(h[(j + p.k - 1) % p.k] * u2.y - h[j] * u1.y) / det,
                (h[j] * u1.x - h[(j + p.k - 1) % p.k] * u2.x) / det};
    }
    return ConvexPolygon(std::move(v));
}

// d/dt of A(P_t,-P_t)/L(P_t)^2 at t = 0 for the side-i perturbation:
// (dA*L - 2*A*kappa)/L^3 with dA = (e_{i+m} + e_{i+m-1})*varrho, where the
// offset m = (k+1)/2 points at the two sides facing side i.  Vanishes for
// every i exactly when all (e_{j}+e_{j-1}) agree, e.g. for regular polygons.
inline double ratio_derivative(const EquiangularPolygon& p, int i) {
    if (p.k % 2 == 0)
        throw DomainError("ratio_derivative: opposite-side offset needs odd k");
    if (p.k < 5) throw DomainError("ratio_derivative: needs k >= 5");
    if (i < 0 || i >= p.k) throw DomainError("ratio_derivative: side index out of range");
    const int m = (p.k + 1) / 2;
    const auto poly = to_polygon(p);
    const double l = p.perimeter();
    const double a = mixed_area_minkowski(poly, reflect(poly));
    const double da = (p.e[(i + m) % p.k] + p.e[(i + m - 1) % p.k]) * varrho(p.k);
    return (da * l - 2.0 * a * kappa(p.k)) / (l * l * l);
}

// Slide vertex v1 halfway along one of its edges.  Applicable when some
// other vertex's normal cone contains the reflection of v1's normal cone;
// then the vacated support directions stay paired with the same opposite
// support values and A(P,-P) is unchanged, while L strictly drops.
inline ConvexPolygon case1_move(const ConvexPolygon& p, std::size_t v1) {
    const std::size_t n = p.size();
    if (v1 >= n) throw DomainError("case1_move: vertex index out of range");
    const auto fan = edge_fan(p);
    const Vec2 lo = -fan[(v1 + n - 1) % n].normal;  // reflected cone at v1,
    const Vec2 hi = -fan[v1].normal;                // still counterclockwise
    bool found = false;
    for (std::size_t j = 0; j < n && !found; ++j) {
        if (j == v1) continue;
        found = deformation_detail::cone_contains(fan[(j + n - 1) % n].normal, fan[j].normal,
                                                  lo, 1e-12) &&
                deformation_detail::cone_contains(fan[(j + n - 1) % n].normal, fan[j].normal,
                                                  hi, 1e-12);
    }
    if (!found)
        throw NotApplicable("case1_move: no vertex cone contains the reflected cone of v" +
                            std::to_string(v1));
    std::vector<Vec2> v(p.vertices().begin(), p.vertices().end());
    v[v1] = p[v1] + (p[(v1 + 1) % n] - p[v1]) * 0.5;
    return ConvexPolygon(std::move(v));
}

inline ConvexPolygon case1_move(const ConvexPolygon& p) {
    for (std::size_t i = 0; i < p.size(); ++i) {
        try {
            return case1_move(p, i);
        } catch (const NotApplicable&) {
            continue;
        }
    }
    throw NotApplicable("case1_move: no applicable vertex");
}

// Slide vertex v along the support line through v parallel to a far side
// whose inward normal lands in v's cone off-center.  Step starts at
// 1e-3*L(P) and halves until the polygon stays convex, the perimeter
// strictly drops, and the mixed area is preserved to 1e-9.
inline ConvexPolygon case2_move(const ConvexPolygon& p, std::size_t vi) {
    const std::size_t n = p.size();
    if (vi >= n) throw DomainError("case2_move: vertex index out of range");
    const auto fan = edge_fan(p);
    const Vec2 clo = fan[(vi + n - 1) % n].normal, chi = fan[vi].normal;
    const double l0 = perimeter(p);
    const double a0 = mixed_area_minkowski(p, reflect(p));
    const Vec2 d_prev = (p[vi] - p[(vi + n - 1) % n]) * (1.0 / (p[vi] - p[(vi + n - 1) % n]).norm());
    const Vec2 d_next = (p[vi] - p[(vi + 1) % n]) * (1.0 / (p[vi] - p[(vi + 1) % n]).norm());
    for (std::size_t j = 0; j < n; ++j) {
        if (j == vi || j == (vi + n - 1) % n) continue;
        const Vec2 u0 = fan[j].normal;
        if (!deformation_detail::cone_contains(clo, chi, -u0, 1e-12)) continue;
        // perimeter slope along the support line; zero means -u0 bisects
        Vec2 nu = perp(u0);
        double slope = dot(nu, d_prev) + dot(nu, d_next);
        if (slope > 0.0) {
            nu = -nu;
            slope = -slope;
        }
        if (slope > -1e-9) continue;  // bisecting within tolerance
        double step = 1e-3 * l0;
        for (int halvings = 0; halvings < 50; ++halvings, step *= 0.5) {
            std::vector<Vec2> v(p.vertices().begin(), p.vertices().end());
            v[vi] = p[vi] + nu * step;
            try {
                ConvexPolygon cand(std::move(v));
                if (cand.size() != n) continue;
                const double a1 = mixed_area_minkowski(cand, reflect(cand));
                if (perimeter(cand) < l0 && std::abs(a1 - a0) <= 1e-9 * std::max(1.0, a0))
                    return cand;
            } catch (const DomainError&) {
                continue;
            }
        }
    }
    throw NotApplicable("case2_move: no support direction admits a shortening slide at v" +
                        std::to_string(vi));
}

inline ConvexPolygon case2_move(const ConvexPolygon& p) {
    for (std::size_t i = 0; i < p.size(); ++i) {
        try {
            return case2_move(p, i);
        } catch (const NotApplicable&) {
            continue;
        }
    }
    throw NotApplicable("case2_move: no applicable vertex");
}

struct RegularPolygonStats {
    int k;
    double ratio;                 // L^2 / A(P,-P) = 4 k sin(pi/k)
    double dtr;                   // sandwich distance of the regular k-gon
    double dtr_analytic_lower;    // sqrt(2 cos(pi/5)) - 1, the k = 5 anchor
};

// Quantities showing regular odd k-gons are uniformly non-extremal: the
// perimeter-to-mixed-area ratio stays above the pentagon value 20 sin(pi/5)
// (which itself exceeds 1.1 * 6 sqrt(3)), and the sandwich distance stays
// above 1/4.
inline RegularPolygonStats regular_polygon_stats(int k) {
    if (k < 5 || k % 2 == 0)
        throw DomainError("regular_polygon_stats: k must be odd and at least 5");
    const double pi = deformation_detail::kPi;
    std::vector<Vec2> pts;
    const double r = 1.0 / (2.0 * k * std::sin(pi / k));  // perimeter 1
    for (int i = 0; i < k; ++i)
        pts.push_back({r * std::cos(2.0 * pi * i / k), r * std::sin(2.0 * pi * i / k)});
    const ConvexPolygon p(std::move(pts));
    const double l = perimeter(p);
    RegularPolygonStats out{k, l * l / mixed_area_minkowski(p, reflect(p)),
                            triangle_distance(p).rho,
                            std::sqrt(2.0 * std::cos(pi / 5.0)) - 1.0};
    if (out.ratio < 20.0 * std::sin(pi / 5.0) - 1e-9)
        throw InvariantViolation("regular_polygon_stats: ratio fell below the pentagon value");
    if (out.dtr < 0.25)
        throw InvariantViolation("regular_polygon_stats: sandwich distance fell below 1/4");
    return out;
}

}  // namespace bwstab
