// Shared helpers for the geometry test suites: random convex polygons,
// regular polygons, and the bumped-triangle hexagon used as a near-extremal
// example throughout.

#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "bwstab/polygon.hpp"

namespace bwstab_test {

inline constexpr double kPi = 3.14159265358979323846;

// Convex hull of n uniform points in [-10,10]^2, resampled until nondegenerate.
inline bwstab::ConvexPolygon random_polygon(std::mt19937_64& rng, int max_pts = 12) {
    std::uniform_real_distribution<double> coord(-10.0, 10.0);
    std::uniform_int_distribution<int> npts(3, max_pts);
    for (;;) {
        std::vector<bwstab::Vec2> pts;
        const int n = npts(rng);
        for (int i = 0; i < n; ++i) pts.push_back({coord(rng), coord(rng)});
        try {
            return bwstab::convex_hull(pts);
        } catch (const bwstab::DomainError&) {
            continue;  // all collinear; resample
        }
    }
}

inline bwstab::ConvexPolygon regular_polygon(int k, double circumradius, double phase = 0.0) {
    std::vector<bwstab::Vec2> pts;
    for (int i = 0; i < k; ++i) {
        const double th = phase + 2.0 * kPi * i / k;
        pts.push_back({circumradius * std::cos(th), circumradius * std::sin(th)});
    }
    return bwstab::ConvexPolygon(pts);
}

// Regular k-gon scaled to perimeter 1.
inline bwstab::ConvexPolygon regular_unit_perimeter(int k) {
    const double side = 2.0 * std::sin(kPi / k);  // at circumradius 1
    return regular_polygon(k, 1.0 / (k * side));
}

// Regular triangle of edge 2 (centroid at the origin) with an isosceles bump
// of height sqrt(eps) added on each edge: a hexagon with perimeter
// 6*sqrt(1+eps), unchanged mixed area A(H,-H) = 2*sqrt(3), and hence
// perimeter deficit exactly 36*eps.
inline bwstab::ConvexPolygon bump_hexagon(double eps) {
    const double circum = 2.0 / std::sqrt(3.0);   // triangle vertices
    const double apothem = 1.0 / std::sqrt(3.0);  // edge midpoints
    const double h = std::sqrt(eps);
    std::vector<bwstab::Vec2> pts;
    for (int i = 0; i < 3; ++i) {
        const double av = kPi / 2.0 + 2.0 * kPi * i / 3.0;   // vertex angle
        const double am = av + kPi / 3.0;                    // next midpoint angle
        pts.push_back({circum * std::cos(av), circum * std::sin(av)});
        pts.push_back({(apothem + h) * std::cos(am), (apothem + h) * std::sin(am)});
    }
    return bwstab::ConvexPolygon(pts);
}

}  // namespace bwstab_test
