#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "bwstab/errors.hpp"

namespace bwstab {

struct Vec2 {
    double x = 0.0, y = 0.0;

    Vec2() = default;
    Vec2(double px, double py) : x(px), y(py) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }

    double norm() const { return std::hypot(x, y); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

// Rotate 90 degrees counterclockwise.
inline Vec2 perp(const Vec2& v) { return {-v.y, v.x}; }

// Counterclockwise convex polygon with strictly convex vertices.
//
// The constructor normalizes orientation (reversing a clockwise input),
// merges consecutive vertices that are numerically identical or collinear
// (cross product below 1e-12 * scale^2, where scale is the largest coordinate
// magnitude), and rejects anything that is not strictly convex afterwards.
// The tolerance-based merge keeps downstream edge fans free of zero-length
// and zero-turn edges, which the mixed-area formulas rely on.
class ConvexPolygon {
  public:
    explicit ConvexPolygon(std::vector<Vec2> pts) : v_(std::move(pts)) {
        if (v_.size() < 3) throw DomainError("polygon needs at least 3 vertices");

        double signed2 = 0.0;
        for (std::size_t i = 0; i < v_.size(); ++i)
            signed2 += cross(v_[i], v_[(i + 1) % v_.size()]);
        if (signed2 < 0.0) std::reverse(v_.begin(), v_.end());

        double scale = 1.0;
        for (const auto& p : v_) scale = std::max({scale, std::fabs(p.x), std::fabs(p.y)});
        const double tol = 1e-12 * scale * scale;

        // Drop degenerate vertices until the chain is strictly convex. A
        // genuinely reflex vertex (cross below -tol) is an input error, not a
        // degeneracy to be smoothed away.
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t i = 0; i < v_.size() && v_.size() > 3; ++i) {
                const Vec2& a = v_[(i + v_.size() - 1) % v_.size()];
                const Vec2& b = v_[i];
                const Vec2& c = v_[(i + 1) % v_.size()];
                const double cr = cross(b - a, c - b);
                if (cr < -tol) throw DomainError("polygon is not convex");
                if (cr <= tol) {
                    v_.erase(v_.begin() + static_cast<std::ptrdiff_t>(i));
                    changed = true;
                    break;
                }
            }
        }
        for (std::size_t i = 0; i < v_.size(); ++i) {
            const Vec2& a = v_[(i + v_.size() - 1) % v_.size()];
            const Vec2& b = v_[i];
            const Vec2& c = v_[(i + 1) % v_.size()];
            if (cross(b - a, c - b) <= tol)
                throw DomainError("polygon degenerates to fewer than 3 strict vertices");
        }
    }

    const std::vector<Vec2>& vertices() const { return v_; }
    std::size_t size() const { return v_.size(); }
    const Vec2& operator[](std::size_t i) const { return v_[i]; }

  private:
    std::vector<Vec2> v_;
};

// One edge of a polygon's fan: unit outward normal, side length, endpoints.
// For a counterclockwise polygon the outward normal of d = b - a is
// (d.y, -d.x) / |d|, and consecutive normals are in counterclockwise angular
// order.
struct Edge {
    Vec2 normal;
    double length = 0.0;
    Vec2 a, b;
};

inline std::vector<Edge> edge_fan(const ConvexPolygon& p) {
    std::vector<Edge> out;
    out.reserve(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Vec2& a = p[i];
        const Vec2& b = p[(i + 1) % p.size()];
        const Vec2 d = b - a;
        const double len = d.norm();
        out.push_back({Vec2(d.y, -d.x) * (1.0 / len), len, a, b});
    }
    return out;
}

inline double support(const ConvexPolygon& p, const Vec2& u) {
    if (u.x == 0.0 && u.y == 0.0) throw DomainError("support: zero direction");
    double best = dot(u, p[0]);
    for (std::size_t i = 1; i < p.size(); ++i) best = std::max(best, dot(u, p[i]));
    return best;
}

inline double area(const ConvexPolygon& p) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += cross(p[i], p[(i + 1) % p.size()]);
    return 0.5 * s;
}

inline double perimeter(const ConvexPolygon& p) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += (p[(i + 1) % p.size()] - p[i]).norm();
    return s;
}

inline ConvexPolygon translate(const ConvexPolygon& p, const Vec2& z) {
    std::vector<Vec2> pts;
    pts.reserve(p.size());
    for (const auto& v : p.vertices()) pts.push_back(v + z);
    return ConvexPolygon(std::move(pts));
}

// Point reflection through the origin. Central symmetry preserves
// orientation, so the reversed-sign vertices are renormalized to
// counterclockwise by the constructor.
inline ConvexPolygon reflect(const ConvexPolygon& p) {
    std::vector<Vec2> pts;
    pts.reserve(p.size());
    for (const auto& v : p.vertices()) pts.push_back(-v);
    return ConvexPolygon(std::move(pts));
}

// Convex hull (Andrew monotone chain, strict turns). Collinear and duplicate
// points are dropped; fewer than 3 extreme points is a DomainError.
inline ConvexPolygon convex_hull(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(),
              [](const Vec2& a, const Vec2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) throw DomainError("convex hull of fewer than 3 distinct points");
    std::vector<Vec2> h(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {  // lower chain
        while (k >= 2 && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0.0) --k;
        h[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, lo = k + 1; i-- > 0;) {  // upper chain
        while (k >= lo && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0.0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return ConvexPolygon(std::move(h));
}

namespace polygon_detail {

// Angular order of edge directions over [0, 2pi), starting at the positive x
// axis: first by half plane, then by cross product within the half.
inline bool angle_less(const Vec2& a, const Vec2& b) {
    const auto half = [](const Vec2& d) { return (d.y < 0.0 || (d.y == 0.0 && d.x < 0.0)) ? 1 : 0; };
    const int ha = half(a), hb = half(b);
    if (ha != hb) return ha < hb;
    return cross(a, b) > 0.0;
}

inline std::size_t lowest_vertex(const ConvexPolygon& p) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < p.size(); ++i)
        if (p[i].y < p[best].y || (p[i].y == p[best].y && p[i].x < p[best].x)) best = i;
    return best;
}

}  // namespace polygon_detail

// Minkowski sum by merging the two edge fans in angular order. Starting both
// walks at the lowest vertex makes each direction sequence monotone over
// [0, 2pi), so a single merge pass produces the sum's counterclockwise edge
// sequence; parallel edges combine into one.
inline ConvexPolygon minkowski_sum(const ConvexPolygon& p, const ConvexPolygon& q) {
    using polygon_detail::angle_less;
    const std::size_t np = p.size(), nq = q.size();
    const std::size_t ip0 = polygon_detail::lowest_vertex(p);
    const std::size_t iq0 = polygon_detail::lowest_vertex(q);

    std::vector<Vec2> pts;
    pts.reserve(np + nq);
    Vec2 cur = p[ip0] + q[iq0];
    std::size_t i = 0, j = 0;
    while (i < np || j < nq) {
        pts.push_back(cur);
        const Vec2 dp = i < np ? p[(ip0 + i + 1) % np] - p[(ip0 + i) % np] : Vec2();
        const Vec2 dq = j < nq ? q[(iq0 + j + 1) % nq] - q[(iq0 + j) % nq] : Vec2();
        if (j == nq || (i < np && angle_less(dp, dq))) {
            cur = cur + dp;
            ++i;
        } else if (i == np || angle_less(dq, dp)) {
            cur = cur + dq;
            ++j;
        } else {  // parallel edges: one combined step
            cur = cur + dp + dq;
            ++i;
            ++j;
        }
    }
    return ConvexPolygon(std::move(pts));
}

}  // namespace bwstab
