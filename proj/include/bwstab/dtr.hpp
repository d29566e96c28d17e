// Distance from a convex polygon to the nearest regular triangle in the
// sandwich sense: the smallest rho >= 0 admitting a regular triangle T with
// centroid z such that T - z and (K - z)/(1+rho) nest around K - z, i.e.
//
//     T - z  subset  K - z  subset  (1+rho)(T - z).
//
// For a fixed triangle rotation theta the remaining parameters (center z,
// inner size s, outer size w) satisfy only linear support inequalities, and
// minimizing rho = w/s - 1 is a linear-fractional program; dividing through
// by s (sigma = 1/s, d = z/s, tau = w/s) turns it into a plain linear
// program in four variables, solved by Seidel's incremental method, which is
// immune to the pivot degeneracies a simplex hits on near-parallel edge
// constraints.  The rotation is then
// optimized by a 64-sample grid over one symmetry period [0, 2*pi/3)
// followed by golden-section refinement around each grid-local minimum.
//
// The result is approximate, not certified: the rotation scan can in
// principle miss a narrow global minimum, so |rho - d_tr(P)| <= tol holds
// under convergence of that scan.  The returned witness triangle is
// validated directly against both containments, which certifies rho as an
// upper bound for d_tr(P).

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bwstab/errors.hpp"
#include "bwstab/polygon.hpp"

namespace bwstab {

namespace dtr_detail {

// Linear constraint a.x <= b over at most four variables.
struct HalfSpace {
    std::array<double, 4> a{};
    double b = 0.0;
};

struct LowDimLpResult {
    bool feasible = false;
    std::array<double, 4> x{};
};

namespace low_dim_lp {

// splitmix64; portable deterministic stream for the constraint shuffle.
inline std::uint64_t next_rand(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace low_dim_lp

// Minimize c.x over the given half-spaces intersected with the coordinate box
// |x_i| <= box.  Seidel's incremental method: maintain the optimum of the
// constraints seen so far; when the next one is violated the optimum of the
// enlarged set lies on its boundary hyperplane, so recurse one dimension down
// inside that hyperplane (orthonormal Householder parametrization).  A single
// pass per level, no pivoting, no tableaux: ties and duplicate rows are
// harmless, which is exactly what the sandwich constraints need.
inline LowDimLpResult solve_low_dim_lp(int dim, const std::vector<HalfSpace>& rows,
                                       const std::array<double, 4>& c, double box) {
    constexpr double kTol = 1e-11;
    LowDimLpResult out;
    if (dim == 1) {
        double lo = -box, hi = box;
        for (const auto& r : rows) {
            if (r.a[0] > kTol)
                hi = std::min(hi, r.b / r.a[0]);
            else if (r.a[0] < -kTol)
                lo = std::max(lo, r.b / r.a[0]);
            else if (r.b < -kTol)
                return out;
        }
        if (lo > hi + kTol * (1.0 + std::abs(lo) + std::abs(hi))) return out;
        out.feasible = true;
        if (lo > hi)
            out.x[0] = 0.5 * (lo + hi);  // interval collapsed within tolerance
        else
            out.x[0] = (c[0] > 0.0) ? lo : (c[0] < 0.0 ? hi : std::clamp(0.0, lo, hi));
        return out;
    }

    // Optimum of the box alone seeds the pass.
    for (int i = 0; i < dim; ++i) out.x[i] = (c[i] > 0.0) ? -box : (c[i] < 0.0 ? box : 0.0);
    out.feasible = true;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& row = rows[k];
        double ax = 0.0;
        for (int i = 0; i < dim; ++i) ax += row.a[i] * out.x[i];
        if (ax <= row.b + kTol * (1.0 + std::abs(row.b) + std::abs(ax))) continue;

        double len = 0.0;
        for (int i = 0; i < dim; ++i) len += row.a[i] * row.a[i];
        len = std::sqrt(len);
        if (len <= kTol) {
            if (row.b < -kTol) return LowDimLpResult{};  // 0 <= b fails: infeasible
            continue;
        }
        std::array<double, 4> ahat{};
        for (int i = 0; i < dim; ++i) ahat[i] = row.a[i] / len;
        const double bhat = row.b / len;

        // Householder reflector sending ahat to a signed unit axis; its other
        // columns are an orthonormal basis of the hyperplane's directions.
        int piv = 0;
        for (int i = 1; i < dim; ++i)
            if (std::abs(ahat[i]) > std::abs(ahat[piv])) piv = i;
        std::array<double, 4> v = ahat;
        v[piv] += (ahat[piv] >= 0.0) ? 1.0 : -1.0;
        double vv = 0.0;
        for (int i = 0; i < dim; ++i) vv += v[i] * v[i];
        std::array<std::array<double, 4>, 4> basis{};
        int nb = 0;
        for (int col = 0; col < dim; ++col) {
            if (col == piv) continue;
            for (int i = 0; i < dim; ++i)
                basis[nb][i] = ((i == col) ? 1.0 : 0.0) - 2.0 * v[i] * v[col] / vv;
            ++nb;
        }
        std::array<double, 4> p{};  // foot of the hyperplane: x = p + basis.u
        for (int i = 0; i < dim; ++i) p[i] = ahat[i] * bhat;

        std::vector<HalfSpace> sub;
        sub.reserve(k);
        for (std::size_t j = 0; j < k; ++j) {
            HalfSpace hs;
            double shift = 0.0;
            for (int i = 0; i < dim; ++i) shift += rows[j].a[i] * p[i];
            hs.b = rows[j].b - shift;
            for (int tcol = 0; tcol < nb; ++tcol) {
                double d = 0.0;
                for (int i = 0; i < dim; ++i) d += rows[j].a[i] * basis[tcol][i];
                hs.a[tcol] = d;
            }
            sub.push_back(hs);
        }
        std::array<double, 4> csub{};
        for (int tcol = 0; tcol < nb; ++tcol) {
            double d = 0.0;
            for (int i = 0; i < dim; ++i) d += c[i] * basis[tcol][i];
            csub[tcol] = d;
        }
        const auto s = solve_low_dim_lp(dim - 1, sub, csub, 4.0 * box);
        if (!s.feasible) return LowDimLpResult{};
        for (int i = 0; i < dim; ++i) {
            double xi = p[i];
            for (int tcol = 0; tcol < nb; ++tcol) xi += basis[tcol][i] * s.x[tcol];
            out.x[i] = xi;
        }
    }
    return out;
}

struct InnerFit {
    double rho;
    Vec2 center;
    double size;  // circumradius of the inner triangle
};

// Reference regular triangle of circumradius 1 at rotation theta: vertex i
// at angle theta + pi/2 + 2*pi*i/3, outward edge normals -r_i, apothem 1/2.
inline std::array<Vec2, 3> triangle_vertices(double theta) {
    std::array<Vec2, 3> r;
    for (int i = 0; i < 3; ++i) {
        const double a = theta + 1.5707963267948966 + 2.0943951023931953 * i;
        r[i] = {std::cos(a), std::sin(a)};
    }
    return r;
}

// Best sandwich at a fixed rotation.  Variables after dividing by the inner
// size s: x = (sigma, d1, d2, tau) with sigma = 1/s, d = z/s, tau = 1+rho.
// Any point satisfying the inner constraints automatically has sigma > 0
// (summing the three rows of one edge gives <n,d> <= h*sigma, and a point
// beyond every edge of a bounded polygon cannot exist), so all four
// variables stay free and no sign splitting is needed.
inline std::optional<InnerFit> fit_at_rotation(const ConvexPolygon& k, double theta) {
    const auto r = triangle_vertices(theta);
    const auto fan = edge_fan(k);

    // Normalize the frame so every constraint coefficient is O(1).
    Vec2 t{0.0, 0.0};
    for (const auto& v : k.vertices()) t = t + v;
    t = t * (1.0 / static_cast<double>(k.vertices().size()));
    double lambda = 0.0;
    for (const auto& v : k.vertices())
        lambda = std::max({lambda, std::abs(v.x - t.x), std::abs(v.y - t.y)});
    if (!(lambda > 0.0)) return std::nullopt;

    constexpr double kBox = 1e5;
    std::vector<HalfSpace> rows;
    for (int i = 0; i < 4; ++i) {
        HalfSpace hi, lo;
        hi.a[static_cast<std::size_t>(i)] = 1.0;
        hi.b = kBox;
        lo.a[static_cast<std::size_t>(i)] = -1.0;
        lo.b = kBox;
        rows.push_back(hi);
        rows.push_back(lo);
    }
    // Outer containment: h_K(m)*sigma - <m,d> <= tau/2 for each normal m = -r_i.
    for (int i = 0; i < 3; ++i) {
        const Vec2 m = -r[static_cast<std::size_t>(i)];
        HalfSpace hs;
        hs.a = {(support(k, m) - dot(m, t)) / lambda, -m.x, -m.y, -0.5};
        hs.b = 0.0;
        rows.push_back(hs);
    }
    // Inner containment: every triangle vertex in every halfplane of K,
    // <u, d + r_i> <= h_K(u)*sigma.
    for (const auto& e : fan) {
        const double h = dot(e.normal, e.a - t) / lambda;
        for (int i = 0; i < 3; ++i) {
            HalfSpace hs;
            hs.a = {-h, e.normal.x, e.normal.y, 0.0};
            hs.b = -dot(e.normal, r[static_cast<std::size_t>(i)]);
            rows.push_back(hs);
        }
    }
    // Deterministic shuffle: Seidel's expected-linear bound needs a random
    // insertion order, and a fixed stream keeps reports reproducible.
    std::uint64_t state = 0x243f6a8885a308d3ULL ^ rows.size();
    for (std::size_t i = rows.size(); i > 1; --i)
        std::swap(rows[i - 1], rows[low_dim_lp::next_rand(state) % i]);

    const auto sol = solve_low_dim_lp(4, rows, {0.0, 0.0, 0.0, 1.0}, kBox);
    if (!sol.feasible) return std::nullopt;
    for (int i = 0; i < 4; ++i)
        if (std::abs(sol.x[static_cast<std::size_t>(i)]) > 0.9 * kBox) return std::nullopt;
    for (const auto& row : rows) {
        double ax = 0.0;
        for (int i = 0; i < 4; ++i)
            ax += row.a[static_cast<std::size_t>(i)] * sol.x[static_cast<std::size_t>(i)];
        if (ax > row.b + 1e-7 * (1.0 + std::abs(row.b))) return std::nullopt;
    }
    const double sigma = sol.x[0];
    if (sigma <= 1e-9) return std::nullopt;
    const Vec2 z = t + Vec2{sol.x[1] / sigma, sol.x[2] / sigma} * lambda;

    // The LP fixes the center; the sizes are then re-derived from exact
    // support values so the witness satisfies both containments by
    // construction even when the LP basis was degenerate.
    double s = std::numeric_limits<double>::infinity();
    for (const auto& e : fan) {
        const double room = dot(e.normal, e.a) - dot(e.normal, z);
        for (int i = 0; i < 3; ++i) {
            const double g = dot(e.normal, r[i]);
            if (g > 1e-12) s = std::min(s, room / g);
        }
    }
    if (!(s > 1e-12)) return std::nullopt;  // center escaped the polygon
    double w = 0.0;
    for (int i = 0; i < 3; ++i) w = std::max(w, 2.0 * (support(k, -r[i]) + dot(r[i], z)));
    return InnerFit{std::max(0.0, w / s - 1.0), z, s};
}

}  // namespace dtr_detail

struct TriangleFit {
    double rho = 0.0;
    ConvexPolygon triangle;  // inner witness triangle, counterclockwise
    double theta = 0.0;      // its rotation parameter
};

// Smallest rho (up to tol, under convergence of the rotation scan) such that
// some regular triangle T with centroid z satisfies
// T - z subset P - z subset (1+rho)(T - z), together with the witness T.
inline TriangleFit triangle_distance(const ConvexPolygon& p, double tol = 1e-9) {
    if (!(tol > 0.0)) throw DomainError("triangle_distance: tol must be positive");
    constexpr double kPeriod = 2.0943951023931953;  // 2*pi/3
    constexpr int kGrid = 64;

    double best_rho = std::numeric_limits<double>::infinity();
    double best_theta = 0.0;
    auto eval = [&](double th) {
        const auto fit = dtr_detail::fit_at_rotation(p, th);
        if (fit && fit->rho < best_rho) {
            best_rho = fit->rho;
            best_theta = th;
        }
        return fit ? fit->rho : std::numeric_limits<double>::infinity();
    };
    std::array<double, kGrid> grid{};
    for (int i = 0; i < kGrid; ++i) grid[i] = eval(kPeriod * i / kGrid);
    if (!std::isfinite(best_rho))
        throw ApproximationError("triangle_distance: no rotation admitted a sandwich",
                                 std::numeric_limits<double>::quiet_NaN());

    // Golden-section refinement around every local minimum of the periodic
    // grid; refining only the globally best sample can land in the wrong dip
    // when several rotations compete within one grid step.
    const double phi = 0.6180339887498949;
    auto refine = [&](double center) {
        double lo = center - kPeriod / kGrid;
        double hi = center + kPeriod / kGrid;
        double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
        double f1 = eval(x1), f2 = eval(x2);
        for (int iter = 0; hi - lo > std::max(1e-12, 1e-3 * tol); ++iter) {
            if (iter >= 200)
                throw ApproximationError("triangle_distance: rotation refinement did not converge",
                                         best_rho);
            if (f1 <= f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - phi * (hi - lo);
                f1 = eval(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + phi * (hi - lo);
                f2 = eval(x2);
            }
        }
    };
    bool refined = false;
    for (int i = 0; i < kGrid; ++i) {
        const double prev = grid[(i + kGrid - 1) % kGrid];
        const double next = grid[(i + 1) % kGrid];
        if (std::isfinite(grid[i]) && grid[i] <= prev && grid[i] <= next &&
            (grid[i] < prev || grid[i] < next)) {
            refine(kPeriod * i / kGrid);
            refined = true;
        }
    }
    // Flat profiles (every sample tied) have no strict dip to pick out.
    if (!refined) refine(best_theta);

    const auto fit = dtr_detail::fit_at_rotation(p, best_theta);
    if (!fit) throw ApproximationError("triangle_distance: best rotation lost", best_rho);

    // Materialize and validate the witness against both containments.
    const auto r = dtr_detail::triangle_vertices(best_theta);
    std::vector<Vec2> verts;
    for (const auto& v : r) verts.push_back(fit->center + v * fit->size);
    ConvexPolygon tri(verts);
    double scale = 1.0;
    for (const auto& v : p.vertices()) scale = std::max({scale, std::abs(v.x), std::abs(v.y)});
    for (const auto& e : edge_fan(p))
        for (const auto& v : tri.vertices())
            if (dot(e.normal, v - e.a) > 1e-9 * scale)
                throw InvariantViolation("triangle_distance: witness not inside the polygon");
    const double blow = (1.0 + fit->rho + tol) * fit->size * 0.5;
    for (const auto& v : r) {
        const Vec2 m = -v;
        if (support(p, m) - dot(m, fit->center) > blow + 1e-9 * scale)
            throw InvariantViolation("triangle_distance: blown-up witness does not cover");
    }
    return TriangleFit{fit->rho, std::move(tri), best_theta};
}

}  // namespace bwstab
