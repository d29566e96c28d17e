#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "bwstab/box.hpp"
#include "bwstab/errors.hpp"
#include "bwstab/interval.hpp"
#include "bwstab/interval_matrix.hpp"
#include "bwstab/jet.hpp"

// The hexagon stability function
//
//   f2 = (2 + a2 + a3)(-2 + a2 + a3)(2 - a2 + a3)(2 + a2 - a3)
//   f1 = (2 + a2 + a3)^2 + f2 * (t1/2 + t2/a2 + t3/a3)^2
//   f  = f1 - 3 sqrt(3) sqrt(f2) (1 + t1 t2 + t2 t3 + t3 t1)
//
// in the variables x = (a2, a3, t1, t2, t3) with the first triangle side
// frozen at a1 = 2 (f2 is 16 A(T)^2 by Heron's formula). f >= ||x - z_t||^2
// on the parameter box W, which pins down the hexagon chain inequality; this
// header evaluates f generically (double / Interval / Jet), applies the
// orthonormal change of basis S that diagonalizes the anchor Hessian, and
// provides the two certificate forms whose nonnegativity the adaptive
// verifier establishes over the transformed box.

namespace bwstab {

struct LemmaPoint {
    double a2 = 2.0, a3 = 2.0, t1 = 0.0, t2 = 0.0, t3 = 0.0;

    std::array<double, 5> as_array() const { return {a2, a3, t1, t2, t3}; }

    // membership in the parameter box W = [2, 2+1/6]^2 x [0, 1/6]^3
    bool in_domain() const {
        auto in = [](double v, double lo, double hi) { return lo <= v && v <= hi; };
        return in(a2, 2.0, 2.0 + 1.0 / 6.0) && in(a3, 2.0, 2.0 + 1.0 / 6.0) &&
               in(t1, 0.0, 1.0 / 6.0) && in(t2, 0.0, 1.0 / 6.0) && in(t3, 0.0, 1.0 / 6.0);
    }
};

// the equality line z_t = (2, 2, t, t, t)
inline std::array<double, 5> critical_point(double t) { return {2.0, 2.0, t, t, t}; }

namespace lemma_detail {

// Typed constants: dy() takes only exactly representable dyadic values;
// rationals and square roots of rationals are enclosed when T is
// interval-valued.
template <class T>
struct Scal;

template <>
struct Scal<double> {
    static double dy(double v) { return v; }
    static double rat(long long p, long long q) { return static_cast<double>(p) / static_cast<double>(q); }
    static double sqrt_rat(long long p, long long q) { return std::sqrt(rat(p, q)); }
};

template <>
struct Scal<Interval> {
    static Interval dy(double v) { return Interval(v); }
    static Interval rat(long long p, long long q) { return bwstab::rational(p, q); }
    static Interval sqrt_rat(long long p, long long q) { return bwstab::sqrt(rat(p, q)); }
};

template <class U>
struct Scal<Jet<U>> {
    static Jet<U> dy(double v) { return Jet<U>::constant(Scal<U>::dy(v)); }
    static Jet<U> rat(long long p, long long q) { return Jet<U>::constant(Scal<U>::rat(p, q)); }
    static Jet<U> sqrt_rat(long long p, long long q) {
        return Jet<U>::constant(Scal<U>::sqrt_rat(p, q));
    }
};

inline bool strictly_positive(double v) { return v > 0.0; }
inline bool strictly_positive(const Interval& v) { return v.strictly_positive(); }
template <class U>
bool strictly_positive(const Jet<U>& v) {
    return strictly_positive(v.c[0]);
}

}  // namespace lemma_detail

// f in the hexagon parameters x = (a2, a3, t1, t2, t3).
template <class T>
T eval_f(const std::array<T, 5>& x) {
    using S = lemma_detail::Scal<T>;
    const T& a2 = x[0];
    const T& a3 = x[1];
    const T& t1 = x[2];
    const T& t2 = x[3];
    const T& t3 = x[4];
    T two = S::dy(2.0);

    T f2 = (two + a2 + a3) * (a2 + a3 - two) * ((two - a2) + a3) * ((two + a2) - a3);
    if (!lemma_detail::strictly_positive(f2))
        throw DomainError("stability function: degenerate triangle (f2 not strictly positive)");

    T ratio = t1 / two + t2 / a2 + t3 / a3;
    T f1 = sq(two + a2 + a3) + f2 * sq(ratio);
    T cross = S::dy(1.0) + t1 * t2 + t2 * t3 + t3 * t1;
    using std::sqrt;  // unqualified call resolves double/Interval/Jet alike
    return f1 - S::sqrt_rat(27, 1) * sqrt(f2) * cross;  // 3 sqrt(3) = sqrt(27)
}

inline double eval_f(const LemmaPoint& p) { return eval_f<double>(p.as_array()); }

inline Interval eval_f(const Box& xbox) {
    if (xbox.size() != 5) throw DomainError("eval_f expects a 5-dimensional box");
    std::array<Interval, 5> x;
    for (int i = 0; i < 5; ++i) x[i] = xbox[i];
    return eval_f<Interval>(x);
}

// x = S y for the orthonormal basis
//   e1 = (1,0,0,0,0),  e2 = (0,1,0,0,0),
//   e3 = (0,0, 1/sqrt2, -1/sqrt2, 0),
//   e4 = (0,0, 1/sqrt6,  1/sqrt6, -2/sqrt6),
//   e5 = (0,0, 1/sqrt3,  1/sqrt3,  1/sqrt3).
template <class T>
std::array<T, 5> apply_basis(const std::array<T, 5>& y) {
    using S = lemma_detail::Scal<T>;
    T r12 = S::sqrt_rat(1, 2), r16 = S::sqrt_rat(1, 6), r13 = S::sqrt_rat(1, 3),
      r23 = S::sqrt_rat(2, 3);  // 2/sqrt6 = sqrt(2/3)
    std::array<T, 5> x;
    x[0] = y[0];
    x[1] = y[1];
    x[2] = r12 * y[2] + r16 * y[3] + r13 * y[4];
    x[3] = r16 * y[3] + r13 * y[4] - r12 * y[2];
    x[4] = r13 * y[4] - r23 * y[3];
    return x;
}

template <class T>
T eval_ftilde(const std::array<T, 5>& y) {
    return eval_f<T>(apply_basis<T>(y));
}

// The transformed domain: S^T(W) is contained in
// W~ = [2, 2+1/6]^2 x [-0.14, 0.14]^2 x [0, 0.3]; endpoints rounded outward
// so the returned box is a true superset.
inline Box lemma_domain_transformed() {
    Interval sixth = rational(1, 6);
    Interval w14 = rational(14, 100);
    Interval w30 = rational(3, 10);
    Interval a(2.0, (Interval(2.0) + sixth).hi);
    Interval b(-w14.hi, w14.hi);
    return Box({a, a, b, b, Interval(0.0, w30.hi)});
}

// The original parameter box W = [2, 2+1/6]^2 x [0, 1/6]^3, rounded outward.
inline Box lemma_domain() {
    Interval sixth = rational(1, 6);
    Interval a(2.0, (Interval(2.0) + sixth).hi);
    Interval t(0.0, sixth.hi);
    return Box({a, a, t, t, t});
}

// degree-6 jet of f~ = f o S over a 5-dimensional y-box
inline Jet<Interval> eval_ftilde_jet(const Box& ybox) {
    if (ybox.size() != 5) throw DomainError("eval_ftilde_jet expects a 5-dimensional box");
    std::array<Jet<Interval>, 5> y;
    for (int i = 0; i < 5; ++i) y[i] = Jet<Interval>::variable(i, ybox[i]);
    return eval_ftilde<Jet<Interval>>(y);
}

inline Jet<Interval> eval_ftilde_jet_at(const std::array<double, 5>& y0) {
    std::array<Jet<Interval>, 5> y;
    for (int i = 0; i < 5; ++i) y[i] = Jet<Interval>::variable(i, Interval(y0[i]));
    return eval_ftilde<Jet<Interval>>(y);
}

using Mat4 = std::array<std::array<Interval, 4>, 4>;

// 4x4 principal minor of D^2 f~ enclosed over ybox. Enhanced mode expands
// around the midpoint (see hessian_enclosure); plain mode reads the degree-2
// coefficients of the box jet directly.
inline Mat4 hessian_minor(const Box& ybox, bool enhanced = true);

// The enclosure together with the (near-)point Hessian at the box midpoint,
// read off the same midpoint jet the enhanced enclosure is built from. The
// point matrix carries no enclosure claim over ybox; adaptive refinement
// consults it to judge whether a certificate failure stems from matrix width
// (fixable by splitting ybox) or from the v box itself.
struct MinorPair {
    Mat4 box;
    Mat4 mid;
};

inline MinorPair hessian_minor_pair(const Box& ybox, bool enhanced = true) {
    if (ybox.size() != 5) throw DomainError("hessian_minor_pair expects a 5-dimensional box");
    auto m = ybox.midpoint();
    std::array<double, 5> mid;
    for (int i = 0; i < 5; ++i) mid[i] = m[i];
    Jet<Interval> mj = eval_ftilde_jet_at(mid);

    MinorPair out;
    Mat5 hm = jet_hessian(mj);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out.mid[i][j] = hm[i][j];

    Jet<Interval> bj = eval_ftilde_jet(ybox);
    Mat5 hb = enhanced ? hessian_enclosure(mj, bj, ybox, mid) : jet_hessian(bj);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out.box[i][j] = hb[i][j];
    return out;
}

inline Mat4 hessian_minor(const Box& ybox, bool enhanced) {
    return hessian_minor_pair(ybox, enhanced).box;
}

enum class IneqForm { Quadratic, Norm };

namespace lemma_detail {

// Enclosure of a*x intersected with its midpoint form a*mid(x) + mag(a)*[-r, r].
// The two enclose the same set, so the intersection is sound and nonempty; the
// midpoint form wins when x straddles its center and a is wide.
inline Interval coupled_linear(const Interval& a, const Interval& x) {
    const double mx = x.mid();
    const double rx = (x - Interval(mx)).mag();
    const Interval d = Interval(a.mag()) * Interval(rx);
    return intersect(a * x, a * Interval(mx) + Interval(-d.hi, d.hi));
}

// Termwise enclosure of v^T A v: exact diagonal ranges through sq(), cross
// terms tightened by intersecting the plain product with its midpoint form
// a*mx*my + mag(a)*[-d, d], d = |mx|*ry + |my|*rx + rx*ry. Tightest when the
// coordinates are centered (sq() keeps the diagonal nonnegative there).
inline Interval quadratic_form_termwise(const std::array<std::array<Interval, 4>, 4>& a,
                                        const std::array<Interval, 4>& v) {
    Interval acc(0.0);
    for (int i = 0; i < 4; ++i) acc = acc + a[i][i] * sq(v[i]);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            const Interval &x = v[i], &y = v[j];
            const double mx = x.mid(), my = y.mid();
            const double rx = (x - Interval(mx)).mag(), ry = (y - Interval(my)).mag();
            const Interval dev = Interval(std::fabs(mx)) * Interval(ry) +
                                 Interval(std::fabs(my)) * Interval(rx) +
                                 Interval(rx) * Interval(ry);
            const Interval d = Interval(a[i][j].mag()) * dev;
            const Interval prod =
                intersect(a[i][j] * x * y,
                          a[i][j] * (Interval(mx) * Interval(my)) + Interval(-d.hi, d.hi));
            acc = acc + Interval(2.0) * prod;
        }
    return acc;
}

// Enclosure of v^T A v for a symmetric interval matrix A over an interval
// vector v, expanded around the midpoint c of v: with v = c + s,
//
//   v^T A v = c^T A c + <2 A c, s> + s^T A s,    s_k in v_k - c_k.
//
// The base and gradient involve only point products with c, so the dependency
// loss of evaluating the form term by term (each occurrence of v_k minimized
// independently) is confined to the remainder, which is quadratic in the
// radii. Diagonal remainder terms go through sq() to keep their sign.
inline Interval quadratic_form_enclosure(const std::array<std::array<Interval, 4>, 4>& a,
                                         const std::array<Interval, 4>& v) {
    std::array<Interval, 4> c, s;
    for (int i = 0; i < 4; ++i) {
        c[i] = Interval(v[i].mid());
        s[i] = v[i] - c[i];
    }
    Interval acc(0.0);
    for (int i = 0; i < 4; ++i) acc = acc + a[i][i] * sq(c[i]);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) acc = acc + Interval(2.0) * a[i][j] * (c[i] * c[j]);
    for (int k = 0; k < 4; ++k) {
        Interval g(0.0);
        for (int j = 0; j < 4; ++j) g = g + a[k][j] * c[j];
        acc = acc + Interval(2.0) * g * s[k];
    }
    for (int i = 0; i < 4; ++i) acc = acc + a[i][i] * sq(s[i]);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) acc = acc + Interval(2.0) * a[i][j] * s[i] * s[j];
    return acc;
}

// Interval Cholesky positive-definiteness certificate. If the factorization
// of the symmetric interval matrix A runs to completion with every pivot
// interval strictly positive, then every symmetric point matrix A* contained
// in A is positive definite: the exact factorization of A* proceeds with all
// quantities inside the computed intervals, so its pivots are positive too.
// Failure proves nothing (the enclosure may just be too wide).
inline bool cholesky_psd(const std::array<std::array<Interval, 4>, 4>& a) {
    std::array<std::array<Interval, 4>, 4> l{};
    for (int k = 0; k < 4; ++k) {
        Interval d = a[k][k];
        for (int p = 0; p < k; ++p) d = d - sq(l[k][p]);
        if (!d.strictly_positive()) return false;
        l[k][k] = sqrt(d);
        for (int i = k + 1; i < 4; ++i) {
            Interval s = a[i][k];
            for (int p = 0; p < k; ++p) s = s - l[i][p] * l[k][p];
            l[i][k] = s / l[k][k];
        }
    }
    return true;
}

}  // namespace lemma_detail

// Interval enclosure of the chosen certificate over one face of Xi:
// v_face = 1, the other three coordinates range over vfree (ascending index).
//
//   Quadratic:  <v, H v> - 2 ||v||^2          (>= 0 iff H >= 2 I on the face)
//   Norm:       ||H v||^2 - 4 ||v||^2         (>= 0 iff ||H v|| >= 2 ||v||)
//
// Both reduce to a quadratic form v^T A v (A = H - 2I, respectively
// A = H^2 - 4I) and go through the midpoint expansion above. The norm form is
// additionally intersected with the direct row evaluation sum sq(H v)_i,
// which carries only one factor of the matrix radius and wins while H is
// wide.
//
// Independently of the v box, a successful interval Cholesky factorization of
// H - 2I proves H* >= 2I for every symmetric H* in H. That certifies the
// quadratic form for all of R^4 at once, and the norm form too: a symmetric
// matrix with H* >= 2I has all eigenvalues >= 2, hence (H*)^2 >= 4I and
// ||H* v||^2 = <v, (H*)^2 v> >= 4 ||v||^2. When the factorization succeeds
// the certificate's true range over the subset is nonnegative, so the lower
// bound is clamped up to zero.
//
// Every path is a plain enclosure, so lo >= 0 certifies the inequality on the
// subset and hi < 0 refutes it there.
inline Interval certificate_value(const Mat4& h, int face, const std::array<Interval, 3>& vfree,
                                  IneqForm form) {
    if (face < 0 || face > 3) throw InvariantViolation("certificate face index out of range");
    std::array<Interval, 4> v;
    int k = 0;
    for (int i = 0; i < 4; ++i) v[i] = (i == face) ? Interval(1.0) : vfree[k++];

    Mat4 a = h;
    for (int i = 0; i < 4; ++i) a[i][i] = a[i][i] - Interval(2.0);
    const bool psd = lemma_detail::cholesky_psd(a);

    if (form == IneqForm::Quadratic) {
        Interval acc = intersect(lemma_detail::quadratic_form_termwise(a, v),
                                 lemma_detail::quadratic_form_enclosure(a, v));
        if (psd && acc.lo < 0.0) acc.lo = 0.0;
        return acc;
    }

    Interval rows(0.0);
    for (int i = 0; i < 4; ++i) {
        Interval row(0.0);
        for (int j = 0; j < 4; ++j) row = row + lemma_detail::coupled_linear(h[i][j], v[j]);
        rows = rows + sq(row);
    }
    for (int j = 0; j < 4; ++j) rows = rows - Interval(4.0) * sq(v[j]);

    // H is symmetric, so H^2 = H^T H; the diagonal collapses to sums of
    // squares, which keeps it nonnegative even while H is wide.
    Mat4 m;
    for (int i = 0; i < 4; ++i) {
        for (int j = i; j < 4; ++j) {
            Interval acc(0.0);
            if (i == j)
                for (int t = 0; t < 4; ++t) acc = acc + sq(h[t][i]);
            else
                for (int t = 0; t < 4; ++t) acc = acc + h[t][i] * h[t][j];
            m[i][j] = acc;
            m[j][i] = acc;
        }
        m[i][i] = m[i][i] - Interval(4.0);
    }
    Interval acc = intersect(rows, intersect(lemma_detail::quadratic_form_termwise(m, v),
                                             lemma_detail::quadratic_form_enclosure(m, v)));
    if (psd && acc.lo < 0.0) acc.lo = 0.0;
    return acc;
}


inline bool certify_quadratic(const Mat4& h, int face, const std::array<Interval, 3>& vfree) {
    return certificate_value(h, face, vfree, IneqForm::Quadratic).lo >= 0.0;
}

inline bool certify_norm(const Mat4& h, int face, const std::array<Interval, 3>& vfree) {
    return certificate_value(h, face, vfree, IneqForm::Norm).lo >= 0.0;
}

// D^2 f at the anchor x0 = (2,2,0,0,0), enclosed by a point jet in the
// original variables. Equals the integer matrix
//   [ 12 -6  0   0   0 ]
//   [ -6 12  0   0   0 ]
//   [  0  0 24 -12 -12 ]
//   [  0  0 -12 24 -12 ]
//   [  0  0 -12 -12 24 ]
// with eigenvalues {0, 6, 18, 36, 36}.
inline Mat5 hessian_anchor() {
    std::array<Jet<Interval>, 5> x;
    auto x0 = critical_point(0.0);
    for (int i = 0; i < 5; ++i) x[i] = Jet<Interval>::variable(i, Interval(x0[i]));
    return jet_hessian(eval_f<Jet<Interval>>(x));
}

struct GradientSpotCheck {
    double max_abs_f = 0.0;        // max |f(z_t)| over the probed t
    double max_fd_grad_norm = 0.0; // max central-difference gradient norm
    bool ad_gradient_encloses_zero = true;
};

// f and Df vanish along z_t. Probes t in {0, 1/24, 1/12, 1/8, 1/6} with
// float central differences (step 1e-5) and with point-interval jets whose
// gradient coefficients must enclose 0.
inline GradientSpotCheck spot_check_gradient() {
    GradientSpotCheck r;
    const double ts[5] = {0.0, 1.0 / 24.0, 1.0 / 12.0, 1.0 / 8.0, 1.0 / 6.0};
    const double h = 1e-5;
    for (double t : ts) {
        auto z = critical_point(t);
        r.max_abs_f = std::max(r.max_abs_f, std::fabs(eval_f<double>(z)));
        double norm2 = 0.0;
        for (int i = 0; i < 5; ++i) {
            auto zp = z, zm = z;
            zp[i] += h;
            zm[i] -= h;
            double g = (eval_f<double>(zp) - eval_f<double>(zm)) / (2.0 * h);
            norm2 += g * g;
        }
        r.max_fd_grad_norm = std::max(r.max_fd_grad_norm, std::sqrt(norm2));

        // exact rational t where needed: t in {0, 1/24, 1/12, 1/8, 1/6} are
        // all p/24, so enclose via rational(p, 24)
        long long p = std::llround(t * 24.0);
        Interval ti = rational(p, 24);
        std::array<Jet<Interval>, 5> x;
        x[0] = Jet<Interval>::variable(0, Interval(2.0));
        x[1] = Jet<Interval>::variable(1, Interval(2.0));
        for (int i = 2; i < 5; ++i) x[i] = Jet<Interval>::variable(i, ti);
        auto g = jet_gradient(eval_f<Jet<Interval>>(x));
        for (int i = 0; i < 5; ++i)
            if (!g[i].contains(0.0)) r.ad_gradient_encloses_zero = false;
    }
    return r;
}

}  // namespace bwstab
