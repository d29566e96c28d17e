#pragma once

#include <cfenv>
#include <cmath>
#include <limits>
#include <string>

#include "bwstab/errors.hpp"

// Closed interval arithmetic over IEEE doubles with outward rounding.
//
// Two interchangeable rounding backends are provided; both guarantee that the
// exact real result of an operation on any points of the input intervals is
// contained in the output interval.
//
//  * Portable (default): operations are computed in round-to-nearest and the
//    result is stepped to the adjacent representable value only when a
//    residual (TwoSum / FMA based) proves the rounded value lies on the wrong
//    side. Exactly representable results are therefore kept exact.
//  * HardwareDirected: endpoints are recomputed under FE_DOWNWARD/FE_UPWARD.
//    Slower (mode switches), used to cross-check the portable backend.

namespace bwstab {

enum class RoundingBackend { Portable, HardwareDirected };

// Switching while other threads run interval ops is not supported.
inline RoundingBackend g_rounding_backend = RoundingBackend::Portable;

inline void set_rounding_backend(RoundingBackend b) { g_rounding_backend = b; }
inline RoundingBackend rounding_backend() { return g_rounding_backend; }

namespace detail {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double step_down(double x) { return std::nextafter(x, -kInf); }
inline double step_up(double x) { return std::nextafter(x, kInf); }

// Residual of s = fl(a + b); a + b == s + err exactly (Knuth two-sum).
inline double two_sum_err(double a, double b, double s) {
    double bv = s - a;
    double av = s - bv;
    return (a - av) + (b - bv);
}

// Largest double known to be <= the exact sum a + b.
inline double add_lo_portable(double a, double b) {
    double s = a + b;
    return two_sum_err(a, b, s) < 0.0 ? step_down(s) : s;
}
inline double add_hi_portable(double a, double b) {
    double s = a + b;
    return two_sum_err(a, b, s) > 0.0 ? step_up(s) : s;
}

inline double mul_lo_portable(double a, double b) {
    double p = a * b;
    return std::fma(a, b, -p) < 0.0 ? step_down(p) : p;
}
inline double mul_hi_portable(double a, double b) {
    double p = a * b;
    return std::fma(a, b, -p) > 0.0 ? step_up(p) : p;
}

// Sign of (a/b - q) equals sign of -(q*b - a)/b; fma gives the exact sign of
// the tiny residual q*b - a.
inline double div_lo_portable(double a, double b) {
    double q = a / b;
    double r = std::fma(q, b, -a);
    double diff = (b > 0.0) ? -r : r;   // sign of exact - q
    return diff < 0.0 ? step_down(q) : q;
}
inline double div_hi_portable(double a, double b) {
    double q = a / b;
    double r = std::fma(q, b, -a);
    double diff = (b > 0.0) ? -r : r;
    return diff > 0.0 ? step_up(q) : q;
}

inline double sqrt_lo_portable(double a) {
    double r = std::sqrt(a);
    return std::fma(r, r, -a) > 0.0 ? step_down(r) : r;
}
inline double sqrt_hi_portable(double a) {
    double r = std::sqrt(a);
    return std::fma(r, r, -a) < 0.0 ? step_up(r) : r;
}

// Hardware-directed primitives. volatile keeps the compiler from folding or
// hoisting the arithmetic across the rounding-mode change.
struct ScopedRoundingMode {
    int saved;
    explicit ScopedRoundingMode(int mode) : saved(std::fegetround()) { std::fesetround(mode); }
    ~ScopedRoundingMode() { std::fesetround(saved); }
};

inline double add_dir(double a, double b, int mode) {
    ScopedRoundingMode g(mode);
    volatile double va = a, vb = b;
    volatile double r = va + vb;
    return r;
}
inline double mul_dir(double a, double b, int mode) {
    ScopedRoundingMode g(mode);
    volatile double va = a, vb = b;
    volatile double r = va * vb;
    return r;
}
inline double div_dir(double a, double b, int mode) {
    ScopedRoundingMode g(mode);
    volatile double va = a, vb = b;
    volatile double r = va / vb;
    return r;
}
inline double sqrt_dir(double a, int mode) {
    ScopedRoundingMode g(mode);
    volatile double va = a;
    volatile double r = std::sqrt(va);
    return r;
}

inline double add_lo(double a, double b) {
    return g_rounding_backend == RoundingBackend::Portable ? add_lo_portable(a, b)
                                                           : add_dir(a, b, FE_DOWNWARD);
}
inline double add_hi(double a, double b) {
    return g_rounding_backend == RoundingBackend::Portable ? add_hi_portable(a, b)
                                                           : add_dir(a, b, FE_UPWARD);
}
inline double mul_lo(double a, double b) {
    return g_rounding_backend == RoundingBackend::Portable ? mul_lo_portable(a, b)
                                                           : mul_dir(a, b, FE_DOWNWARD);
}
inline double mul_hi(double a, double b) {
    return g_rounding_backend == RoundingBackend::Portable ? mul_hi_portable(a, b)
                                                           : mul_dir(a, b, FE_UPWARD);
}
inline double div_lo(double a, double b) {
    return g_rounding_backend == RoundingBackend::Portable ? div_lo_portable(a, b)
                                                           : div_dir(a, b, FE_DOWNWARD);
}
inline double div_hi(double a, double b) {
    return g_rounding_backend == RoundingBackend::Portable ? div_hi_portable(a, b)
                                                           : div_dir(a, b, FE_UPWARD);
}
inline double sqrt_lo(double a) {
    return g_rounding_backend == RoundingBackend::Portable ? sqrt_lo_portable(a)
                                                           : sqrt_dir(a, FE_DOWNWARD);
}
inline double sqrt_hi(double a) {
    return g_rounding_backend == RoundingBackend::Portable ? sqrt_hi_portable(a)
                                                           : sqrt_dir(a, FE_UPWARD);
}

}  // namespace detail

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    Interval() = default;
    explicit Interval(double x) : lo(x), hi(x) { validate(); }
    Interval(double l, double h) : lo(l), hi(h) { validate(); }

    void validate() const {
        if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi))
            throw DomainError("interval endpoints must be finite with lo <= hi: [" +
                              std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }

    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    double mag() const { return std::max(std::fabs(lo), std::fabs(hi)); }
    bool is_point() const { return lo == hi; }
    bool contains(double x) const { return lo <= x && x <= hi; }
    bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
    bool strictly_positive() const { return lo > 0.0; }
    bool contains_zero() const { return lo <= 0.0 && 0.0 <= hi; }
};

namespace detail {
inline Interval make_checked(double lo, double hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi))
        throw DomainError("interval operation overflowed to a non-finite endpoint");
    return Interval(lo, hi);
}
}  // namespace detail

inline Interval operator+(const Interval& a, const Interval& b) {
    return detail::make_checked(detail::add_lo(a.lo, b.lo), detail::add_hi(a.hi, b.hi));
}

inline Interval operator-(const Interval& a) { return Interval(-a.hi, -a.lo); }

inline Interval operator-(const Interval& a, const Interval& b) {
    return detail::make_checked(detail::add_lo(a.lo, -b.hi), detail::add_hi(a.hi, -b.lo));
}

inline Interval operator*(const Interval& a, const Interval& b) {
    using namespace detail;
    double lo = std::min(std::min(mul_lo(a.lo, b.lo), mul_lo(a.lo, b.hi)),
                         std::min(mul_lo(a.hi, b.lo), mul_lo(a.hi, b.hi)));
    double hi = std::max(std::max(mul_hi(a.lo, b.lo), mul_hi(a.lo, b.hi)),
                         std::max(mul_hi(a.hi, b.lo), mul_hi(a.hi, b.hi)));
    return make_checked(lo, hi);
}

inline Interval operator/(const Interval& a, const Interval& b) {
    using namespace detail;
    if (b.contains_zero()) throw DomainError("interval division by an interval containing zero");
    double lo = std::min(std::min(div_lo(a.lo, b.lo), div_lo(a.lo, b.hi)),
                         std::min(div_lo(a.hi, b.lo), div_lo(a.hi, b.hi)));
    double hi = std::max(std::max(div_hi(a.lo, b.lo), div_hi(a.lo, b.hi)),
                         std::max(div_hi(a.hi, b.lo), div_hi(a.hi, b.hi)));
    return make_checked(lo, hi);
}

inline Interval operator+(const Interval& a, double s) { return a + Interval(s); }
inline Interval operator+(double s, const Interval& a) { return Interval(s) + a; }
inline Interval operator-(const Interval& a, double s) { return a - Interval(s); }
inline Interval operator-(double s, const Interval& a) { return Interval(s) - a; }
inline Interval operator*(const Interval& a, double s) { return a * Interval(s); }
inline Interval operator*(double s, const Interval& a) { return Interval(s) * a; }
inline Interval operator/(const Interval& a, double s) { return a / Interval(s); }
inline Interval operator/(double s, const Interval& a) { return Interval(s) / a; }

inline Interval sqrt(const Interval& a) {
    if (a.lo < 0.0) throw DomainError("interval sqrt of an interval with negative lower endpoint");
    double lo = detail::sqrt_lo(a.lo);
    if (lo < 0.0) lo = 0.0;
    return detail::make_checked(lo, detail::sqrt_hi(a.hi));
}

inline double sq(double x) { return x * x; }

// Tight square: never dips below zero when the input straddles zero.
inline Interval sq(const Interval& a) {
    using namespace detail;
    double alo = std::fabs(a.lo), ahi = std::fabs(a.hi);
    double big = std::max(alo, ahi);
    double hi = mul_hi(big, big);
    if (a.contains_zero()) return make_checked(0.0, hi);
    double small = std::min(alo, ahi);
    return make_checked(mul_lo(small, small), hi);
}

inline Interval abs(const Interval& a) {
    if (a.lo >= 0.0) return a;
    if (a.hi <= 0.0) return -a;
    return Interval(0.0, a.mag());
}

inline Interval hull(const Interval& a, const Interval& b) {
    return Interval(std::min(a.lo, b.lo), std::max(a.hi, b.hi));
}

inline Interval intersect(const Interval& a, const Interval& b) {
    double lo = std::max(a.lo, b.lo), hi = std::min(a.hi, b.hi);
    if (lo > hi) throw InvariantViolation("intersection of disjoint intervals");
    return Interval(lo, hi);
}

// Enclosure of the exact rational p/q.
inline Interval rational(long long p, long long q) {
    return Interval(static_cast<double>(p)) / Interval(static_cast<double>(q));
}

// Integer power by repeated squaring/multiplication (n >= 0), sign-aware for
// even n via sq().
inline Interval pow_i(const Interval& a, int n) {
    if (n < 0) throw DomainError("pow_i expects a non-negative exponent");
    Interval r(1.0);
    Interval base = a;
    int m = n;
    while (m > 0) {
        if (m & 1) r = r * base;
        m >>= 1;
        if (m) base = sq(base);
    }
    return r;
}

}  // namespace bwstab
