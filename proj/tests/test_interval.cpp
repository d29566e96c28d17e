// Soundness and tightness tests for the outward-rounded interval kernels.
//
// The randomized suite draws operands with dyadic-rational endpoints n / 2^s
// so that the true result range has exactly known endpoints. Containment is
// checked with exact integer arithmetic (__int128 cross-multiplication), not
// with floating point, so a rounding bug in the kernels cannot hide inside
// the oracle itself.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "bwstab/box.hpp"
#include "bwstab/errors.hpp"
#include "bwstab/interval.hpp"

using bwstab::Box;
using bwstab::DomainError;
using bwstab::Interval;
using bwstab::InvariantViolation;
using bwstab::RoundingBackend;

namespace {

using i128 = __int128;

constexpr double kInf = std::numeric_limits<double>::infinity();
double up(double x) { return std::nextafter(x, kInf); }

// x = m * 2^e exactly, |m| < 2^53.
void decompose(double x, long long& m, int& e) {
    int k = 0;
    double fr = std::frexp(x, &k);
    m = static_cast<long long>(std::ldexp(fr, 53));
    e = k - 53;
}

// Exact a * 2^ea <= b * 2^eb. Saturating shifts: once a side exceeds 2^120 in
// magnitude while still owing shifts, its sign decides (the other side stays
// below 2^110 for every caller here).
bool le_scaled(i128 a, int ea, i128 b, int eb) {
    const i128 kBig = i128(1) << 120;
    int d = ea - eb;
    while (d > 0) {
        if (a == 0) return 0 <= b;
        if (a > kBig || a < -kBig) return a < 0;
        a <<= 1;
        --d;
    }
    while (d < 0) {
        if (b == 0) return a <= 0;
        if (b > kBig || b < -kBig) return b > 0;
        b <<= 1;
        ++d;
    }
    return a <= b;
}

// Exact x <= p / q with q > 0.
bool le_rat(double x, i128 p, i128 q) {
    long long m;
    int e;
    decompose(x, m, e);
    return le_scaled(i128(m) * q, e, p, 0);
}
bool ge_rat(double x, i128 p, i128 q) {
    long long m;
    int e;
    decompose(x, m, e);
    return le_scaled(p, 0, i128(m) * q, e);
}

// A dyadic rational n / 2^s carried alongside its (exact) double value.
struct Dyadic {
    long long n;
    int s;
    double value() const { return std::ldexp(static_cast<double>(n), -s); }
};

struct RandomOperand {
    Dyadic lo, hi;
    Interval iv;
};

struct Gen {
    std::mt19937_64 rng;
    long long nmax;
    int smax;

    Dyadic dyadic() {
        std::uniform_int_distribution<long long> dn_(-nmax, nmax);
        std::uniform_int_distribution<int> ds(0, smax);
        return Dyadic{dn_(rng), ds(rng)};
    }

    RandomOperand operand() {
        Dyadic a = dyadic(), b = dyadic();
        if (b.value() < a.value()) std::swap(a, b);
        if (std::uniform_int_distribution<int>(0, 9)(rng) == 0) a = b;  // point interval
        return RandomOperand{a, b, Interval(a.value(), b.value())};
    }
};

// Exact endpoint comparisons for the four arithmetic ops. Every corner value
// is the rational (corner numerator) / (corner denominator); a sound result
// must have lo <= all corners <= hi, and monotone ops attain extremes at
// corners.
void check_add(const RandomOperand& a, const RandomOperand& b, const Interval& c, bool exact_repr) {
    // lo corner: a.lo + b.lo = (n1*2^s2 + n2*2^s1) / 2^(s1+s2)
    auto sum = [](const Dyadic& x, const Dyadic& y) {
        int s = x.s + y.s;
        i128 p = (i128(x.n) << y.s) + (i128(y.n) << x.s);
        return std::pair<i128, int>(p, s);
    };
    auto [plo, slo] = sum(a.lo, b.lo);
    auto [phi, shi] = sum(a.hi, b.hi);
    REQUIRE(le_rat(c.lo, plo, i128(1) << slo));
    REQUIRE(ge_rat(c.hi, phi, i128(1) << shi));
    if (exact_repr) {
        REQUIRE(c.lo == a.iv.lo + b.iv.lo);
        REQUIRE(c.hi == a.iv.hi + b.iv.hi);
    }
}

void check_mul(const RandomOperand& a, const RandomOperand& b, const Interval& c) {
    const Dyadic* as[2] = {&a.lo, &a.hi};
    const Dyadic* bs[2] = {&b.lo, &b.hi};
    for (auto* x : as)
        for (auto* y : bs) {
            i128 p = i128(x->n) * y->n;
            i128 q = i128(1) << (x->s + y->s);
            REQUIRE(le_rat(c.lo, p, q));
            REQUIRE(ge_rat(c.hi, p, q));
        }
}

void check_div(const RandomOperand& a, const RandomOperand& b, const Interval& c) {
    const Dyadic* as[2] = {&a.lo, &a.hi};
    const Dyadic* bs[2] = {&b.lo, &b.hi};
    for (auto* x : as)
        for (auto* y : bs) {
            // x / y = (nx * 2^sy) / (ny * 2^sx), normalized to positive denom
            i128 p = i128(x->n) << y->s;
            i128 q = i128(y->n) << x->s;
            if (q < 0) {
                p = -p;
                q = -q;
            }
            REQUIRE(le_rat(c.lo, p, q));
            REQUIRE(ge_rat(c.hi, p, q));
        }
}

void check_sq(const RandomOperand& a, const Interval& c) {
    // exact range of x^2 over [lo, hi]
    i128 plo = i128(a.lo.n) * a.lo.n, phi = i128(a.hi.n) * a.hi.n;
    i128 qlo = i128(1) << (2 * a.lo.s), qhi = i128(1) << (2 * a.hi.s);
    bool lo_is_max = !le_scaled(plo, -2 * a.lo.s, phi, -2 * a.hi.s);
    i128 pmax = lo_is_max ? plo : phi, qmax = lo_is_max ? qlo : qhi;
    REQUIRE(ge_rat(c.hi, pmax, qmax));
    if (a.iv.contains_zero()) {
        REQUIRE(c.lo <= 0.0);
    } else {
        bool lo_is_min = le_scaled(plo, -2 * a.lo.s, phi, -2 * a.hi.s);
        i128 pmin = lo_is_min ? plo : phi, qmin = lo_is_min ? qlo : qhi;
        REQUIRE(le_rat(c.lo, pmin, qmin));
    }
}

void check_sqrt(const Dyadic& v, const Interval& c) {
    // c.lo <= sqrt(v): for c.lo <= 0 trivial, else c.lo^2 <= v.
    if (c.lo > 0.0) {
        long long m;
        int e;
        decompose(c.lo, m, e);
        REQUIRE(le_scaled(i128(m) * m, 2 * e, v.n, -v.s));
    }
    // sqrt(v) <= c.hi: v <= c.hi^2 (c.hi >= 0 because sqrt never returns below 0).
    REQUIRE(c.hi >= 0.0);
    long long m;
    int e;
    decompose(c.hi, m, e);
    REQUIRE(le_scaled(v.n, -v.s, i128(m) * m, 2 * e));
}

void run_soundness(RoundingBackend backend, long long nmax, int smax, int iters, bool exact_repr) {
    bwstab::set_rounding_backend(backend);
    Gen g{std::mt19937_64(0x62657477656c6bULL + nmax), nmax, smax};
    for (int it = 0; it < iters; ++it) {
        RandomOperand a = g.operand();
        RandomOperand b = g.operand();
        INFO("iteration " << it << ": a=[" << a.iv.lo << "," << a.iv.hi << "] b=[" << b.iv.lo
                          << "," << b.iv.hi << "]");

        check_add(a, b, a.iv + b.iv, exact_repr);
        {
            // subtraction = addition with the negated operand
            RandomOperand nb{{-b.hi.n, b.hi.s}, {-b.lo.n, b.lo.s}, -b.iv};
            check_add(a, nb, a.iv - b.iv, exact_repr);
        }
        check_mul(a, b, a.iv * b.iv);

        if (!b.iv.contains_zero()) check_div(a, b, a.iv / b.iv);

        {
            Interval s = sq(a.iv);
            check_sq(a, s);
            if (a.iv.contains_zero()) REQUIRE(s.lo == 0.0);
        }

        if (a.iv.lo >= 0.0) {
            Interval r = bwstab::sqrt(a.iv);
            check_sqrt(a.lo, r);
            check_sqrt(a.hi, r);
        }
    }
    bwstab::set_rounding_backend(RoundingBackend::Portable);
}

}  // namespace

TEST_CASE("exactly representable results stay exact", "[interval]") {
    auto backend = GENERATE(RoundingBackend::Portable, RoundingBackend::HardwareDirected);
    bwstab::set_rounding_backend(backend);

    Interval s = Interval(1, 2) + Interval(3, 4);
    CHECK(s.lo == 4.0);
    CHECK(s.hi == 6.0);

    Interval p = Interval(-2, 1) * Interval(3, 4);
    CHECK(p.lo == -8.0);
    CHECK(p.hi == 4.0);

    Interval r = bwstab::sqrt(Interval(4, 9));
    CHECK(r.lo == 2.0);
    CHECK(r.hi == 3.0);

    Interval d = Interval(1, 6) / Interval(2);
    CHECK(d.lo == 0.5);
    CHECK(d.hi == 3.0);

    bwstab::set_rounding_backend(RoundingBackend::Portable);
}

TEST_CASE("domain violations are rejected", "[interval]") {
    CHECK_THROWS_AS(Interval(3.0, 2.0), DomainError);
    CHECK_THROWS_AS(Interval(std::numeric_limits<double>::quiet_NaN()), DomainError);
    CHECK_THROWS_AS(Interval(0.0, kInf), DomainError);
    CHECK_THROWS_AS(Interval(1, 2) / Interval(0, 1), DomainError);
    CHECK_THROWS_AS(Interval(1, 2) / Interval(-1, 1), DomainError);
    CHECK_THROWS_AS(bwstab::sqrt(Interval(-1, 4)), DomainError);
    CHECK_THROWS_AS(bwstab::pow_i(Interval(1, 2), -1), DomainError);
    CHECK_THROWS_AS(intersect(Interval(0, 1), Interval(2, 3)), InvariantViolation);
}

TEST_CASE("randomized dyadic soundness, small operands (exact results)", "[interval]") {
    auto backend = GENERATE(RoundingBackend::Portable, RoundingBackend::HardwareDirected);
    // n <= 2^20, s <= 8: sums and products are exactly representable doubles,
    // so the kernels must return them unchanged (width stays zero-inflation).
    run_soundness(backend, 1 << 20, 8, 10000, true);
}

TEST_CASE("randomized dyadic soundness, wide operands (inexact results)", "[interval]") {
    auto backend = GENERATE(RoundingBackend::Portable, RoundingBackend::HardwareDirected);
    // n <= 2^40, s <= 20: most products/quotients are not representable and
    // force a genuine outward-rounding decision on every endpoint.
    run_soundness(backend, 1LL << 40, 20, 10000, false);
}

TEST_CASE("portable and hardware-directed backends agree exactly", "[interval]") {
    // Both backends implement optimal outward rounding (the portable one via
    // exact residual signs), so their endpoints must match bit for bit.
    Gen g{std::mt19937_64(0xa5a5a5a5ULL), 1LL << 40, 20};
    for (int it = 0; it < 5000; ++it) {
        RandomOperand a = g.operand();
        RandomOperand b = g.operand();
        INFO("iteration " << it);

        auto both = [&](auto&& op) {
            bwstab::set_rounding_backend(RoundingBackend::Portable);
            Interval p = op();
            bwstab::set_rounding_backend(RoundingBackend::HardwareDirected);
            Interval h = op();
            bwstab::set_rounding_backend(RoundingBackend::Portable);
            REQUIRE(p.lo == h.lo);
            REQUIRE(p.hi == h.hi);
        };

        both([&] { return a.iv + b.iv; });
        both([&] { return a.iv - b.iv; });
        both([&] { return a.iv * b.iv; });
        if (!b.iv.contains_zero()) both([&] { return a.iv / b.iv; });
        if (a.iv.lo >= 0.0) both([&] { return bwstab::sqrt(a.iv); });
    }
}

TEST_CASE("inclusion monotonicity", "[interval]") {
    Gen g{std::mt19937_64(0x1cebab1eULL), 1LL << 30, 12};
    auto inner = [&](const Interval& x) {
        // random dyadic sub-interval
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double l = x.lo + u(g.rng) * x.width();
        double h = l + u(g.rng) * (x.hi - l);
        return Interval(std::max(x.lo, l), std::min(x.hi, h));
    };
    for (int it = 0; it < 5000; ++it) {
        Interval a = g.operand().iv, b = g.operand().iv;
        Interval a2 = inner(a), b2 = inner(b);
        INFO("iteration " << it);
        CHECK((a + b).contains(a2 + b2));
        CHECK((a - b).contains(a2 - b2));
        CHECK((a * b).contains(a2 * b2));
        if (!b.contains_zero()) CHECK((a / b).contains(a2 / b2));
        if (a.lo >= 0.0) CHECK(bwstab::sqrt(a).contains(bwstab::sqrt(a2)));
        CHECK(sq(a).contains(sq(a2)));
    }
}

TEST_CASE("enclosures of irrational constants are one ulp wide", "[interval]") {
    // sqrt(2) = 1.41421356237309504880168872420969807856... lies strictly
    // between adjacent doubles; the enclosure must trap it with width 1 ulp.
    Interval r = bwstab::sqrt(Interval(2));
    CHECK(r.hi == up(r.lo));
    long long m;
    int e;
    decompose(r.lo, m, e);
    CHECK(le_scaled(i128(m) * m, 2 * e, 2, 0));  // lo^2 <= 2
    decompose(r.hi, m, e);
    CHECK(le_scaled(2, 0, i128(m) * m, 2 * e));  // 2 <= hi^2
    CHECK(r.contains(1.4142135623730951));       // nearest double to sqrt(2)

    Interval third = bwstab::rational(1, 3);
    CHECK(le_rat(third.lo, 1, 3));
    CHECK(ge_rat(third.hi, 1, 3));
    CHECK(third.width() <= 2.0 * (up(third.lo) - third.lo));
}

TEST_CASE("integer powers", "[interval]") {
    Interval x(-2, 3);
    Interval x2 = bwstab::pow_i(x, 2);
    CHECK(x2.lo == 0.0);
    CHECK(x2.hi == 9.0);
    Interval x3 = bwstab::pow_i(x, 3);
    CHECK(x3.contains(-8.0));
    CHECK(x3.contains(27.0));
    CHECK(bwstab::pow_i(x, 0).lo == 1.0);
    CHECK(bwstab::pow_i(x, 0).hi == 1.0);
    // pow_i must never be wider than naive repeated multiplication
    Interval naive = x * x * x * x * x;
    Interval p5 = bwstab::pow_i(x, 5);
    CHECK(naive.contains(p5));
}

TEST_CASE("box bisection partitions exactly", "[interval][box]") {
    Box b(std::vector<Interval>{Interval(0, 1), Interval(-2, 6), Interval(3, 3)});
    CHECK(b.max_width() == 8.0);
    auto [l, r] = bisect(b, 1);
    CHECK(l[1].lo == -2.0);
    CHECK(l[1].hi == r[1].lo);
    CHECK(r[1].hi == 6.0);
    CHECK(l[0].lo == 0.0);  // untouched dims preserved
    CHECK(r[2].is_point());
    CHECK(b.contains(l));
    CHECK(b.contains(r));

    CHECK_THROWS_AS(bisect(b, 2), InvariantViolation);  // zero width
    CHECK_THROWS_AS(bisect(b, 3), InvariantViolation);  // out of range

    // adjacent-float dimension: no representable interior point
    Box tiny(std::vector<Interval>{Interval(1.0, up(1.0))});
    CHECK_THROWS_AS(bisect(tiny, 0), InvariantViolation);

    auto mid = b.midpoint();
    REQUIRE(mid.size() == 3);
    CHECK(mid[1] == 2.0);
}
