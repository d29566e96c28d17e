#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "bwstab/errors.hpp"
#include "bwstab/interval.hpp"

// Truncated Taylor expansions (jets) in 5 variables up to total degree 6,
// stored densely in graded lexicographic order: 462 = C(11,5) terms.
//
// The scalar type T is double (plain Taylor coefficients at a point) or
// Interval. With interval coefficients and the variables lifted over a box
// (constant term = the box edge, linear term = 1), every jet coefficient of
// an expression encloses the corresponding Taylor coefficient of that
// expression at every point of the box.

namespace bwstab {

namespace jet_detail {

constexpr int kVars = 5;
constexpr int kDeg = 6;
constexpr int kTerms = 462;

using Exps = std::array<std::uint8_t, kVars>;

struct Tables {
    std::array<Exps, kTerms> exps;           // index -> exponent tuple
    std::array<int, kDeg + 2> deg_off;       // degree -> first index of that block
    std::array<std::int16_t, 16807> lookup;  // packed exponents (base 7) -> index
    // Ordered pair decompositions, grouped by target index t: all (i, j) with
    // exps[i] + exps[j] == exps[t]. pair_off[t] .. pair_off[t+1] slices pairs.
    std::vector<std::pair<std::uint16_t, std::uint16_t>> pairs;
    std::array<int, kTerms + 1> pair_off;

    static int pack(const Exps& e) {
        return e[0] + 7 * (e[1] + 7 * (e[2] + 7 * (e[3] + 7 * e[4])));
    }

    Tables() {
        // enumerate exponent tuples in graded lex order (higher degree later;
        // within a degree, lexicographic by tuple)
        lookup.fill(-1);
        int idx = 0;
        for (int d = 0; d <= kDeg; ++d) {
            deg_off[d] = idx;
            Exps e{};
            // lexicographic enumeration of tuples with sum d (odometer over
            // the full [0,d]^5 grid, filtered; cheap one-time cost)
            std::array<int, kVars> v{};
            for (;;) {
                int sum = 0;
                for (int k = 0; k < kVars; ++k) sum += v[k];
                if (sum == d) {
                    for (int k = 0; k < kVars; ++k) e[k] = static_cast<std::uint8_t>(v[k]);
                    exps[idx] = e;
                    lookup[pack(e)] = static_cast<std::int16_t>(idx);
                    ++idx;
                }
                // next tuple in colex-style counter with per-component cap d
                int k = kVars - 1;
                while (k >= 0 && v[k] == d) v[k--] = 0;
                if (k < 0) break;
                ++v[k];
            }
        }
        deg_off[kDeg + 1] = idx;

        pair_off[0] = 0;
        for (int t = 0; t < kTerms; ++t) {
            const Exps& g = exps[t];
            // all componentwise beta <= gamma
            Exps b{};
            for (;;) {
                Exps rest;
                for (int k = 0; k < kVars; ++k) rest[k] = static_cast<std::uint8_t>(g[k] - b[k]);
                pairs.emplace_back(static_cast<std::uint16_t>(lookup[pack(b)]),
                                   static_cast<std::uint16_t>(lookup[pack(rest)]));
                int k = kVars - 1;
                while (k >= 0 && b[k] == g[k]) b[k--] = 0;
                if (k < 0) break;
                ++b[k];
            }
            pair_off[t + 1] = static_cast<int>(pairs.size());
        }
    }
};

inline const Tables& tables() {
    static const Tables t;
    return t;
}

inline int degree_of(int idx) {
    const auto& off = tables().deg_off;
    int d = 0;
    while (idx >= off[d + 1]) ++d;
    return d;
}

}  // namespace jet_detail

template <class T>
struct Jet {
    static constexpr int kVars = jet_detail::kVars;
    static constexpr int kDeg = jet_detail::kDeg;
    static constexpr int kTerms = jet_detail::kTerms;

    std::array<T, kTerms> c{};

    static Jet constant(const T& v) {
        Jet j;
        j.c[0] = v;
        return j;
    }

    // Coordinate function x_i lifted at `value`: constant term the point (or
    // box edge), unit linear term.
    static Jet variable(int i, const T& value) {
        if (i < 0 || i >= kVars) throw InvariantViolation("jet variable index out of range");
        Jet j;
        j.c[0] = value;
        std::array<std::uint8_t, kVars> e{};
        e[i] = 1;
        j.c[jet_detail::tables().lookup[jet_detail::Tables::pack(e)]] = T(1.0);
        return j;
    }

    const T& coeff(const std::array<std::uint8_t, kVars>& e) const {
        int d = 0;
        for (int k = 0; k < kVars; ++k) d += e[k];
        if (d > kDeg) throw InvariantViolation("jet coefficient beyond truncation degree");
        return c[jet_detail::tables().lookup[jet_detail::Tables::pack(e)]];
    }
};

template <class T>
Jet<T> operator+(const Jet<T>& a, const Jet<T>& b) {
    Jet<T> r;
    for (int i = 0; i < Jet<T>::kTerms; ++i) r.c[i] = a.c[i] + b.c[i];
    return r;
}

template <class T>
Jet<T> operator-(const Jet<T>& a, const Jet<T>& b) {
    Jet<T> r;
    for (int i = 0; i < Jet<T>::kTerms; ++i) r.c[i] = a.c[i] - b.c[i];
    return r;
}

template <class T>
Jet<T> operator-(const Jet<T>& a) {
    Jet<T> r;
    for (int i = 0; i < Jet<T>::kTerms; ++i) r.c[i] = -a.c[i];
    return r;
}

template <class T>
Jet<T> operator*(const Jet<T>& a, const T& s) {
    Jet<T> r;
    for (int i = 0; i < Jet<T>::kTerms; ++i) r.c[i] = a.c[i] * s;
    return r;
}

template <class T>
Jet<T> operator*(const T& s, const Jet<T>& a) {
    return a * s;
}

// Truncated product: c_gamma = sum over beta <= gamma of a_beta * b_(gamma-beta).
template <class T>
Jet<T> operator*(const Jet<T>& a, const Jet<T>& b) {
    const auto& tb = jet_detail::tables();
    Jet<T> r;
    for (int t = 0; t < Jet<T>::kTerms; ++t) {
        T acc{};
        for (int p = tb.pair_off[t]; p < tb.pair_off[t + 1]; ++p)
            acc = acc + a.c[tb.pairs[p].first] * b.c[tb.pairs[p].second];
        r.c[t] = acc;
    }
    return r;
}

namespace jet_detail {
template <class T>
bool invertible_leading(const T& x) {
    return x != T(0.0);
}
inline bool invertible_leading(const Interval& x) { return !x.contains_zero(); }
template <class T>
bool positive_leading(const T& x) {
    return x > T(0.0);
}
inline bool positive_leading(const Interval& x) { return x.strictly_positive(); }
}  // namespace jet_detail

// Truncated quotient, solved coefficient by coefficient:
//   q_gamma = (a_gamma - sum_{beta < gamma} q_beta b_(gamma-beta)) / b_0.
// Graded order guarantees every q_beta needed is already final.
template <class T>
Jet<T> operator/(const Jet<T>& a, const Jet<T>& b) {
    if (!jet_detail::invertible_leading(b.c[0]))
        throw DomainError("jet division requires an invertible constant term");
    const auto& tb = jet_detail::tables();
    Jet<T> q;
    q.c[0] = a.c[0] / b.c[0];
    for (int t = 1; t < Jet<T>::kTerms; ++t) {
        T acc = a.c[t];
        for (int p = tb.pair_off[t]; p < tb.pair_off[t + 1]; ++p) {
            auto [i, j] = tb.pairs[p];
            if (j == 0) continue;  // that's the q_gamma * b_0 term being solved for
            acc = acc - q.c[i] * b.c[j];
        }
        q.c[t] = acc / b.c[0];
    }
    return q;
}

// Truncated square root (constant term must be strictly positive):
//   s_0 = sqrt(a_0),
//   s_gamma = (a_gamma - sum_{0 < beta < gamma} s_beta s_(gamma-beta)) / (2 s_0).
template <class T>
Jet<T> sqrt(const Jet<T>& a) {
    if (!jet_detail::positive_leading(a.c[0]))
        throw DomainError("jet sqrt requires a strictly positive constant term");
    const auto& tb = jet_detail::tables();
    Jet<T> s;
    using std::sqrt;
    s.c[0] = sqrt(a.c[0]);
    T twos0 = T(2.0) * s.c[0];
    for (int t = 1; t < Jet<T>::kTerms; ++t) {
        T acc = a.c[t];
        for (int p = tb.pair_off[t]; p < tb.pair_off[t + 1]; ++p) {
            auto [i, j] = tb.pairs[p];
            if (i == 0 || j == 0) continue;  // the two s_0 s_gamma terms being solved for
            acc = acc - s.c[i] * s.c[j];
        }
        s.c[t] = acc / twos0;
    }
    return s;
}

template <class T>
Jet<T> sq(const Jet<T>& a) {
    return a * a;
}

template <class T>
Jet<T> pow_i(const Jet<T>& a, int n) {
    if (n < 0) throw DomainError("pow_i expects a non-negative exponent");
    Jet<T> r = Jet<T>::constant(T(1.0));
    Jet<T> base = a;
    while (n > 0) {
        if (n & 1) r = r * base;
        n >>= 1;
        if (n) base = base * base;
    }
    return r;
}

}  // namespace bwstab
