#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "bwstab/errors.hpp"
#include "bwstab/interval.hpp"

namespace bwstab {

// Axis-aligned product of intervals.
struct Box {
    std::vector<Interval> dims;

    Box() = default;
    explicit Box(std::vector<Interval> d) : dims(std::move(d)) {}

    std::size_t size() const { return dims.size(); }
    const Interval& operator[](std::size_t i) const { return dims[i]; }
    Interval& operator[](std::size_t i) { return dims[i]; }

    double max_width() const {
        double w = 0.0;
        for (const auto& d : dims) w = std::max(w, d.width());
        return w;
    }

    std::vector<double> midpoint() const {
        std::vector<double> m;
        m.reserve(dims.size());
        for (const auto& d : dims) m.push_back(d.mid());
        return m;
    }

    bool contains(const Box& o) const {
        if (o.size() != size()) return false;
        for (std::size_t i = 0; i < size(); ++i)
            if (!dims[i].contains(o.dims[i])) return false;
        return true;
    }
};

// Split along one dimension at its midpoint. The two halves share the split
// point, so their union is exactly the input. Splitting a zero-width
// dimension cannot make progress and is rejected.
inline std::pair<Box, Box> bisect(const Box& b, std::size_t dim) {
    if (dim >= b.size()) throw InvariantViolation("bisect: dimension index out of range");
    const Interval& d = b.dims[dim];
    if (d.is_point()) throw InvariantViolation("bisect: dimension has zero width");
    double m = d.mid();
    if (m <= d.lo) m = d.lo + 0.5 * (d.hi - d.lo);  // guard against midpoint rounding to lo
    if (!(d.lo < m && m < d.hi)) throw InvariantViolation("bisect: no representable split point");
    Box left = b, right = b;
    left.dims[dim] = Interval(d.lo, m);
    right.dims[dim] = Interval(m, d.hi);
    return {left, right};
}

}  // namespace bwstab
