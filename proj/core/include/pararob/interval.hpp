#pragma once

#include <algorithm>
#include <ostream>

namespace pararob {

/// Closed real interval [lo, hi].
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    [[nodiscard]] constexpr double width() const noexcept { return hi - lo; }
    [[nodiscard]] constexpr double midpoint() const noexcept { return lo + 0.5 * (hi - lo); }
    [[nodiscard]] constexpr bool is_point() const noexcept { return lo == hi; }
    [[nodiscard]] constexpr bool contains(double x) const noexcept { return lo <= x && x <= hi; }
    [[nodiscard]] constexpr bool contains(const Interval& o) const noexcept {
        return lo <= o.lo && o.hi <= hi;
    }

    friend constexpr bool operator==(const Interval&, const Interval&) = default;
};

[[nodiscard]] constexpr Interval intersect(const Interval& a, const Interval& b) noexcept {
    return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

inline std::ostream& operator<<(std::ostream& os, const Interval& iv) {
    return os << '[' << iv.lo << ", " << iv.hi << ']';
}

}  // namespace pararob
