#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <numeric>
#include <vector>

#include "rmcurve/errors.hpp"

namespace rmcurve {

/// Exact filling fraction. Kept rational so that sum-to-one and the
/// N-divisibility constraint can be checked without rounding.
using Fraction = boost::rational<std::int64_t>;

inline Fraction make_fraction(std::int64_t num, std::int64_t den) {
    if (den == 0) throw ValidationError("fraction with zero denominator");
    return Fraction(num, den);
}

inline double frac_value(const Fraction& f) {
    return static_cast<double>(f.numerator()) / static_cast<double>(f.denominator());
}

inline bool sums_to_one(const std::vector<Fraction>& fs) {
    Fraction s(0);
    for (const auto& f : fs) s += f;
    return s == Fraction(1);
}

/// True when n is a common multiple of all denominators, i.e. every n*f is
/// an integer particle count.
inline bool integral_multiples(const std::vector<Fraction>& fs, std::int64_t n) {
    for (const auto& f : fs)
        if ((n * f.numerator()) % f.denominator() != 0) return false;
    return true;
}

inline std::int64_t multiple_of(const Fraction& f, std::int64_t n) {
    return (n * f.numerator()) / f.denominator();
}

} // namespace rmcurve
