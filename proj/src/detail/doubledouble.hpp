#pragma once

#include <cmath>
#include <complex>

// Minimal double-double arithmetic (Dekker / Knuth error-free transforms).
// Used only to sum the Airy power series without losing the leading digits
// to cancellation between the two series branches.

namespace rmcurve::detail {

struct DD {
    double hi = 0.0;
    double lo = 0.0;
};

inline DD two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline DD quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

inline DD two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline DD dd_add(DD a, DD b) {
    DD s = two_sum(a.hi, b.hi);
    s.lo += a.lo + b.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline DD dd_neg(DD a) { return {-a.hi, -a.lo}; }

inline DD dd_mul(DD a, DD b) {
    DD p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}

inline DD dd_mul(DD a, double b) {
    DD p = two_prod(a.hi, b);
    p.lo += a.lo * b;
    return quick_two_sum(p.hi, p.lo);
}

inline DD dd_div(DD a, double b) {
    double q1 = a.hi / b;
    DD p = two_prod(q1, b);
    double r = ((a.hi - p.hi) - p.lo) + a.lo;
    double q2 = r / b;
    return quick_two_sum(q1, q2);
}

inline double dd_value(DD a) { return a.hi + a.lo; }

// Complex double-double, componentwise.
struct CDD {
    DD re, im;
};

inline CDD cdd_from(std::complex<double> z) { return {{z.real(), 0.0}, {z.imag(), 0.0}}; }

inline CDD cdd_add(CDD a, CDD b) { return {dd_add(a.re, b.re), dd_add(a.im, b.im)}; }

inline CDD cdd_mul(CDD a, CDD b) {
    DD re = dd_add(dd_mul(a.re, b.re), dd_neg(dd_mul(a.im, b.im)));
    DD im = dd_add(dd_mul(a.re, b.im), dd_mul(a.im, b.re));
    return {re, im};
}

inline CDD cdd_div(CDD a, double b) { return {dd_div(a.re, b), dd_div(a.im, b)}; }

inline CDD cdd_mul(CDD a, DD b) { return {dd_mul(a.re, b), dd_mul(a.im, b)}; }

inline CDD cdd_mul(CDD a, double b) { return {dd_mul(a.re, b), dd_mul(a.im, b)}; }

inline std::complex<double> cdd_value(CDD a) { return {dd_value(a.re), dd_value(a.im)}; }

inline double cdd_abs(CDD a) { return std::abs(cdd_value(a)); }

} // namespace rmcurve::detail
