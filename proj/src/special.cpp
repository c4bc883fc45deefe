#include "rmcurve/special.hpp"

#include <cmath>
#include <numbers>

#include "rmcurve/errors.hpp"
#include "detail/doubledouble.hpp"

namespace rmcurve::rh {

namespace {

using detail::CDD;
using detail::DD;

constexpr double kPi = std::numbers::pi;

// Ai(0) and -Ai'(0) as double-double constants.
constexpr DD kAi0{0.3550280538878172, 2.05233632436212e-17};
constexpr DD kNegAip0{0.2588194037928068, -2.522243111610832e-17};

constexpr double kSeriesRadius = 9.0;
constexpr double kOverflowGuard = 100.0;

// Maclaurin series of Ai, Ai' summed in double-double arithmetic. The two
// series branches cancel almost completely on the right half axis, which is
// what the extended precision is for.
std::pair<Complex, Complex> airy_series(Complex z) {
    CDD z3 = detail::cdd_mul(detail::cdd_from(z), detail::cdd_from(z));
    z3 = detail::cdd_mul(z3, detail::cdd_from(z));

    CDD one = detail::cdd_from(1.0);
    CDD zdd = detail::cdd_from(z);
    CDD z2half = detail::cdd_div(detail::cdd_mul(zdd, zdd), 2.0);

    CDD tf = one, tg = zdd, tfp = z2half, tgp = one;
    CDD f = tf, g = tg, fp = tfp, gp = tgp;

    for (int n = 1; n < 400; ++n) {
        double n3 = 3.0 * n;
        tf = detail::cdd_div(detail::cdd_mul(tf, z3), n3 * (n3 - 1.0));
        tg = detail::cdd_div(detail::cdd_mul(tg, z3), (n3 + 1.0) * n3);
        tgp = detail::cdd_div(detail::cdd_mul(tgp, z3), n3 * (n3 - 2.0));
        if (n >= 2) {
            // the f' series starts at the z^2/2 term already seeded
            tfp = detail::cdd_div(detail::cdd_mul(tfp, z3), (n3 - 1.0) * (n3 - 3.0));
            fp = detail::cdd_add(fp, tfp);
        }
        f = detail::cdd_add(f, tf);
        g = detail::cdd_add(g, tg);
        gp = detail::cdd_add(gp, tgp);
        double amax = std::max(std::max(detail::cdd_abs(tf), detail::cdd_abs(tg)),
                               std::max(detail::cdd_abs(tfp), detail::cdd_abs(tgp)));
        double smax = std::max(detail::cdd_abs(f), detail::cdd_abs(g));
        if (amax < 1e-36 * (1.0 + smax)) break;
    }

    // Ai = Ai(0) f + Ai'(0) g and likewise for the derivative series.
    CDD ai = detail::cdd_add(detail::cdd_mul(f, kAi0),
                             detail::cdd_mul(detail::cdd_mul(g, kNegAip0), -1.0));
    CDD aip = detail::cdd_add(detail::cdd_mul(fp, kAi0),
                              detail::cdd_mul(detail::cdd_mul(gp, kNegAip0), -1.0));
    return {detail::cdd_value(ai), detail::cdd_value(aip)};
}

// Large-|z| expansion for |arg z| <= 2pi/3, summed to the smallest term.
std::pair<Complex, Complex> airy_asymptotic_direct(Complex z) {
    Complex z14 = std::pow(z, 0.25);
    Complex zeta = (2.0 / 3.0) * std::pow(z, 1.5);

    Complex pref = std::exp(-zeta) / (2.0 * std::sqrt(kPi) * z14);
    Complex prefd = -std::exp(-zeta) * z14 / (2.0 * std::sqrt(kPi));

    Complex su{1.0, 0.0}, sv{1.0, 0.0};
    double uk = 1.0;
    Complex invzeta = 1.0 / zeta;
    Complex powk{1.0, 0.0};
    double last = 1.0;
    for (int k = 1; k <= 60; ++k) {
        uk *= (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / (216.0 * k * (2.0 * k - 1.0));
        double vk = uk * (6.0 * k + 1.0) / (1.0 - 6.0 * k);
        powk *= -invzeta;
        double mag = uk * std::abs(powk);
        if (mag > last) break; // divergent tail reached
        last = mag;
        su += uk * powk;
        sv += vk * powk;
        if (mag < 1e-18) break;
    }
    return {pref * su, prefd * sv};
}

std::pair<Complex, Complex> airy_large(Complex z) {
    double arg = std::arg(z);
    if (std::abs(arg) <= 2.0 * kPi / 3.0) return airy_asymptotic_direct(z);
    // Rotate into the valid sector with Ai(z) = -sum of the other two solutions.
    Complex w1 = std::polar(1.0, 2.0 * kPi / 3.0);
    Complex w2 = std::conj(w1);
    auto [a1, d1] = airy_asymptotic_direct(w1 * z);
    auto [a2, d2] = airy_asymptotic_direct(w2 * z);
    Complex ai = -w1 * a1 - w2 * a2;
    Complex aip = -w1 * w1 * d1 - w2 * w2 * d2;
    return {ai, aip};
}

} // namespace

std::pair<Complex, Complex> airy(Complex z) {
    double r = std::abs(z);
    if (!(r <= kOverflowGuard))
        throw NumericsError("airy: |z| > overflow guard");
    if (r <= kSeriesRadius) return airy_series(z);
    return airy_large(z);
}

Complex y_alpha(int alpha, Complex z) {
    if (alpha < 0 || alpha > 2) throw ValidationError("y_alpha: alpha must be 0, 1 or 2");
    Complex w = std::polar(1.0, 2.0 * kPi * alpha / 3.0);
    return w * airy(w * z).first;
}

Complex y_alpha_deriv(int alpha, Complex z) {
    if (alpha < 0 || alpha > 2) throw ValidationError("y_alpha_deriv: alpha must be 0, 1 or 2");
    Complex w = std::polar(1.0, 2.0 * kPi * alpha / 3.0);
    return w * w * airy(w * z).second;
}

double sine_kernel(double u, double v) {
    double d = u - v;
    if (std::abs(d) < 1e-8) return 1.0;
    return std::sin(kPi * d) / (kPi * d);
}

double airy_kernel(double u, double v) {
    if (std::abs(u - v) < 1e-6) {
        double m = 0.5 * (u + v);
        auto [ai, aip] = airy(Complex(m, 0.0));
        return aip.real() * aip.real() - m * ai.real() * ai.real();
    }
    auto [aiu, aipu] = airy(Complex(u, 0.0));
    auto [aiv, aipv] = airy(Complex(v, 0.0));
    return (aiu.real() * aipv.real() - aipu.real() * aiv.real()) / (u - v);
}

} // namespace rmcurve::rh
