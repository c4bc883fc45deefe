#pragma once

#include <complex>
#include <utility>

namespace rmcurve::rh {

using Complex = std::complex<double>;

/// Airy function value and derivative at z.
///
/// Power series (compensated summation) inside |z| <= 9, asymptotic
/// expansion with sector rotation beyond. Relative accuracy better than
/// 1e-10 on the real axis in [-10, 6] and near machine precision inside
/// the series disc. Throws NumericsError past the overflow guard |z| > 100.
std::pair<Complex, Complex> airy(Complex z);

/// Rotated Airy solution y_alpha(z) = e^{2*alpha*pi*i/3} Ai(e^{2*alpha*pi*i/3} z),
/// alpha in {0,1,2}. The three satisfy y0 + y1 + y2 = 0.
Complex y_alpha(int alpha, Complex z);

/// Derivative of y_alpha with respect to z.
Complex y_alpha_deriv(int alpha, Complex z);

/// sin(pi(u-v)) / (pi(u-v)) with the removable singularity filled
/// (value 1 when |u-v| < 1e-8).
double sine_kernel(double u, double v);

/// (Ai(u)Ai'(v) - Ai'(u)Ai(v)) / (u-v); diagonal filled by
/// Ai'(u)^2 - u Ai(u)^2 when |u-v| < 1e-6.
double airy_kernel(double u, double v);

} // namespace rmcurve::rh
