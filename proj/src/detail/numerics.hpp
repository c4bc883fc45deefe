#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <vector>

namespace rmcurve::detail {

using Complex = std::complex<double>;

// Coefficients in increasing degree order.
inline std::vector<Complex> poly_mul(const std::vector<Complex>& p, const std::vector<Complex>& q) {
    std::vector<Complex> r(p.size() + q.size() - 1, Complex(0));
    for (size_t i = 0; i < p.size(); ++i)
        for (size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
    return r;
}

inline std::vector<Complex> poly_from_roots(const std::vector<Complex>& roots) {
    std::vector<Complex> p{Complex(1)};
    for (Complex r : roots) p = poly_mul(p, {-r, Complex(1)});
    return p;
}

// All roots of a polynomial via the companion-matrix eigenvalues.
inline std::vector<Complex> companion_roots(const std::vector<Complex>& coeffs) {
    int n = static_cast<int>(coeffs.size()) - 1;
    while (n > 0 && std::abs(coeffs[n]) == 0.0) --n;
    if (n < 1) return {};
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) c(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) c(i, n - 1) = -coeffs[i] / coeffs[n];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(c, /*computeEigenvectors=*/false);
    std::vector<Complex> roots(n);
    for (int i = 0; i < n; ++i) roots[i] = es.eigenvalues()(i);
    return roots;
}

// Gauss-Legendre nodes and weights on [-1, 1], Newton iteration on the
// Legendre recurrence.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double t = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

} // namespace rmcurve::detail
