#pragma once

#include <Eigen/Core>
#include <vector>

#include "rmcurve/curve.hpp"

namespace rmcurve::rh {

using curve::Complex;
using curve::CurveSpec;
using curve::Side;

/// Explicit model Riemann-Hilbert solution for the all-real-branch-point
/// configuration (l = k): entries (alpha, beta) = phi_alpha(xi_beta(x)) with
///   phi_0(xi)  = prod_i (xi - a_i) / sqrt(R(xi)),
///   phi_i(xi)  = -i sqrt(eps_i) prod_{j != i} (xi - a_j) / sqrt(R(xi)),
/// where R has the branch-point images p_1..p_2k as roots and the square
/// root is fixed by continuation from xi -> +infinity.
struct ModelRHMatrix {
    Complex at;
    Eigen::MatrixXcd entries;      // (k+1) x (k+1)
    CurveSpec spec;
    std::vector<double> p_images;  // p_1 < ... < p_2k
};

/// Evaluates M(x). Throws UnsupportedError for curves with complex branch
/// points; a real x inside a cut needs an explicit side.
ModelRHMatrix model_rh_matrix(const CurveSpec& spec, Complex x, Side side = Side::Auto);

struct RHVerifyReport {
    double max_jump_residual = 0.0;           // max ||M+ - M- j_S|| over cut points
    std::vector<double> per_cut_residual;
    double decay_slope = 0.0;                 // fitted exponent of ||M - I|| along a ray
    int points_per_cut = 0;
};

/// Checks M+ = M- j_S at interior points of every cut (j_S is the identity
/// with the rotation block [[0,1],[-1,0]] in rows/columns (0,i)) and fits
/// the decay exponent of ||M - I||, expected -1.
RHVerifyReport verify_model_rh(const CurveSpec& spec, int points_per_cut);

} // namespace rmcurve::rh
