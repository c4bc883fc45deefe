#pragma once

#include <complex>
#include <memory>
#include <mutex>
#include <vector>

#include "rmcurve/curve.hpp"

namespace rmcurve::detail {

using curve::BranchPointSet;
using curve::Complex;
using curve::CurveSpec;
using curve::SheetId;
using curve::Side;

struct CutInfo {
    double lo = 0.0, hi = 0.0;   // x-plane support interval
    double p_lo = 0.0, p_hi = 0.0; // y-plane branch points at the edges
    int b = 0;                   // number of imaginary cuts crossing this interval
    double mass = 0.0;           // quadrature of rho over the cut
    std::vector<int> flat;       // 0-based indices into spec.a, ascending, size b+1
};

/// Homotopy state: fiber root z over base point x, with the continued
/// arguments of (z - a_j) (for the lambda logarithms) and optionally the
/// continued square root of x'(z) (for the model RH matrix).
struct Tracked {
    Complex x;
    Complex z;
    std::vector<double> theta;
    Complex sqrt_xp{1.0, 0.0};
    bool want_sqrt = false;
};

/// Per-spec analysis state shared by the curve operations: branch points,
/// cut/sheet bookkeeping, homotopy tracking and the lambda integration
/// constants. Construction is eager for the structure, lazy (write-once)
/// for the lambda constants and gamma crossings; safe for concurrent use.
class CurveContext {
public:
    explicit CurveContext(CurveSpec s);

    CurveSpec spec;
    BranchPointSet bps;
    std::vector<CutInfo> cuts;
    double span_x = 1.0;     // support extent z_{2l} - z_1 (min 1)
    double x_far = 0.0;      // homotopy reference point
    double corridor_h = 1.0; // corridor height for tracking paths

    int n_sheets() const { return spec.k() + 1; }
    std::vector<SheetId> sheets() const;
    bool sheet_exists(SheetId s) const;
    int flat_of(SheetId s) const;           // source index of a non-principal sheet
    int matrix_index(SheetId s) const;      // 0..k, paper's flat row/column order
    SheetId sheet_of_matrix_index(int idx) const;

    /// 1-based index of the open cut containing x, 0 if none.
    int cut_containing(double x) const;

    Tracked start_state(SheetId s, bool want_sqrt) const;
    void track_segment(Tracked& st, Complex x_to) const;
    Tracked track_to(SheetId s, Complex target, Side side, bool want_sqrt = false) const;

    /// Exact primitive of xi dz along the tracked path:
    /// Lambda = x(z) z - z^2/2 - sum_j eps_j (ln|z - a_j| + i theta_j).
    Complex lambda_raw(const Tracked& st) const;
    Complex lambda_value(SheetId s, Complex target, Side side) const;
    const std::vector<Complex>& lambda_constants() const; // by matrix_index
    const std::vector<std::vector<double>>& gamma_crossings() const;

    std::vector<Complex> fiber_roots(Complex x) const;
    double density_at(double x) const;

    /// 64-node Gauss-Legendre mass of rho over [lo, hi] with the sin^2
    /// substitution absorbing the square-root edge vanishing.
    double mass_quadrature(double lo, double hi) const;

    /// Sub-sheet index m whose boundary value pairs with xi_0+ at real x
    /// inside cut i (1-based cut index).
    int local_subsheet(int cut_i, double x) const;

private:
    // cached x-independent polynomial data for the fiber equation
    std::vector<Complex> poly_p_;   // prod (y - a_j)
    std::vector<Complex> poly_s_;   // sum_j eps_j prod_{i != j} (y - a_i)

    mutable std::once_flag lambda_once_, gamma_once_;
    mutable std::vector<Complex> lambda_c_;
    mutable std::vector<std::vector<double>> gamma_;

    void resolve_lambda_constants() const;
    void resolve_gamma() const;
    /// Track to x_near and land the state on the exact y-plane point
    /// y_exact (a branch root), then evaluate the raw primitive there.
    Complex lambda_raw_at_ypoint(SheetId s, Complex x_near, Side side, Complex y_exact) const;

    friend struct ContextTestAccess;
};

std::shared_ptr<const CurveContext> get_context(const CurveSpec& spec);

/// Newton solve of the fiber equation x = z + sum eps_j/(z - a_j) from z0.
bool newton_fiber(const CurveSpec& spec, Complex x, Complex z0, Complex& out);

} // namespace rmcurve::detail
