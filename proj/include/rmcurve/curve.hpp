#pragma once

#include <compare>
#include <complex>
#include <string>
#include <vector>

#include "rmcurve/fraction.hpp"

namespace rmcurve::curve {

using Complex = std::complex<double>;

/// Source eigenvalues with exact filling fractions. Defines the spectral
/// curve  prod_i (y - a_i) * (x - y - sum_j eps_j / (y - a_j)) = 0.
struct CurveSpec {
    std::vector<double> a;       // strictly increasing
    std::vector<Fraction> eps;   // positive, sums to one exactly

    int k() const { return static_cast<int>(a.size()); }
    double spread() const { return a.empty() ? 0.0 : a.back() - a.front(); }
    bool operator==(const CurveSpec&) const = default;
};

/// Validates and normalizes (sorts a with eps attached). Throws
/// ValidationError on duplicate eigenvalues, non-positive fractions or a
/// fraction sum different from one.
CurveSpec validate_spec(std::vector<double> a, std::vector<Fraction> eps);

/// The rational curve map x(z) = z + sum_i eps_i / (z - a_i) and its
/// derivatives. z must avoid the poles a_i.
Complex x_of_z(const CurveSpec& spec, Complex z);
Complex x_prime(const CurveSpec& spec, Complex z);
Complex x_second(const CurveSpec& spec, Complex z);

/// Roots of the branch-point equation 1 = sum_j eps_j / (y - a_j)^2 in the
/// y-plane together with their x-plane images.
struct BranchPointSet {
    std::vector<Complex> y_roots;  // all 2k roots
    std::vector<double> y_real;    // sorted real roots p_1 < ... < p_{2l}
    std::vector<double> x_real;    // their x-images: support endpoints z_1 < ... < z_{2l}
    // Non-real roots grouped as (q, conj q) with Im q > 0, sorted by Re,
    // and the matching x-images (w, conj w).
    std::vector<std::pair<Complex, Complex>> y_pairs;
    std::vector<std::pair<Complex, Complex>> x_pairs;
    double min_separation = 0.0;   // smallest pairwise distance among x-images

    int l() const { return static_cast<int>(x_real.size()) / 2; }
};

/// Companion-matrix roots of the degree-2k branch polynomial plus one round
/// of Newton polishing. Throws DegenerateCurveError when two x-images come
/// closer than the criticality threshold 1e-6 * spread(a).
BranchPointSet branch_points(const CurveSpec& spec);

/// Sheet label. (0,0) is the principal sheet xi_0; (i,m) with i in 1..l and
/// m in 0..b_i are the sheets attached to cut i, ordered by their source
/// eigenvalue.
struct SheetId {
    int cut = 0;
    int sub = 0;
    bool principal() const { return cut == 0; }
    auto operator<=>(const SheetId&) const = default;
};

enum class Side { Above, Below, Auto };

/// Real support intervals with their sheet groups, masses, edge constants
/// and the real crossing points of the imaginary cuts.
struct CutStructure {
    struct Cut {
        double lo = 0.0, hi = 0.0;
        std::vector<SheetId> sheets;           // (i,0) .. (i,b_i)
        std::vector<int> sources;              // 0-based indices into spec.a
        double mass = 0.0;                     // integral of rho over the cut
        std::vector<double> gamma_crossings;   // r_i^(1) < ... < r_i^(b_i)
    };
    std::vector<Cut> cuts;
    std::vector<double> edge_constants;        // per endpoint, z_1 .. z_{2l} order
};

CutStructure cut_structure(const CurveSpec& spec, const BranchPointSet& bps);

/// All sheets of the curve, principal first.
std::vector<SheetId> all_sheets(const CurveSpec& spec);

/// The y-value on the requested sheet over x, evaluated by Newton homotopy
/// continuation from a far reference point. For real x inside a cut the
/// side selects the boundary value (Auto resolves to Above for real x and
/// to the half-plane of x otherwise).
Complex xi_branch(const CurveSpec& spec, Complex x, SheetId branch, Side side = Side::Auto);

/// Limiting eigenvalue density |Im xi_0+(x)| / pi. Exactly zero outside the
/// cuts and at the cut endpoints.
double density(const CurveSpec& spec, double x);

struct DensityProfile {
    std::vector<double> grid;        // strictly increasing
    std::vector<double> rho;
    double total_mass = 0.0;         // Gauss-Legendre quadrature over the support
    std::vector<double> cut_masses;  // per-cut quadrature
};

/// Samples rho on each cut (points_per_cut >= 2) plus small exterior
/// margins; masses by 64-node Gauss-Legendre after the sin^2 substitution
/// that absorbs the square-root edge vanishing.
DensityProfile density_profile(const CurveSpec& spec, int points_per_cut);

/// Edge constants rho_j = sqrt(2 / |x''(p_j)|), one per support endpoint in
/// z_1 .. z_{2l} order; rho(x) ~ (rho_j/pi) |x - z_j|^{1/2} at the edge.
std::vector<double> edge_constants(const CurveSpec& spec, const BranchPointSet& bps);

struct LambdaValue {
    SheetId branch;
    Complex at;
    Complex value;
    Side side = Side::Above;
};

/// lambda_branch(z) = int^z xi_branch, with integration constants resolved
/// once per spec by the anchoring chain: lambda_0(z_{2l}) = 0, right-edge
/// matching to lambda_0+, left-edge matching to lambda_0-, and matching of
/// consecutive sub-sheets at the complex branch points.
LambdaValue lambda_fn(const CurveSpec& spec, SheetId branch, Complex z, Side side = Side::Auto);

/// h(x) = -x^2/4 + Re lambda_0+(x).
double h_fn(const CurveSpec& spec, double x);

struct OrderingPoint {
    Complex at;
    std::string kind;      // "near-cut", "real-exterior" or "unclassified"
    bool classified = false;
    bool pass = true;
    double margin = 0.0;   // smallest slack among the required inequalities
    int cut = 0;           // 1-based cut index for near-cut points
    SheetId local;         // dominant sheet at a near-cut point
};

struct OrderingReport {
    std::vector<OrderingPoint> points;
    bool all_pass = true;
};

/// Checks the real-part ordering of the lambda functions: near cut i,
/// Re lambda_j < Re lambda_0 < Re lambda_local for every non-neighboring
/// sheet j; on the real axis outside all cuts, Re lambda_j+ < Re lambda_0-.
/// Failures are data, not errors.
OrderingReport check_ordering(const CurveSpec& spec, const std::vector<Complex>& samples);

/// The sample lattice used by the shipped verification runs: per cut, three
/// interior stations at two heights on both sides, plus exterior and gap
/// points on the real axis.
std::vector<Complex> standard_ordering_lattice(const CurveSpec& spec);

/// Real points r_i^(m) inside cut i where Re lambda_i^(m) = Re lambda_i^(m-1),
/// located by bisection; one sequence per cut, ordered increasing.
/// `partial` only needs intervals and sheet groups.
std::vector<std::vector<double>> gamma_crossing_points(const CurveSpec& spec,
                                                       const CutStructure& partial);

} // namespace rmcurve::curve
