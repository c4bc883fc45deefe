#pragma once

#include <cstdint>
#include <vector>

#include "rmcurve/curve.hpp"
#include "rmcurve/fraction.hpp"

namespace rmcurve::evolution {

/// Endpoint data of the non-intersecting bridge picture: at time t the
/// particles are distributed as the eigenvalues of the source model with
/// a_i(t) = a_i(1) sqrt(t / (1-t)).
struct BridgeSpec {
    std::vector<double> endpoints;   // distinct final positions a_i(1)
    std::vector<Fraction> fractions; // positive, sums to one
    std::int64_t n = 0;              // particle count, common multiple of denominators
};

BridgeSpec validate_bridge(std::vector<double> endpoints, std::vector<Fraction> fractions,
                           std::int64_t n);

/// a_i(1) * sqrt(t / (1-t)) for t in (0,1), order preserved.
std::vector<double> eigenvalues_at(const BridgeSpec& bridge, double t);

curve::CurveSpec spec_at(const BridgeSpec& bridge, double t);

struct CriticalBracket {
    double t = 0.0;        // located transition time
    double lo = 0.0, hi = 0.0;   // bracketing interval
    bool ambiguous = false;      // more than one transition inside the bracket
};

struct Timeline {
    std::vector<double> times;        // non-degenerate grid points, increasing
    std::vector<int> cut_counts;      // l(t) per time
    std::vector<double> degenerate_times; // grid points skipped as critical
    std::vector<CriticalBracket> critical_times;
    std::vector<std::pair<double, double>> monotonicity_violations; // (t_prev, t)
};

/// Evaluates l(t) over the grid; degenerate grid points are recorded and
/// skipped, decreases of l are reported as violations, never hidden.
Timeline cut_count_timeline(const BridgeSpec& bridge, const std::vector<double>& t_grid);

/// The default coarse scan: 64 points in (0,1), log-spaced toward both ends.
std::vector<double> default_time_grid();

struct CriticalTimes {
    std::vector<double> times;
    std::vector<CriticalBracket> ambiguous; // unresolved multi-transition brackets
};

/// Brackets every change of l(t) on the coarse scan and bisects each bracket
/// to width <= tol.
CriticalTimes critical_times(const BridgeSpec& bridge, double tol);

enum class ScaleConvention { Paper, Sqrt };

/// Limiting particle density at position x and time t: the matrix-model
/// density pushed through the time scaling s(t) = t(1-t) ("paper") or
/// sqrt(t(1-t)) ("sqrt"), Jacobian included so the mass stays one.
double bridge_density(const BridgeSpec& bridge, double t, double x,
                      ScaleConvention convention = ScaleConvention::Paper);

} // namespace rmcurve::evolution
