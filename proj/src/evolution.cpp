#include "rmcurve/evolution.hpp"

#include <algorithm>
#include <cmath>

#include "rmcurve/errors.hpp"

namespace rmcurve::evolution {

namespace {

void check_time(double t) {
    if (!(t > 0.0 && t < 1.0)) throw ValidationError("time must lie in the open interval (0,1)");
}

int cut_count_at(const BridgeSpec& bridge, double t) {
    return curve::branch_points(spec_at(bridge, t)).l();
}

} // namespace

BridgeSpec validate_bridge(std::vector<double> endpoints, std::vector<Fraction> fractions,
                           std::int64_t n) {
    // reuse the curve-side validation for distinctness/positivity/sum
    auto spec = curve::validate_spec(std::move(endpoints), std::move(fractions));
    if (n <= 0) throw ValidationError("particle count must be positive");
    if (!integral_multiples(spec.eps, n))
        throw ValidationError("N is not a common multiple of the fraction denominators");
    return BridgeSpec{spec.a, spec.eps, n};
}

std::vector<double> eigenvalues_at(const BridgeSpec& bridge, double t) {
    check_time(t);
    double s = std::sqrt(t / (1.0 - t));
    std::vector<double> out;
    out.reserve(bridge.endpoints.size());
    for (double a : bridge.endpoints) out.push_back(a * s);
    return out;
}

curve::CurveSpec spec_at(const BridgeSpec& bridge, double t) {
    return curve::validate_spec(eigenvalues_at(bridge, t), bridge.fractions);
}

Timeline cut_count_timeline(const BridgeSpec& bridge, const std::vector<double>& t_grid) {
    Timeline out;
    for (size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1])) throw ValidationError("time grid must be increasing");
    for (double t : t_grid) {
        check_time(t);
        try {
            int l = cut_count_at(bridge, t);
            if (!out.cut_counts.empty() && l < out.cut_counts.back())
                out.monotonicity_violations.emplace_back(out.times.back(), t);
            out.times.push_back(t);
            out.cut_counts.push_back(l);
        } catch (const DegenerateCurveError&) {
            out.degenerate_times.push_back(t);
        }
    }
    return out;
}

std::vector<double> default_time_grid() {
    // 32 log-spaced points in (0, 1/2] mirrored around 1/2; transitions
    // cluster toward the ends for widely spread endpoints.
    const int half = 32;
    const double tmin = 1e-3;
    std::vector<double> grid;
    for (int j = 0; j < half; ++j) {
        double f = static_cast<double>(j) / (half - 1);
        grid.push_back(std::exp(std::log(tmin) + f * (std::log(0.5) - std::log(tmin))));
    }
    std::vector<double> out = grid;
    for (int j = half - 2; j >= 0; --j) out.push_back(1.0 - grid[j]);
    return out;
}

CriticalTimes critical_times(const BridgeSpec& bridge, double tol) {
    if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
    CriticalTimes out;
    Timeline scan = cut_count_timeline(bridge, default_time_grid());
    if (scan.times.size() < 2) return out;

    for (size_t i = 1; i < scan.times.size(); ++i) {
        int dl = scan.cut_counts[i] - scan.cut_counts[i - 1];
        if (dl == 0) continue;
        double lo = scan.times[i - 1], hi = scan.times[i];
        int l_lo = scan.cut_counts[i - 1];

        if (std::abs(dl) > 1) {
            // try to separate multiple transitions by refining the bracket
            std::vector<double> subgrid;
            const int parts = 32;
            for (int j = 1; j < parts; ++j) subgrid.push_back(lo + (hi - lo) * j / parts);
            Timeline fine = cut_count_timeline(bridge, subgrid);
            std::vector<double> ts{lo};
            std::vector<int> ls{l_lo};
            ts.insert(ts.end(), fine.times.begin(), fine.times.end());
            ls.insert(ls.end(), fine.cut_counts.begin(), fine.cut_counts.end());
            ts.push_back(hi);
            ls.push_back(scan.cut_counts[i]);
            bool separated = true;
            for (size_t j = 1; j < ts.size(); ++j)
                if (std::abs(ls[j] - ls[j - 1]) > 1) separated = false;
            if (!separated) {
                out.ambiguous.push_back({0.5 * (lo + hi), lo, hi, true});
                continue;
            }
            for (size_t j = 1; j < ts.size(); ++j) {
                if (ls[j] == ls[j - 1]) continue;
                double a = ts[j - 1], b = ts[j];
                int la = ls[j - 1];
                while (b - a > tol) {
                    double mid = 0.5 * (a + b);
                    int lm;
                    try {
                        lm = cut_count_at(bridge, mid);
                    } catch (const DegenerateCurveError&) {
                        lm = la + 1; // at the transition, within the threshold window
                    }
                    if (lm == la)
                        a = mid;
                    else
                        b = mid;
                }
                out.times.push_back(0.5 * (a + b));
            }
            continue;
        }

        double a = lo, b = hi;
        while (b - a > tol) {
            double mid = 0.5 * (a + b);
            int lm;
            try {
                lm = cut_count_at(bridge, mid);
            } catch (const DegenerateCurveError&) {
                lm = l_lo + dl; // count the threshold window as past the transition
            }
            if (lm == l_lo)
                a = mid;
            else
                b = mid;
        }
        out.times.push_back(0.5 * (a + b));
    }
    std::sort(out.times.begin(), out.times.end());
    return out;
}

double bridge_density(const BridgeSpec& bridge, double t, double x, ScaleConvention convention) {
    check_time(t);
    double s = (convention == ScaleConvention::Paper) ? t * (1.0 - t)
                                                      : std::sqrt(t * (1.0 - t));
    return curve::density(spec_at(bridge, t), x / s) / s;
}

} // namespace rmcurve::evolution
