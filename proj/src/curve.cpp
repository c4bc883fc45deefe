#include "rmcurve/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "detail/curve_context.hpp"
#include "detail/numerics.hpp"
#include "rmcurve/errors.hpp"

namespace rmcurve::curve {

CurveSpec validate_spec(std::vector<double> a, std::vector<Fraction> eps) {
    if (a.empty() || a.size() != eps.size())
        throw ValidationError("eigenvalues and fractions must be non-empty and equal length");
    for (const auto& f : eps)
        if (f <= Fraction(0)) throw ValidationError("non-positive filling fraction");
    if (!sums_to_one(eps)) throw ValidationError("filling fractions do not sum to 1");

    // sort eigenvalues with their fractions attached
    std::vector<size_t> order(a.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t i, size_t j) { return a[i] < a[j]; });
    CurveSpec out;
    for (size_t i : order) {
        out.a.push_back(a[i]);
        out.eps.push_back(eps[i]);
    }
    for (size_t i = 1; i < out.a.size(); ++i)
        if (!(out.a[i - 1] < out.a[i])) throw ValidationError("duplicate source eigenvalues");
    return out;
}

Complex x_of_z(const CurveSpec& spec, Complex z) {
    Complex v = z;
    for (int j = 0; j < spec.k(); ++j) {
        Complex d = z - spec.a[j];
        if (d == Complex(0.0)) throw ValidationError("x_of_z evaluated at a pole");
        v += frac_value(spec.eps[j]) / d;
    }
    return v;
}

Complex x_prime(const CurveSpec& spec, Complex z) {
    Complex v(1.0, 0.0);
    for (int j = 0; j < spec.k(); ++j) {
        Complex d = z - spec.a[j];
        v -= frac_value(spec.eps[j]) / (d * d);
    }
    return v;
}

Complex x_second(const CurveSpec& spec, Complex z) {
    Complex v(0.0, 0.0);
    for (int j = 0; j < spec.k(); ++j) {
        Complex d = z - spec.a[j];
        v += 2.0 * frac_value(spec.eps[j]) / (d * d * d);
    }
    return v;
}

BranchPointSet branch_points(const CurveSpec& spec) {
    const int k = spec.k();
    std::vector<Complex> aC(spec.a.begin(), spec.a.end());
    auto p = detail::poly_from_roots(aC);
    auto p2 = detail::poly_mul(p, p);
    std::vector<Complex> b = p2; // degree 2k, monic
    for (int j = 0; j < k; ++j) {
        std::vector<Complex> roots;
        for (int i = 0; i < k; ++i)
            if (i != j) roots.push_back(aC[i]);
        auto qj = detail::poly_from_roots(roots);
        auto qj2 = detail::poly_mul(qj, qj);
        for (size_t t = 0; t < qj2.size(); ++t) b[t] -= frac_value(spec.eps[j]) * qj2[t];
    }

    auto roots = detail::companion_roots(b);

    // one round of Newton polishing on 1 - sum eps_j/(y-a_j)^2
    for (auto& y : roots) {
        for (int it = 0; it < 2; ++it) {
            Complex f(1.0, 0.0), fp(0.0, 0.0);
            for (int j = 0; j < k; ++j) {
                Complex d = y - spec.a[j];
                Complex t = frac_value(spec.eps[j]) / (d * d);
                f -= t;
                fp += 2.0 * t / d;
            }
            if (fp == Complex(0.0)) break;
            y -= f / fp;
        }
    }

    BranchPointSet out;
    out.y_roots = roots;

    std::vector<Complex> upper;
    std::vector<double> reals;
    for (const auto& y : roots) {
        if (std::abs(y.imag()) < 1e-9 * (1.0 + std::abs(y)))
            reals.push_back(y.real());
        else if (y.imag() > 0.0)
            upper.push_back(y);
    }
    std::sort(reals.begin(), reals.end());
    std::sort(upper.begin(), upper.end(),
              [](Complex u, Complex v) { return u.real() < v.real(); });
    if (reals.size() % 2 != 0 || reals.empty() ||
        reals.size() + 2 * upper.size() != static_cast<size_t>(2 * k))
        throw DegenerateCurveError("branch points straddle the realness tolerance");

    out.y_real = reals;
    for (double y : reals) out.x_real.push_back(x_of_z(spec, Complex(y, 0.0)).real());
    for (const auto& q : upper) {
        out.y_pairs.emplace_back(q, std::conj(q));
        Complex w = x_of_z(spec, q);
        out.x_pairs.emplace_back(w, std::conj(w));
    }

    // sorted y must produce sorted x-images; anything else is outside the
    // generic configuration the analysis assumes
    for (size_t i = 1; i < out.x_real.size(); ++i)
        if (!(out.x_real[i - 1] < out.x_real[i]))
            throw NumericsError("support endpoints not ordered with the branch points");

    std::vector<Complex> images;
    for (double x : out.x_real) images.emplace_back(x, 0.0);
    for (const auto& [w, wc] : out.x_pairs) {
        images.push_back(w);
        images.push_back(wc);
    }
    double minsep = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < images.size(); ++i)
        for (size_t j = i + 1; j < images.size(); ++j)
            minsep = std::min(minsep, std::abs(images[i] - images[j]));
    out.min_separation = minsep;

    if (k >= 2 && minsep < 1e-6 * spec.spread())
        throw DegenerateCurveError("critical configuration: branch points closer than threshold");
    return out;
}

std::vector<SheetId> all_sheets(const CurveSpec& spec) {
    return detail::get_context(spec)->sheets();
}

Complex xi_branch(const CurveSpec& spec, Complex x, SheetId branch, Side side) {
    auto ctx = detail::get_context(spec);
    for (double z : ctx->bps.x_real)
        if (std::abs(x - Complex(z, 0.0)) < 1e-12 * ctx->span_x)
            throw ValidationError("xi_branch evaluated at a branch point");
    for (const auto& [w, wc] : ctx->bps.x_pairs)
        if (std::min(std::abs(x - w), std::abs(x - wc)) < 1e-12 * ctx->span_x)
            throw ValidationError("xi_branch evaluated at a branch point");
    return ctx->track_to(branch, x, side).z;
}

double density(const CurveSpec& spec, double x) {
    return detail::get_context(spec)->density_at(x);
}

DensityProfile density_profile(const CurveSpec& spec, int points_per_cut) {
    if (points_per_cut < 2) throw ValidationError("points_per_cut must be at least 2");
    auto ctx = detail::get_context(spec);
    DensityProfile out;
    const auto& cuts = ctx->cuts;
    for (size_t i = 0; i < cuts.size(); ++i) {
        double len = cuts[i].hi - cuts[i].lo;
        double mlo = 0.12 * len, mhi = 0.12 * len;
        if (i > 0) mlo = std::min(mlo, 0.45 * (cuts[i].lo - cuts[i - 1].hi));
        if (i + 1 < cuts.size()) mhi = std::min(mhi, 0.45 * (cuts[i + 1].lo - cuts[i].hi));
        for (int j = 4; j >= 1; --j) out.grid.push_back(cuts[i].lo - mlo * j / 4.0);
        for (int j = 0; j < points_per_cut; ++j)
            out.grid.push_back(cuts[i].lo + len * j / (points_per_cut - 1.0));
        for (int j = 1; j <= 4; ++j) out.grid.push_back(cuts[i].hi + mhi * j / 4.0);
        out.cut_masses.push_back(cuts[i].mass);
    }
    out.rho.reserve(out.grid.size());
    for (double x : out.grid) out.rho.push_back(ctx->density_at(x));
    out.total_mass = std::accumulate(out.cut_masses.begin(), out.cut_masses.end(), 0.0);
    return out;
}

std::vector<double> edge_constants(const CurveSpec& spec, const BranchPointSet& bps) {
    std::vector<double> xpp;
    for (double p : bps.y_real) xpp.push_back(std::abs(x_second(spec, Complex(p, 0.0))));
    double xmax = *std::max_element(xpp.begin(), xpp.end());
    std::vector<double> out;
    for (double v : xpp) {
        if (v < 1e-9 * xmax)
            throw NumericsError("edge curvature below threshold (near-critical edge)");
        out.push_back(std::sqrt(2.0 / v));
    }
    return out;
}

CutStructure cut_structure(const CurveSpec& spec, const BranchPointSet& bps) {
    auto ctx = detail::get_context(spec);
    if (bps.l() != static_cast<int>(ctx->cuts.size()))
        throw ValidationError("branch point set does not match the spec");

    CutStructure out;
    const auto& gamma = ctx->gamma_crossings();
    for (size_t i = 0; i < ctx->cuts.size(); ++i) {
        const auto& ci = ctx->cuts[i];
        CutStructure::Cut c;
        c.lo = ci.lo;
        c.hi = ci.hi;
        for (int m = 0; m <= ci.b; ++m) c.sheets.push_back(SheetId{static_cast<int>(i) + 1, m});
        c.sources = ci.flat;
        c.mass = ci.mass;
        c.gamma_crossings = gamma[i];

        double dealt = 0.0;
        for (int f : c.sources) dealt += frac_value(spec.eps[f]);
        if (std::abs(c.mass - dealt) > 1e-4)
            throw NumericsError("cut mass does not match its sheet-group fractions");
        out.cuts.push_back(std::move(c));
    }
    out.edge_constants = edge_constants(spec, bps);
    return out;
}

LambdaValue lambda_fn(const CurveSpec& spec, SheetId branch, Complex z, Side side) {
    auto ctx = detail::get_context(spec);
    Side resolved = side;
    if (resolved == Side::Auto)
        resolved = (z.imag() < 0.0) ? Side::Below : Side::Above;
    LambdaValue out;
    out.branch = branch;
    out.at = z;
    out.side = resolved;
    out.value = ctx->lambda_value(branch, z, resolved);
    return out;
}

double h_fn(const CurveSpec& spec, double x) {
    auto ctx = detail::get_context(spec);
    Complex l0 = ctx->lambda_value(SheetId{0, 0}, Complex(x, 0.0), Side::Above);
    return -x * x / 4.0 + l0.real();
}

OrderingReport check_ordering(const CurveSpec& spec, const std::vector<Complex>& samples) {
    auto ctx = detail::get_context(spec);
    const auto sheets = ctx->sheets();
    OrderingReport report;

    for (Complex z : samples) {
        OrderingPoint pt;
        pt.at = z;

        if (z.imag() == 0.0) {
            double x = z.real();
            if (ctx->cut_containing(x) != 0) {
                pt.kind = "unclassified";
                report.points.push_back(pt);
                continue;
            }
            pt.kind = "real-exterior";
            pt.classified = true;
            double l0 = ctx->lambda_value(SheetId{0, 0}, z, Side::Below).real();
            double margin = std::numeric_limits<double>::infinity();
            for (const auto& s : sheets) {
                if (s.principal()) continue;
                double li = ctx->lambda_value(s, z, Side::Above).real();
                margin = std::min(margin, l0 - li);
            }
            pt.margin = margin;
            pt.pass = margin > 0.0;
        } else {
            int near = 0;
            for (size_t i = 0; i < ctx->cuts.size(); ++i) {
                double len = ctx->cuts[i].hi - ctx->cuts[i].lo;
                if (z.real() >= ctx->cuts[i].lo - 0.1 * len &&
                    z.real() <= ctx->cuts[i].hi + 0.1 * len && std::abs(z.imag()) <= 0.25 * len)
                    near = static_cast<int>(i) + 1;
            }
            if (near == 0) {
                pt.kind = "unclassified";
                report.points.push_back(pt);
                continue;
            }
            pt.kind = "near-cut";
            pt.classified = true;
            pt.cut = near;
            const auto& gamma = ctx->gamma_crossings()[near - 1];
            int m = 0;
            for (double r : gamma)
                if (z.real() > r) ++m;
            SheetId local{near, m};
            pt.local = local;

            double l0 = ctx->lambda_value(SheetId{0, 0}, z, Side::Auto).real();
            double margin = ctx->lambda_value(local, z, Side::Auto).real() - l0;
            for (const auto& s : sheets) {
                if (s.principal()) continue;
                if (s.cut == near && std::abs(s.sub - m) <= 1) continue; // local and neighbors
                double li = ctx->lambda_value(s, z, Side::Auto).real();
                margin = std::min(margin, l0 - li);
            }
            pt.margin = margin;
            pt.pass = margin > 0.0;
        }
        report.points.push_back(pt);
        report.all_pass = report.all_pass && report.points.back().pass;
    }
    return report;
}

std::vector<Complex> standard_ordering_lattice(const CurveSpec& spec) {
    auto ctx = detail::get_context(spec);
    const auto& gamma = ctx->gamma_crossings();
    std::vector<Complex> out;
    for (size_t i = 0; i < ctx->cuts.size(); ++i) {
        double lo = ctx->cuts[i].lo, hi = ctx->cuts[i].hi, len = hi - lo;
        std::vector<double> stations;
        for (double f : {0.2, 0.35, 0.5, 0.65, 0.8}) {
            double x = lo + f * len;
            bool clear = true;
            for (double r : gamma[i])
                if (std::abs(x - r) < 0.06 * len) clear = false;
            if (clear) stations.push_back(x);
            if (stations.size() == 3) break;
        }
        for (double x : stations)
            for (double off : {0.015, 0.04})
                for (double s : {1.0, -1.0}) out.emplace_back(x, s * off * len);
    }
    const auto& cuts = ctx->cuts;
    out.emplace_back(cuts.front().lo - 0.3 * (cuts.front().hi - cuts.front().lo), 0.0);
    out.emplace_back(cuts.back().hi + 0.3 * (cuts.back().hi - cuts.back().lo), 0.0);
    for (size_t i = 1; i < cuts.size(); ++i)
        out.emplace_back(0.5 * (cuts[i - 1].hi + cuts[i].lo), 0.0);
    return out;
}

std::vector<std::vector<double>> gamma_crossing_points(const CurveSpec& spec,
                                                       const CutStructure& partial) {
    auto ctx = detail::get_context(spec);
    if (partial.cuts.size() != ctx->cuts.size())
        throw ValidationError("cut structure does not match the spec");
    return ctx->gamma_crossings();
}

} // namespace rmcurve::curve
