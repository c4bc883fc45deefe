#include "rmcurve/mc.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <thread>

#include <json.hpp>

#include "detail/curve_context.hpp"
#include "detail/rng.hpp"
#include "detail/threads.hpp"
#include "rmcurve/errors.hpp"
#include "rmcurve/tw_reference.hpp"

namespace rmcurve::mc {

namespace {

std::vector<double> source_diagonal(const curve::CurveSpec& spec, int n) {
    std::vector<double> diag;
    diag.reserve(n);
    for (int i = 0; i < spec.k(); ++i) {
        auto count = multiple_of(spec.eps[i], n);
        for (std::int64_t c = 0; c < count; ++c) diag.push_back(spec.a[i]);
    }
    return diag;
}

std::vector<double> draw_eigenvalues(const std::vector<double>& diag, int n,
                                     std::uint64_t seed, int draw) {
    detail::SplitMix64 rng(detail::stream_key(seed, static_cast<std::uint64_t>(draw)));
    double sd = 1.0 / std::sqrt(static_cast<double>(n));
    double so = 1.0 / std::sqrt(2.0 * n);
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i) {
        m(i, i) = diag[i] + sd * rng.normal();
        for (int j = i + 1; j < n; ++j) {
            std::complex<double> h(so * rng.normal(), so * rng.normal());
            m(i, j) = h;
            m(j, i) = std::conj(h);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + n);
    return ev; // ascending by Eigen's contract
}

} // namespace

EnsembleSample sample_matrix(const curve::CurveSpec& spec, int n, std::uint64_t seed,
                             int draws, int max_n) {
    if (n < 1 || draws < 1) throw ValidationError("matrix size and draw count must be positive");
    if (n > max_n) throw ValidationError("matrix size exceeds the configured cap");
    if (!integral_multiples(spec.eps, n))
        throw ValidationError("N is not a common multiple of the fraction denominators");

    EnsembleSample out;
    out.n = n;
    out.spec = spec;
    out.seed = seed;
    out.draws = draws;
    out.eigenvalues.assign(draws, {});

    auto diag = source_diagonal(spec, n);
    int workers = std::min(detail::worker_threads(), draws);
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (int d = w; d < draws; d += workers)
                out.eigenvalues[d] = draw_eigenvalues(diag, n, seed, d);
        });
    }
    for (auto& t : pool) t.join();
    return out;
}

Histogram empirical_density(const EnsembleSample& sample, int bins, double lo, double hi) {
    if (bins < 1) throw ValidationError("bins must be positive");
    if (!(hi > lo)) throw ValidationError("empty histogram range");
    Histogram h;
    h.edges.resize(bins + 1);
    for (int b = 0; b <= bins; ++b) h.edges[b] = lo + (hi - lo) * b / bins;
    std::vector<std::size_t> counts(bins, 0);
    for (const auto& ev : sample.eigenvalues)
        for (double x : ev) {
            if (x < lo || x >= hi) {
                ++h.outside_count;
                continue;
            }
            int b = std::min(bins - 1, static_cast<int>((x - lo) / (hi - lo) * bins));
            ++counts[b];
            ++h.total_count;
        }
    double width = (hi - lo) / bins;
    h.density.resize(bins);
    for (int b = 0; b < bins; ++b)
        h.density[b] = h.total_count ? counts[b] / (width * static_cast<double>(h.total_count))
                                     : 0.0;
    return h;
}

namespace {

// Cumulative of the sampled profile from the left edge of the cut holding
// the window, by trapezoid prefix sums plus in-cell interpolation.
struct CumulativeDensity {
    std::vector<double> x, f;

    double operator()(double v) const {
        auto it = std::upper_bound(x.begin(), x.end(), v);
        if (it == x.begin()) return 0.0;
        size_t j = static_cast<size_t>(it - x.begin()) - 1;
        if (j + 1 >= x.size()) return f.back();
        double t = (v - x[j]) / (x[j + 1] - x[j]);
        return f[j] + t * (f[j + 1] - f[j]);
    }
};

CumulativeDensity window_cumulative(const EnsembleSample& sample,
                                    const curve::DensityProfile& profile, double w_lo,
                                    double w_hi) {
    if (!(w_hi > w_lo)) throw ValidationError("empty unfolding window");
    auto ctx = detail::get_context(sample.spec);
    int cut = 0;
    for (int i = 0; i < static_cast<int>(ctx->cuts.size()); ++i) {
        const auto& ci = ctx->cuts[i];
        double margin = 0.1 * (ci.hi - ci.lo);
        if (w_lo >= ci.lo + margin && w_hi <= ci.hi - margin) cut = i + 1;
    }
    if (cut == 0)
        throw ValidationError(
            "unfolding window must sit inside one cut, 10% of its length from the edges");

    const auto& ci = ctx->cuts[cut - 1];
    CumulativeDensity cum;
    double acc = 0.0, px = 0.0, pr = 0.0;
    bool first = true;
    for (size_t j = 0; j < profile.grid.size(); ++j) {
        double x = profile.grid[j];
        if (x < ci.lo || x > ci.hi) continue;
        if (!first) acc += 0.5 * (profile.rho[j] + pr) * (x - px);
        cum.x.push_back(x);
        cum.f.push_back(acc);
        px = x;
        pr = profile.rho[j];
        first = false;
    }
    if (cum.x.size() < 8) throw ValidationError("density profile too coarse for unfolding");
    return cum;
}

} // namespace

std::vector<std::vector<double>> unfold_positions(const EnsembleSample& sample,
                                                  const curve::DensityProfile& profile,
                                                  double w_lo, double w_hi) {
    auto cum = window_cumulative(sample, profile, w_lo, w_hi);
    std::vector<std::vector<double>> out;
    out.reserve(sample.eigenvalues.size());
    for (const auto& ev : sample.eigenvalues) {
        std::vector<double> u;
        for (double x : ev)
            if (x >= w_lo && x <= w_hi) u.push_back(sample.n * cum(x));
        out.push_back(std::move(u));
    }
    return out;
}

std::vector<double> unfold(const EnsembleSample& sample, const curve::DensityProfile& profile,
                           double w_lo, double w_hi) {
    auto positions = unfold_positions(sample, profile, w_lo, w_hi);
    std::vector<double> spacings;
    for (const auto& u : positions)
        for (size_t j = 1; j < u.size(); ++j) spacings.push_back(u[j] - u[j - 1]);
    return spacings;
}

double wigner_surmise_cdf(double s) {
    if (s <= 0.0) return 0.0;
    return 1.0 - std::exp(-4.0 * s * s / 3.14159265358979323846);
}

double ks_distance(const std::vector<double>& sorted_sample,
                   const std::function<double(double)>& reference_cdf) {
    if (sorted_sample.empty()) throw ValidationError("KS distance of an empty sample");
    double n = static_cast<double>(sorted_sample.size());
    double d = 0.0;
    for (size_t j = 0; j < sorted_sample.size(); ++j) {
        if (j + 1 < sorted_sample.size() && sorted_sample[j] > sorted_sample[j + 1])
            throw ValidationError("KS input must be sorted ascending");
        double f = reference_cdf(sorted_sample[j]);
        d = std::max(d, std::abs(f - (j + 1) / n));
        d = std::max(d, std::abs(f - j / n));
    }
    return d;
}

KernelStats bulk_statistics(const std::vector<double>& spacings,
                            const std::vector<std::vector<double>>& positions) {
    if (spacings.size() < 1000)
        throw ValidationError("bulk statistics need at least 1000 spacings");
    KernelStats stats;
    stats.spacing_count = spacings.size();
    double mean = 0.0;
    for (double s : spacings) mean += s;
    stats.spacing_mean = mean / spacings.size();

    std::vector<double> sorted = spacings;
    std::sort(sorted.begin(), sorted.end());
    stats.ks_bulk = ks_distance(sorted, wigner_surmise_cdf);

    if (!positions.empty()) {
        // pair-correlation estimate on [0,3] for unit-density windows:
        // counts of pair distances per bin over (window length - r)
        const int bins = 60;
        const double rmax = 3.0;
        std::vector<double> acc(bins, 0.0), norm(bins, 0.0);
        for (const auto& u : positions) {
            if (u.size() < 2) continue;
            double len = u.back() - u.front();
            if (len <= rmax) continue;
            for (size_t i = 0; i < u.size(); ++i)
                for (size_t j = i + 1; j < u.size(); ++j) {
                    double r = u[j] - u[i];
                    if (r >= rmax) break;
                    acc[static_cast<int>(r / rmax * bins)] += 1.0;
                }
            for (int b = 0; b < bins; ++b) {
                double r = rmax * (b + 0.5) / bins;
                norm[b] += std::max(len - r, 0.0) * (rmax / bins);
            }
        }
        for (int b = 0; b < bins; ++b) {
            double r = rmax * (b + 0.5) / bins;
            stats.two_point.emplace_back(r, norm[b] > 0.0 ? acc[b] / norm[b] : 0.0);
        }
    }
    return stats;
}

KernelStats edge_statistics(const EnsembleSample& sample, int edge_index, double edge_x,
                            double rho_edge) {
    if (sample.draws < 50) throw ValidationError("edge statistics need at least 50 draws");
    if (!(rho_edge > 0.0)) throw ValidationError("edge constant must be positive");
    auto ctx = detail::get_context(sample.spec);
    int n_edges = 2 * static_cast<int>(ctx->cuts.size());
    if (edge_index < 1 || edge_index > n_edges) throw ValidationError("edge index out of range");

    int cut = (edge_index - 1) / 2;
    bool left = (edge_index % 2 == 1);
    double sign = left ? -1.0 : 1.0; // (-1)^j for the 1-based edge index j

    // selection window: from the adjacent gap midpoint (or +-inf outside)
    double w_lo, w_hi;
    if (left) {
        w_lo = (cut == 0) ? -std::numeric_limits<double>::infinity()
                          : 0.5 * (ctx->cuts[cut - 1].hi + ctx->cuts[cut].lo);
        w_hi = ctx->cuts[cut].hi;
    } else {
        w_lo = ctx->cuts[cut].lo;
        w_hi = (cut + 1 == static_cast<int>(ctx->cuts.size()))
                   ? std::numeric_limits<double>::infinity()
                   : 0.5 * (ctx->cuts[cut].hi + ctx->cuts[cut + 1].lo);
    }

    double scale = std::pow(rho_edge * sample.n, 2.0 / 3.0);
    KernelStats stats;
    double m1 = 0.0, m2 = 0.0;
    std::size_t count = 0;
    for (const auto& ev : sample.eigenvalues) {
        auto lo_it = std::lower_bound(ev.begin(), ev.end(), w_lo);
        auto hi_it = std::upper_bound(ev.begin(), ev.end(), w_hi);
        if (lo_it == hi_it) continue;
        double extreme = left ? *lo_it : *(hi_it - 1);
        double u = sign * scale * (extreme - edge_x);
        m1 += u;
        m2 += u * u;
        ++count;
    }
    if (count < 50) throw ValidationError("too few draws with an eigenvalue near the edge");
    stats.edge_count = count;
    stats.edge_mean = m1 / count;
    stats.edge_var = m2 / count - stats.edge_mean * stats.edge_mean;
    return stats;
}

TwReference tw_reference() {
    nlohmann::json doc = nlohmann::json::parse(generated::kTwReferenceJson);
    if (doc.is_null())
        throw ConfigError("Tracy-Widom reference not generated; run "
                          "scripts/generate_tw_reference.sh before building");
    TwReference ref;
    ref.mean = doc.at("mean").get<double>();
    ref.variance = doc.at("variance").get<double>();
    ref.oracle_n = doc.at("n").get<int>();
    ref.oracle_draws = doc.at("draws").get<int>();
    return ref;
}

} // namespace rmcurve::mc
