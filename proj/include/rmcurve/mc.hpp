#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rmcurve/curve.hpp"

namespace rmcurve::mc {

/// Eigenvalue draws of M = A + H at finite N, where A repeats each source
/// eigenvalue N*eps_i times and H is Hermitian Gaussian with diagonal
/// variance 1/N and off-diagonal component variance 1/(2N) (the convention
/// matching the weight exp(-N tr(M^2/2 - AM))).
struct EnsembleSample {
    int n = 0;
    curve::CurveSpec spec;
    std::uint64_t seed = 0;
    int draws = 0;
    std::vector<std::vector<double>> eigenvalues; // per draw, sorted ascending
};

/// Per-draw randomness is derived from (seed, draw index) by a counter-based
/// stream, so results are identical regardless of thread count.
EnsembleSample sample_matrix(const curve::CurveSpec& spec, int n, std::uint64_t seed,
                             int draws, int max_n = 2048);

struct Histogram {
    std::vector<double> edges;    // bins + 1
    std::vector<double> density;  // normalized: sum(density * width) = 1
    std::size_t total_count = 0;  // eigenvalues inside the range
    std::size_t outside_count = 0;
};

Histogram empirical_density(const EnsembleSample& sample, int bins, double lo, double hi);

/// Maps each eigenvalue in [w_lo, w_hi] to N * integral of rho from the cut
/// edge and pools consecutive differences over draws. The window must sit
/// strictly inside one cut, at least 10% of the cut length from both edges.
std::vector<double> unfold(const EnsembleSample& sample, const curve::DensityProfile& profile,
                           double w_lo, double w_hi);

/// Per-draw unfolded positions for the same window (used for the two-point
/// correlation estimate).
std::vector<std::vector<double>> unfold_positions(const EnsembleSample& sample,
                                                  const curve::DensityProfile& profile,
                                                  double w_lo, double w_hi);

struct KernelStats {
    std::size_t spacing_count = 0;
    double spacing_mean = 0.0;
    double ks_bulk = 0.0;                            // KS vs the Wigner surmise
    std::vector<std::pair<double, double>> two_point; // (r, R2 estimate) on [0,3]
    double edge_mean = 0.0;
    double edge_var = 0.0;
    std::size_t edge_count = 0;
};

/// Wigner-surmise spacing CDF 1 - exp(-4 s^2 / pi).
double wigner_surmise_cdf(double s);

/// KS distance of the pooled spacings against the Wigner surmise; requires
/// at least 1000 spacings. Pass per-draw positions to fill the two-point
/// correlation estimate.
KernelStats bulk_statistics(const std::vector<double>& spacings,
                            const std::vector<std::vector<double>>& positions = {});

/// Rescales the extreme eigenvalue adjacent to edge z_j per draw by
/// (-1)^j (rho_j N)^{2/3} (lambda - z_j) and returns the sample moments.
/// edge_index is 1-based in the z_1 .. z_{2l} ordering; needs >= 50 draws.
KernelStats edge_statistics(const EnsembleSample& sample, int edge_index, double edge_x,
                            double rho_edge);

/// Kolmogorov-Smirnov sup distance of a sorted sample against a reference CDF.
double ks_distance(const std::vector<double>& sorted_sample,
                   const std::function<double(double)>& reference_cdf);

/// Tracy-Widom (GUE) reference moments embedded at build time from the
/// pre-build oracle output (scripts/generate_tw_reference.sh).
struct TwReference {
    double mean = 0.0;
    double variance = 0.0;
    int oracle_n = 0;
    int oracle_draws = 0;
};

TwReference tw_reference();

} // namespace rmcurve::mc
