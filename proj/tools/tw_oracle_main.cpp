// Tracy-Widom (GUE) moment oracle: samples the largest eigenvalue of the
// pure Gaussian unitary ensemble at large N through the Hermite tridiagonal
// model (exact in law, eigenvalues only) and writes the rescaled moments
// N^{2/3} (lambda_max - 2) as a JSON reference. Run by
// scripts/generate_tw_reference.sh before building the test suite.

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <thread>
#include <vector>

#include "detail/rng.hpp"
#include "detail/threads.hpp"

namespace {

// Largest eigenvalue of one GUE draw with weight exp(-N tr M^2/2):
// tridiagonal reduction has N(0,1) diagonal and chi_{2(n-j)}/sqrt(2)
// off-diagonal before the 1/sqrt(N) rescaling.
double largest_eigenvalue(int n, std::uint64_t seed, int draw) {
    rmcurve::detail::SplitMix64 rng(rmcurve::detail::stream_key(seed, draw));
    Eigen::VectorXd diag(n), sub(n - 1);
    for (int i = 0; i < n; ++i) diag(i) = rng.normal();
    for (int j = 0; j < n - 1; ++j) {
        double dof = 2.0 * (n - 1 - j);
        sub(j) = std::sqrt(rmcurve::detail::gamma_sample(rng, 0.5 * dof));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    double scale = 1.0 / std::sqrt(static_cast<double>(n));
    return es.eigenvalues()(n - 1) * scale;
}

} // namespace

int main(int argc, char** argv) {
    int n = 1000;
    int draws = 10000;
    std::uint64_t seed = 484813;
    const char* out_path = "data/tw_reference.json";
    for (int i = 1; i + 1 < argc; i += 2) {
        if (!std::strcmp(argv[i], "--n")) n = std::atoi(argv[i + 1]);
        else if (!std::strcmp(argv[i], "--draws")) draws = std::atoi(argv[i + 1]);
        else if (!std::strcmp(argv[i], "--seed")) seed = std::strtoull(argv[i + 1], nullptr, 10);
        else if (!std::strcmp(argv[i], "--out")) out_path = argv[i + 1];
        else {
            std::fprintf(stderr, "usage: tw_oracle [--n N] [--draws D] [--seed S] [--out F]\n");
            return 1;
        }
    }

    std::vector<double> rescaled(draws);
    int workers = std::min(rmcurve::detail::worker_threads(), draws);
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (int d = w; d < draws; d += workers) {
                double lmax = largest_eigenvalue(n, seed, d);
                rescaled[d] = std::pow(static_cast<double>(n), 2.0 / 3.0) * (lmax - 2.0);
            }
        });
    for (auto& t : pool) t.join();

    double m1 = 0.0, m2 = 0.0;
    for (double u : rescaled) m1 += u;
    m1 /= draws;
    for (double u : rescaled) m2 += (u - m1) * (u - m1);
    m2 /= draws;

    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::fprintf(stderr, "cannot write %s\n", out_path);
        return 1;
    }
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "{\n  \"mean\": %.10f,\n  \"variance\": %.10f,\n  \"n\": %d,\n"
                  "  \"draws\": %d,\n  \"seed\": %llu\n}\n",
                  m1, m2, n, draws, static_cast<unsigned long long>(seed));
    out << buf;
    std::printf("tw_oracle: n=%d draws=%d mean=%.6f variance=%.6f -> %s\n", n, draws, m1, m2,
                out_path);
    return 0;
}
