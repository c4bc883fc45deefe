#pragma once

#include <cmath>
#include <cstdint>

namespace rmcurve::detail {

// Fully pinned splitmix64 stream; keeps draws reproducible across platforms
// and independent of the standard library's distribution internals.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    double uniform() { // in (0, 1)
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1p-53;
    }

    double normal() { // Box-Muller, one value per call pair kept simple
        double u1 = uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }
};

inline std::uint64_t stream_key(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 s(seed ^ (0xD1B54A32D192ED03ULL * (index + 1)));
    return s.next();
}

// Marsaglia-Tsang gamma(alpha, 1) for alpha >= 1.
inline double gamma_sample(SplitMix64& rng, double alpha) {
    double d = alpha - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = rng.normal();
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        double u = rng.uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

} // namespace rmcurve::detail
