#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "tailchain/errors.hpp"

namespace tailchain {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
} // namespace detail

/// Seeded random stream with explicit substream derivation.
///
/// Every Monte Carlo replication owns its own stream, derived from
/// (seed, stream index) only. Results are therefore independent of how
/// replications are distributed over worker threads, and a replication
/// may consume a data-dependent number of draws (rejection samplers)
/// without perturbing its neighbours.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed)
        : RandomStream(seed, 0) {}

    RandomStream(std::uint64_t seed, std::uint64_t stream) {
        const std::uint64_t a = detail::splitmix64(seed);
        const std::uint64_t b = detail::splitmix64(a ^ detail::splitmix64(stream ^ 0xA5A5A5A55A5A5A5AULL));
        eng_.seed(b);
    }

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform on [0, 1).
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1), never exactly 0 or 1. Safe under log().
    double uniform_pos() { return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

    /// +1 or -1 with equal probability.
    int rademacher() { return (next_u64() >> 63) ? 1 : -1; }

    /// Standard normal, Marsaglia polar method. The spare deviate is
    /// cached, so a stream's normal sequence depends only on its own
    /// call history.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    /// Gamma(shape, scale 1), exact: Marsaglia-Tsang for shape >= 1,
    /// with the usual boost G(a) = G(a+1) * U^(1/a) below 1.
    double gamma(double shape) {
        if (!(shape > 0.0)) throw ParameterError("gamma: shape must be positive");
        if (shape < 1.0) {
            const double g = gamma(shape + 1.0);
            return g * std::pow(uniform_pos(), 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / (3.0 * std::sqrt(d));
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform_pos();
            if (u < 1.0 - 0.0331 * (x * x) * (x * x)) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace tailchain
