#include "tailchain/quadrature.hpp"

#include <array>
#include <cmath>
#include <memory>
#include <mutex>

namespace tailchain {

GaussLegendre::GaussLegendre(int n) {
    if (n < 2) throw ParameterError("GaussLegendre: need at least 2 nodes");
    nodes_.assign(n, 0.0);
    weights_.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-based initial guess, then Newton on P_n.
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        nodes_[i] = -z;
        nodes_[n - 1 - i] = z;
        const double w = 2.0 / ((1.0 - z * z) * pp * pp);
        weights_[i] = w;
        weights_[n - 1 - i] = w;
    }
}

GaussHermite::GaussHermite(int n) {
    if (n < 2) throw ParameterError("GaussHermite: need at least 2 nodes");
    nodes_.assign(n, 0.0);
    weights_.assign(n, 0.0);
    const double pi_m4 = 0.7511255444649425; // pi^{-1/4}
    const int m = (n + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < m; ++i) {
        // Standard initial guesses for the descending positive roots.
        if (i == 0) {
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        } else if (i == 1) {
            z -= 1.14 * std::pow(double(n), 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * nodes_[0];
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * nodes_[1];
        } else {
            z = 2.0 * z - nodes_[i - 2];
        }
        double pp = 0.0;
        for (int it = 0; it < 200; ++it) {
            double p1 = pi_m4, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        nodes_[i] = z;
        nodes_[n - 1 - i] = -z;
        weights_[i] = 2.0 / (pp * pp);
        weights_[n - 1 - i] = weights_[i];
    }
}

double expect_standard_normal(const std::function<double(double)>& g) {
    static const std::array<int, 5> sizes = {64, 128, 256, 512, 1024};
    static std::array<std::unique_ptr<GaussHermite>, 5> rules;
    static std::mutex mtx;
    {
        std::lock_guard<std::mutex> lock(mtx);
        for (std::size_t i = 0; i < sizes.size(); ++i)
            if (!rules[i]) rules[i] = std::make_unique<GaussHermite>(sizes[i]);
    }
    double prev = rules[0]->expect_normal(g);
    for (std::size_t i = 1; i < sizes.size(); ++i) {
        const double cur = rules[i]->expect_normal(g);
        if (std::abs(cur - prev) <= 1e-12 * std::max(1.0, std::abs(cur))) return cur;
        prev = cur;
    }
    return prev;
}

} // namespace tailchain
