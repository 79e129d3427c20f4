#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "tailchain/errors.hpp"

namespace tailchain {

namespace detail {

template <class F>
double adaptive_simpson_rec(F& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

/// Adaptive Simpson quadrature with absolute tolerance. Depth-capped;
/// integrable endpoint singularities converge within the cap.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double abs_tol, int max_depth = 52) {
    if (!(b > a)) return 0.0;
    const double fa = f(a);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

/// Gauss-Legendre rule on [-1, 1], nodes by Newton on the recurrence.
class GaussLegendre {
public:
    explicit GaussLegendre(int n);

    template <class F>
    double integrate(F&& f, double a, double b) const {
        const double c = 0.5 * (b - a);
        const double d = 0.5 * (b + a);
        double sum = 0.0;
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            sum += weights_[i] * f(c * nodes_[i] + d);
        return c * sum;
    }

    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

/// Gauss-Hermite rule for weight exp(-x^2) on the real line.
class GaussHermite {
public:
    explicit GaussHermite(int n);

    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }

    /// E[g(Z)] for Z ~ N(0,1).
    template <class G>
    double expect_normal(G&& g) const {
        constexpr double inv_sqrt_pi = 0.5641895835477563; // 1/sqrt(pi)
        constexpr double sqrt2 = 1.4142135623730951;
        double sum = 0.0;
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            sum += weights_[i] * g(sqrt2 * nodes_[i]);
        return inv_sqrt_pi * sum;
    }

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

/// E[g(Z)], Z standard normal, by Gauss-Hermite with node doubling until
/// the result moves by less than 1e-12 (absolute, relative for large values).
double expect_standard_normal(const std::function<double(double)>& g);

} // namespace tailchain
