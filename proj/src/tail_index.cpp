#include "tailchain/tail_index.hpp"

#include <cmath>

#include "tailchain/quadrature.hpp"

namespace tailchain {

namespace {
constexpr double kEulerMascheroni = 0.5772156649015329;
constexpr double kLn2 = 0.6931471805599453;
} // namespace

void validate(const GarchParams& params) {
    if (!(params.alpha0 > 0.0))
        throw ParameterError("GarchParams: alpha0 must be positive");
    if (!(params.alpha1 > 0.0))
        throw ParameterError("GarchParams: alpha1 must be positive");
    if (!(params.beta1 >= 0.0))
        throw ParameterError("GarchParams: beta1 must be nonnegative");
}

void validate_stationary(const GarchParams& params) {
    validate(params);
    if (!params.stationary())
        throw ParameterError("GarchParams: alpha1 + beta1 < 1 required for stationarity");
}

double abs_normal_moment(double two_alpha) {
    if (!(two_alpha > 0.0))
        throw ParameterError("abs_normal_moment: exponent must be positive");
    const double half = 0.5 * two_alpha;
    return std::exp(half * kLn2 + std::lgamma(half + 0.5) - 0.5 * std::log(M_PI));
}

double garch_moment(const GarchParams& params, double a) {
    if (params.beta1 == 0.0)
        return std::exp(a * std::log(params.alpha1)) * abs_normal_moment(2.0 * a);
    const double a1 = params.alpha1, b1 = params.beta1;
    return expect_standard_normal(
        [a1, b1, a](double e) { return std::pow(a1 * e * e + b1, a); });
}

double log_drift(const GarchParams& params) {
    if (!(params.alpha1 > 0.0))
        throw ParameterError("log_drift: alpha1 must be positive");
    if (params.beta1 == 0.0) {
        // E log(a1 eps^2) = log a1 + E log eps^2, E log eps^2 = -(gamma + log 2).
        return std::log(params.alpha1) - (kEulerMascheroni + kLn2);
    }
    const double a1 = params.alpha1, b1 = params.beta1;
    return expect_standard_normal(
        [a1, b1](double e) { return std::log(a1 * e * e + b1); });
}

TailIndex solve_tail_index(const GarchParams& params) {
    validate(params);
    const double drift = log_drift(params);
    if (!(drift < 0.0))
        throw ParameterError("solve_tail_index: E[log(alpha1 eps^2 + beta1)] >= 0, "
                             "no positive tail index exists");

    const auto g = [&params](double a) { return garch_moment(params, a) - 1.0; };

    double lo = 1e-6;
    double hi = 1.0;
    double glo = g(lo);
    double ghi = g(hi);
    // g(0+) < 0 by the drift condition; expand until the sign changes.
    while (ghi <= 0.0) {
        lo = hi;
        glo = ghi;
        hi *= 2.0;
        if (hi > 200.0)
            throw NumericalError("solve_tail_index: no finite tail index below a = 200");
        ghi = g(hi);
    }
    if (glo > 0.0)
        throw NumericalError("solve_tail_index: bracket failure at the lower end");

    // Bisection with a secant refinement inside the shrinking bracket.
    double a = 0.5 * (lo + hi);
    double ga = g(a);
    for (int it = 0; it < 200 && std::abs(ga) > 1e-10; ++it) {
        if (ga > 0.0) {
            hi = a;
            ghi = ga;
        } else {
            lo = a;
            glo = ga;
        }
        double cand = lo - glo * (hi - lo) / (ghi - glo);
        if (!(cand > lo && cand < hi)) cand = 0.5 * (lo + hi);
        a = cand;
        ga = g(a);
    }
    if (std::abs(ga) > 1e-9)
        throw NumericalError("solve_tail_index: failed to reach residual 1e-9");
    return TailIndex{a, std::abs(ga)};
}

} // namespace tailchain
