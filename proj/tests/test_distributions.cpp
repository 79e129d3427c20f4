#include <doctest.h>

#include <cmath>
#include <vector>

#include "tailchain/distributions.hpp"
#include "tailchain/rng.hpp"
#include "tailchain/tail_index.hpp"
#include "test_util.hpp"

using namespace tailchain;

TEST_CASE("pareto sampler: inverse-CDF identity and survival boundary") {
    CHECK(pareto_survival(ParetoLaw{2.028}, 1.0) == 1.0);
    RandomStream rng0(1);
    CHECK_THROWS_AS((void)sample_pareto(ParetoLaw{0.0}, rng0), ParameterError);

    // E log Par(kappa) = 1/kappa: closed-form oracle, MC mean within 0.002.
    RandomStream rng(7);
    const ParetoLaw law{2.0};
    double s = 0.0;
    const int n = 1'000'000;
    for (int i = 0; i < n; ++i) s += std::log(sample_pareto(law, rng));
    CHECK(std::abs(s / n - 0.5) < 0.002);
}

TEST_CASE("pareto sampler: empirical survival at fixed points") {
    RandomStream rng(11);
    const ParetoLaw law{2.028};
    const int n = 1'000'000;
    int c15 = 0, c2 = 0, c5 = 0;
    for (int i = 0; i < n; ++i) {
        const double v = sample_pareto(law, rng);
        c15 += v > 1.5;
        c2 += v > 2.0;
        c5 += v > 5.0;
    }
    const auto check = [&](int count, double x) {
        const double p = std::pow(x, -law.index);
        const double se = std::sqrt(p * (1.0 - p) / n);
        CHECK(std::abs(double(count) / n - p) < 3.0 * se);
    };
    check(c15, 1.5);
    check(c2, 2.0);
    check(c5, 5.0);
}

TEST_CASE("tilted innovation: moments and quadrature oracle") {
    const double alpha = 0.5;
    RandomStream rng(3);
    std::vector<double> xs(1'000'000);
    for (auto& x : xs) x = sample_tilted_innovation(TiltedInnovationLaw{alpha}, rng);
    const auto mo = testutil::moments(xs);
    // E eps^2 = 2 alpha + 1 (Gamma mean), symmetric law.
    CHECK(std::abs(mo.var + mo.mean * mo.mean - (2.0 * alpha + 1.0)) < 0.01);
    CHECK(std::abs(mo.skewness) < 0.01);

    // E|eps|^{2a} for alpha = 1.014 against quadrature of the tilted density.
    const double a2 = 1.014;
    const TiltedInnovationLaw law{a2};
    testutil::GL64 gl;
    const double oracle = gl.integrate(
        [&](double u) { return std::pow(u, 2.0 * a2) * tilted_abs_density(law, u); }, 0.0, 60.0,
        96);
    // Same quantity in closed form: 2^a Gamma(2a + 1/2) / Gamma(a + 1/2).
    const double closed = std::exp(a2 * std::log(2.0) + std::lgamma(2.0 * a2 + 0.5) -
                                   std::lgamma(a2 + 0.5));
    CHECK(oracle == doctest::Approx(closed).epsilon(1e-9));
    RandomStream rng2(4);
    double s = 0.0;
    const int n = 1'000'000;
    for (int i = 0; i < n; ++i)
        s += std::pow(std::abs(sample_tilted_innovation(law, rng2)), 2.0 * a2);
    CHECK(std::abs(s / n - oracle) / oracle < 0.02);
}

TEST_CASE("tilted innovation second moment within 3 SE of 2 alpha + 1") {
    const double alpha = 1.478;
    RandomStream rng(5);
    const int n = 1'000'000;
    double s2 = 0.0, s4 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double e = sample_tilted_innovation(TiltedInnovationLaw{alpha}, rng);
        s2 += e * e;
        s4 += e * e * e * e;
    }
    const double m2 = s2 / n;
    const double se = std::sqrt((s4 / n - m2 * m2) / n);
    CHECK(std::abs(m2 - (2.0 * alpha + 1.0)) < 3.0 * se);
    CHECK_THROWS_AS((void)sample_tilted_innovation(TiltedInnovationLaw{0.0}, rng),
                    ParameterError);
}

namespace {

// Independent backward-CDF oracle: Gauss-Legendre panels, no shared code
// with the adaptive-Simpson implementation path.
double backward_cdf_oracle(double x, const GarchParams& p, double alpha) {
    const double t = (1.0 / (x * x) - p.beta1) / p.alpha1;
    const double lo = t > 0.0 ? std::sqrt(t) : 0.0;
    if (lo >= 42.0) return 0.0;
    testutil::GL64 gl;
    const double v = gl.integrate(
        [&](double z) {
            return std::pow(p.alpha1 * z * z + p.beta1, alpha) * std::exp(-0.5 * z * z);
        },
        lo, 42.0, 48);
    return std::sqrt(2.0 / M_PI) * v;
}

} // namespace

TEST_CASE("backward increment CDF: limits, clamping, dual-quadrature value") {
    const GarchParams p{1e-6, 0.15, 0.84};
    const double alpha = solve_tail_index(p).alpha;

    bool clamped = false;
    CHECK(backward_increment_cdf(-0.5, p, alpha, &clamped) == 0.0);
    CHECK(clamped);
    const double upper = backward_support_upper(p);
    CHECK(backward_increment_cdf(upper + 1.0, p, alpha, &clamped) == 1.0);
    CHECK(clamped);

    // Normalization at the endpoint is the tail-index equation itself.
    CHECK(std::abs(backward_increment_cdf(upper, p, alpha) - 1.0) < 1e-8);
    CHECK(backward_increment_cdf(1e-12, p, alpha) == 0.0);

    // Adaptive Simpson (implementation) against Gauss-Legendre (oracle).
    const double impl = backward_increment_cdf(1.0, p, alpha);
    const double oracle = backward_cdf_oracle(1.0, p, alpha);
    CHECK(std::abs(impl - oracle) < 1e-8);

    // Wrong alpha must be rejected as inconsistent.
    CHECK_THROWS_AS((void)backward_increment_cdf(1.0, p, alpha * 1.05), ConsistencyError);
}

TEST_CASE("backward sampler table: round trip, median, Kolmogorov distance") {
    const GarchParams p{1e-6, 0.15, 0.84};
    const double alpha = solve_tail_index(p).alpha;
    const MonotoneCdfTable table = build_backward_sampler(p, alpha);
    CHECK(table.size() >= 4096);
    CHECK(table.values().front() <= 1e-12);
    CHECK(table.values().back() >= 1.0 - 1e-12);

    // inverse(cdf(x)) = x at 1000 random interior points.
    RandomStream rng(17);
    const double lo = table.grid().front(), hi = table.grid().back();
    for (int i = 0; i < 1000; ++i) {
        const double x = lo + (hi - lo) * (0.001 + 0.998 * rng.uniform());
        const double back = table.inverse(table.cdf(x));
        CHECK(std::abs(back - x) / x < 1e-6);
    }

    // Median against bisection on the quadrature CDF.
    double mlo = lo, mhi = hi;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (mlo + mhi);
        (backward_increment_cdf(mid, p, alpha) < 0.5 ? mlo : mhi) = mid;
    }
    CHECK(std::abs(table.inverse(0.5) - 0.5 * (mlo + mhi)) / table.inverse(0.5) < 1e-6);

    // Deterministic K-distance of the interpolant against the quadrature
    // CDF on a logit-dense grid.
    double kdet = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double t = -27.0 + 54.0 * i / 400.0;
        const double x = table.inverse(1.0 / (1.0 + std::exp(-t)));
        kdet = std::max(kdet, std::abs(table.cdf(x) - backward_increment_cdf(x, p, alpha)));
    }
    CHECK(kdet < 1e-5);

    // Empirical K-distance at 1e6 draws (table CDF as proxy, bounded above
    // by the deterministic gap just checked).
    std::vector<double> draws(1'000'000);
    RandomStream rng2(23);
    for (auto& d : draws) d = table.sample(rng2);
    const double kemp =
        testutil::kolmogorov_vs_cdf(std::move(draws), [&](double x) { return table.cdf(x); });
    CHECK(kemp + kdet < 0.002);
}

TEST_CASE("backward sampler: ARCH(1) unbounded support") {
    const GarchParams p{1e-6, 0.99, 0.0};
    const double alpha = solve_tail_index(p).alpha;
    const MonotoneCdfTable table = build_backward_sampler(p, alpha);
    // Support (0, inf); the last node must carry all but < 1e-10 of mass.
    CHECK(1.0 - table.values().back() < 1e-10);
    CHECK(backward_increment_cdf(1e9, p, alpha) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("monotone cdf table validates its invariants") {
    CHECK_THROWS_AS(MonotoneCdfTable({1.0, 0.5}, {0.0, 1.0}), ParameterError);
    CHECK_THROWS_AS(MonotoneCdfTable({1.0, 2.0}, {0.5, 1.0}), ParameterError);
    CHECK_THROWS_AS(MonotoneCdfTable({1.0, 2.0}, {0.0, 0.5}), ParameterError);
}
