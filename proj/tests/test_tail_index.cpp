#include <doctest.h>

#include <cmath>

#include "tailchain/rng.hpp"
#include "tailchain/tail_index.hpp"
#include "test_util.hpp"

using namespace tailchain;

namespace {
// Paper survey rows: (alpha1, beta1) -> alpha.
struct Row {
    double a1, b1, alpha;
};
constexpr Row kRows[] = {
    {0.99, 0.0, 1.014}, {0.15, 0.84, 1.478}, {0.11, 0.88, 1.838}, {0.09, 0.90, 2.203},
    {0.07, 0.92, 2.885}, {0.04, 0.95, 5.991}, {0.072, 0.920, 2.476},
};
} // namespace

TEST_CASE("tail index reproduces the published values") {
    CHECK(solve_tail_index({1e-6, 0.99, 0.0}).alpha == doctest::Approx(1.014).epsilon(0.001));
    CHECK(solve_tail_index({1e-6, 0.072, 0.920}).alpha == doctest::Approx(2.476).epsilon(0.001));
    // E[eps^2] = 1 forces the root exactly at 1 for (1, 0).
    CHECK(solve_tail_index({1e-6, 1.0, 0.0}).alpha == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("tail index self-consistency and monotonicity across the survey rows") {
    double prev_alpha = 0.0;
    double prev_a1 = 10.0;
    // Rows ordered by decreasing alpha1 give strictly increasing alpha.
    for (const Row& r : kRows) {
        const GarchParams p{1e-6, r.a1, r.b1};
        const TailIndex ti = solve_tail_index(p);
        CHECK(std::abs(ti.alpha - r.alpha) < 0.005);
        CHECK(ti.residual < 1e-9);
        CHECK(std::abs(garch_moment(p, ti.alpha) - 1.0) < 1e-9);
        if (prev_alpha > 0.0) {
            CHECK(r.a1 < prev_a1);
            CHECK(ti.alpha > prev_alpha);
        }
        prev_alpha = ti.alpha;
        prev_a1 = r.a1;
    }
}

TEST_CASE("abs_normal_moment closed form") {
    CHECK(abs_normal_moment(2.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(abs_normal_moment(1.0) == doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(1e-12));

    // Quadrature oracle for a fractional exponent: 2 * Int_0^inf z^k phi(z) dz.
    const double k = 2.0 * 1.478;
    testutil::GL64 gl;
    const double oracle = gl.integrate(
        [k](double z) {
            return 2.0 * std::pow(z, k) * std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
        },
        0.0, 40.0, 64);
    CHECK(abs_normal_moment(k) == doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("abs_normal_moment satisfies E|e|^{k+2} = (k+1) E|e|^k") {
    for (const double k : {1.0, 2.0, 3.0})
        CHECK(abs_normal_moment(k + 2.0) == doctest::Approx((k + 1.0) * abs_normal_moment(k)).epsilon(1e-10));
}

TEST_CASE("log drift: ARCH(1) constant, sign checks, Monte Carlo oracle") {
    // E log eps^2 = -(gamma + log 2).
    const double expected = -1.2703628454614782;
    CHECK(log_drift({1e-6, 1.0, 0.0}) == doctest::Approx(expected).epsilon(1e-10));

    CHECK(log_drift({1e-6, 0.04, 0.95}) < 0.0);
    CHECK(log_drift({1e-6, 10.0, 0.99}) > 0.0);
    CHECK_THROWS_AS((void)solve_tail_index({1e-6, 10.0, 0.99}), ParameterError);

    // 1e7-draw oracle for a smooth (beta1 > 0) case.
    const GarchParams p{1e-6, 0.04, 0.95};
    RandomStream rng(1234);
    double sum = 0.0, sq = 0.0;
    const long long n = 10'000'000;
    for (long long i = 0; i < n; ++i) {
        const double e = rng.normal();
        const double v = std::log(p.alpha1 * e * e + p.beta1);
        sum += v;
        sq += v * v;
    }
    const double mean = sum / double(n);
    const double se = std::sqrt((sq / double(n) - mean * mean) / double(n));
    CHECK(std::abs(log_drift(p) - mean) < 4.0 * se);
}

TEST_CASE("solver rejects invalid parameters") {
    CHECK_THROWS_AS((void)solve_tail_index({0.0, 0.5, 0.0}), ParameterError);
    CHECK_THROWS_AS((void)solve_tail_index({1e-6, 0.0, 0.5}), ParameterError);
}
