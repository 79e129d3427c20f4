#include <doctest.h>

#include <cmath>
#include <vector>

#include "tailchain/garch_tailchain.hpp"
#include "tailchain/tail_index.hpp"
#include "test_util.hpp"

using namespace tailchain;

namespace {
const GarchParams kParams{1e-6, 0.15, 0.84};
} // namespace

TEST_CASE("one-sided chain starts at its Pareto magnitude") {
    const TailIndex ti = solve_tail_index(kParams);
    const GarchTailChainSampler sampler(kParams, ti);
    RandomStream rng(101);
    for (int i = 0; i < 1000; ++i) {
        const auto s = sampler.sample(0, 0, Conditioning::one_sided, rng);
        CHECK(s.zeta(0) == s.zeta0_mag);
        CHECK(s.zeta(0) >= 1.0);
    }
}

TEST_CASE("|zeta_0| survival matches Par(2 alpha)") {
    const GarchParams p{1e-6, 0.99, 0.0};
    const TailIndex ti = solve_tail_index(p);
    CHECK(std::abs(ti.alpha - 1.014) < 0.002);
    const GarchTailChainSampler sampler(p, ti);
    RandomStream rng(103);
    const int n = 1'000'000;
    int hits = 0;
    for (int i = 0; i < n; ++i)
        hits += std::abs(sampler.sample(0, 0, Conditioning::two_sided, rng).zeta(0)) > 2.0;
    const double target = std::pow(2.0, -2.0 * ti.alpha);
    const double se = std::sqrt(target * (1.0 - target) / n);
    CHECK(std::abs(double(hits) / n - target) < 3.0 * se);
}

TEST_CASE("ratio law |zeta_1 / zeta_0| matches the component expression") {
    const TailIndex ti = solve_tail_index(kParams);
    const GarchTailChainSampler sampler(kParams, ti);
    RandomStream rng(107);
    const int n = 100000;
    std::vector<double> from_chain;
    from_chain.reserve(n);
    for (int i = 0; i < n; ++i) {
        const auto s = sampler.sample(0, 1, Conditioning::one_sided, rng);
        from_chain.push_back(std::abs(s.zeta(1) / s.zeta(0)));
    }
    // Component resampling oracle: sqrt(a1 e1^2 + b1) |e2| / |e1| with a
    // fresh tilted e1 and standard normal e2.
    RandomStream rng2(109);
    std::vector<double> oracle;
    oracle.reserve(4 * n);
    for (int i = 0; i < 4 * n; ++i) {
        const double e1 = sample_tilted_innovation(TiltedInnovationLaw{ti.alpha}, rng2);
        const double e2 = rng2.normal();
        oracle.push_back(std::sqrt(kParams.alpha1 * e1 * e1 + kParams.beta1) * std::abs(e2) /
                         std::abs(e1));
    }
    CHECK(testutil::kolmogorov_two_sample(std::move(from_chain), std::move(oracle)) < 0.01);
}

TEST_CASE("backward increments stay strictly inside the support") {
    const TailIndex ti = solve_tail_index(kParams);
    const GarchTailChainSampler sampler(kParams, ti);
    const double upper = backward_support_upper(kParams);
    RandomStream rng(113);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const auto s = sampler.sample(100, 0, Conditioning::one_sided, rng);
        for (const double a : s.bwd_increments) {
            CHECK(a > 0.0);
            worst = std::max(worst, a);
        }
    }
    CHECK(worst < upper); // 1e6 draws in total
}

TEST_CASE("chain algebra holds and detects perturbations") {
    const TailIndex ti = solve_tail_index(kParams);
    const GarchTailChainSampler sampler(kParams, ti);
    RandomStream rng(127);
    for (int i = 0; i < 200; ++i) {
        auto s = sampler.sample(3, 3, Conditioning::two_sided, rng);
        CHECK(chain_algebra_check(s));
        // eq-of-products cross-check at the path ends.
        CHECK(zeta_closed_product(s, 3) == doctest::Approx(s.zeta(3)).epsilon(1e-12));
        CHECK(zeta_closed_product(s, -3) == doctest::Approx(s.zeta(-3)).epsilon(1e-12));
        auto broken = s;
        broken.sigma_path[2] *= 1.0 + 1e-6;
        CHECK_FALSE(chain_algebra_check(broken));
    }
}

TEST_CASE("deterministic reconstruction from identical seeds") {
    const TailIndex ti = solve_tail_index(kParams);
    const GarchTailChainSampler sampler(kParams, ti);
    RandomStream r1(131), r2(131);
    const auto a = sampler.sample(50, 50, Conditioning::one_sided, r1);
    const auto b = sampler.sample(50, 50, Conditioning::one_sided, r2);
    REQUIRE(a.zeta_path.size() == b.zeta_path.size());
    for (std::size_t i = 0; i < a.zeta_path.size(); ++i) {
        CHECK(a.zeta_path[i] == b.zeta_path[i]);
        CHECK(a.sigma_path[i] == b.sigma_path[i]);
    }
}

TEST_CASE("forward innovations are normal, the tilted start is not") {
    const GarchParams p{1e-6, 0.99, 0.0};
    const TailIndex ti = solve_tail_index(p);
    const GarchTailChainSampler sampler(p, ti);
    RandomStream rng(137);
    std::vector<double> fwd, tilted;
    fwd.reserve(1'000'000);
    tilted.reserve(250000);
    while (fwd.size() < 1'000'000) {
        const auto s = sampler.sample(0, 4, Conditioning::one_sided, rng);
        for (const double e : s.fwd_innovations) fwd.push_back(e);
        tilted.push_back(s.eps1);
    }
    const auto mf = testutil::moments(fwd);
    CHECK(std::abs(mf.m4 - 3.0) < 0.05);
    const auto mt = testutil::moments(tilted);
    const double a = ti.alpha;
    const double expected4 = (2.0 * a + 1.0) * (2.0 * a + 3.0);
    // Var of the 4th-moment estimate from Gamma moments; 5 SE margin.
    const double m8 = 16.0 * std::exp(std::lgamma(a + 0.5 + 4.0) - std::lgamma(a + 0.5));
    const double se = std::sqrt((m8 - expected4 * expected4) / double(tilted.size()));
    CHECK(std::abs(mt.m4 - expected4) < 5.0 * se);
    CHECK(std::abs(mt.m4 - 3.0) > 10.0 * se); // clearly distinguishes the start
}

TEST_CASE("two-sided conditioning randomizes S_0, one-sided pins it") {
    const TailIndex ti = solve_tail_index(kParams);
    const GarchTailChainSampler sampler(kParams, ti);
    RandomStream rng(139);
    int plus = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const auto s2 = sampler.sample(0, 0, Conditioning::two_sided, rng);
        plus += s2.sign(0) > 0;
    }
    CHECK(std::abs(double(plus) / n - 0.5) < 0.02);
}

TEST_CASE("sampler validates its inputs") {
    const TailIndex ti = solve_tail_index(kParams);
    CHECK_THROWS_AS(GarchTailChainSampler(GarchParams{1e-6, 0.6, 0.5}, ti), ParameterError);
    CHECK_THROWS_AS(GarchTailChainSampler(kParams, TailIndex{ti.alpha * 1.1, 0.0}),
                    ConsistencyError);
    RandomStream rng(149);
    const GarchTailChainSampler sampler(kParams, ti);
    CHECK_THROWS_AS((void)sampler.sample(-1, 0, Conditioning::one_sided, rng), ParameterError);
}
