#include <doctest.h>

#include <cmath>
#include <vector>

#include "tailchain/estimators.hpp"
#include "tailchain/estimators_detail.hpp"
#include "tailchain/garch_tailchain.hpp"
#include "test_util.hpp"

using namespace tailchain;

namespace {
const GarchParams kArch{1e-6, 0.99, 0.0};
const GarchParams kFitted{1e-6, 0.072, 0.920};

/// Forward increments identically zero: the chain dies instantly.
struct DeadWalker {
    using Step = detail::GarchWalker::Step;
    void init(RandomStream& rng) { (void)rng.uniform_pos(); }
    Step forward(RandomStream& rng) {
        (void)rng.uniform();
        return {-std::numeric_limits<double>::infinity(), 1};
    }
    Step backward(RandomStream& rng) { return forward(rng); }
};
} // namespace

TEST_CASE("walker layout matches the struct sampler draw for draw") {
    const TailIndex ti = solve_tail_index(kFitted);
    const GarchTailChainSampler sampler(kFitted, ti);
    detail::GarchWalker walker{&sampler.params(), &sampler.backward_table(), sampler.alpha()};
    for (std::uint64_t idx = 0; idx < 50; ++idx) {
        RandomStream r1(977, idx), r2(977, idx);
        const auto s = sampler.sample(8, 8, Conditioning::one_sided, r1);
        auto w = walker;
        w.init(r2);
        for (int t = 1; t <= 8; ++t) {
            const auto step = w.forward(r2);
            const double lz = std::log(std::abs(s.zeta(t)));
            CHECK(step.sign == s.sign(t));
            CHECK(step.log_zeta == doctest::Approx(lz).epsilon(1e-12));
        }
        for (int t = 1; t <= 8; ++t) {
            const auto step = w.backward(r2);
            CHECK(step.sign == s.sign(-t));
            CHECK(step.log_zeta == doctest::Approx(std::log(std::abs(s.zeta(-t)))).epsilon(1e-12));
        }
    }
}

TEST_CASE("theta against the published ARCH and near-integrated rows") {
    const TailIndex ti = solve_tail_index(kArch);
    const GarchTailChainSampler sampler(kArch, ti);
    const auto r = estimate_theta(sampler, 500, 10000, 42);
    CHECK(std::abs(r.estimate - 0.570) < 0.025);
    CHECK(r.ci_lo <= r.estimate);
    CHECK(r.ci_hi >= r.estimate);
    CHECK(r.std_error < 0.5 / std::sqrt(10000.0) + 1e-12);

    const GarchParams p{1e-6, 0.04, 0.95};
    const auto r2 = estimate_theta(p, solve_tail_index(p), 500, 10000, 42);
    CHECK(std::abs(r2.estimate - 0.854) < 0.02);
}

TEST_CASE("degenerate stub law gives theta = 1") {
    const auto counts = detail::mc_reduce<detail::HitCounts>(
        500, 1, [](long long i) { return detail::theta_path(DeadWalker{}, 100, 1, i); });
    CHECK(counts.hits == 500);
}

TEST_CASE("chi: conditioning lag, published values") {
    const TailIndex ti = solve_tail_index(kArch);
    const GarchTailChainSampler sampler(kArch, ti);
    CHECK(estimate_chi(sampler, 0, 10000, 42).estimate == 1.0);
    CHECK(std::abs(estimate_chi(sampler, 1, 10000, 42).estimate - 0.213) < 0.015);

    const TailIndex tif = solve_tail_index(kFitted);
    CHECK(std::abs(estimate_chi(kFitted, tif, 3, 10000, 42).estimate - 0.027) < 0.01);
}

TEST_CASE("gamma: published values, m = 0 equals chi exactly") {
    const TailIndex ti = solve_tail_index(kArch);
    const GarchTailChainSampler sampler(kArch, ti);
    const auto g1 = estimate_gamma(sampler, 1, 500, 10000, 42);
    CHECK(std::abs(g1.estimate - 0.251) < 0.02);

    const GarchParams p{1e-6, 0.07, 0.92};
    const TailIndex tip = solve_tail_index(p);
    const auto g3 = estimate_gamma(p, tip, 3, 500, 10000, 42);
    CHECK(std::abs(g3.estimate - 0.053) < 0.01);

    for (const int h : {1, 2, 3}) {
        const auto gamma0 = estimate_gamma(sampler, h, 0, 5000, 97);
        const auto chi = estimate_chi(sampler, h, 5000, 97);
        CHECK(gamma0.estimate == chi.estimate); // exact, same streams
    }
}

TEST_CASE("theta is monotone in m on shared seeds, exactly") {
    const TailIndex ti = solve_tail_index(kFitted);
    const GarchTailChainSampler sampler(kFitted, ti);
    double prev = 2.0;
    for (const int m : {5, 20, 100, 400}) {
        const double est = estimate_theta(sampler, m, 4000, 11).estimate;
        CHECK(est <= prev);
        prev = est;
    }
}

TEST_CASE("chi values respect the loose cluster-mass bound for the thin-tail row") {
    const GarchParams p{1e-6, 0.04, 0.95};
    const TailIndex ti = solve_tail_index(p);
    const GarchTailChainSampler sampler(p, ti);
    const auto theta = estimate_theta(sampler, 500, 10000, 42);
    for (const int h : {1, 2, 3}) {
        const auto chi = estimate_chi(sampler, h, 10000, 42);
        CHECK(chi.estimate <= 1.0 - theta.estimate + 5.0 * theta.std_error);
    }
}

TEST_CASE("reports are bit-identical across worker counts") {
    const TailIndex ti = solve_tail_index(kFitted);
    const GarchTailChainSampler sampler(kFitted, ti);
    const auto t1 = estimate_theta(sampler, 50, 3000, 5, 1);
    const auto t3 = estimate_theta(sampler, 50, 3000, 5, 3);
    const auto t8 = estimate_theta(sampler, 50, 3000, 5, 8);
    CHECK(t1.estimate == t3.estimate);
    CHECK(t1.estimate == t8.estimate);
    CHECK(t1.std_error == t8.std_error);
    const auto g1 = estimate_gamma(sampler, 2, 50, 3000, 5, 1);
    const auto g5 = estimate_gamma(sampler, 2, 50, 3000, 5, 5);
    CHECK(g1.estimate == g5.estimate);
    CHECK(g1.denominator == g5.denominator);
}

TEST_CASE("estimator preconditions") {
    const TailIndex ti = solve_tail_index(kArch);
    const GarchTailChainSampler sampler(kArch, ti);
    CHECK_THROWS_AS((void)estimate_theta(sampler, 0, 1000, 1), ParameterError);
    CHECK_THROWS_AS((void)estimate_theta(sampler, 10, 50, 1), ParameterError);
    CHECK_THROWS_AS((void)estimate_gamma(sampler, 0, 10, 1000, 1), ParameterError);
}

TEST_CASE("table1 runs a selected row") {
    const GarchParams row{1e-6, 0.072, 0.920};
    const auto rows = table1(2000, 100, 42, 1, std::span<const GarchParams>(&row, 1));
    REQUIRE(rows.size() == 1);
    CHECK(std::abs(rows[0].ti.alpha - 2.476) < 0.005);
    CHECK(rows[0].chi.size() == 3);
    CHECK(rows[0].gamma.size() == 3);
    CHECK(rows[0].theta.estimate > 0.15);
    CHECK(rows[0].theta.estimate < 0.5);
}

namespace {
ReturnSeries series_from(std::vector<double> v) {
    ReturnSeries s;
    s.values = std::move(v);
    s.source = "synthetic";
    return s;
}
} // namespace

TEST_CASE("blocks estimator: i.i.d. data has extremal index 1") {
    RandomStream rng(211);
    std::vector<double> xs(100000);
    for (auto& x : xs) x = std::pow(rng.uniform_pos(), -1.0); // Par(1)
    const auto r = blocks_estimator(series_from(std::move(xs)), 100, 0.99);
    CHECK(std::abs(r.estimate - 1.0) < 0.1);
}

TEST_CASE("blocks estimator: moving maximum of Frechet noise has theta 1/2") {
    RandomStream rng(223);
    const int n = 100000;
    std::vector<double> z(n + 1), xs(n);
    for (auto& v : z) v = -1.0 / std::log(rng.uniform_pos()); // Frechet(1)
    for (int i = 0; i < n; ++i) xs[i] = std::max(z[i], z[i + 1]);

    // Brute-force oracle: extremal index ~ 1 / mean cluster size, clusters
    // separated by a full below-threshold gap of one block.
    std::vector<double> sorted(xs);
    std::sort(sorted.begin(), sorted.end());
    const double u = sorted[std::size_t(0.99 * n)];
    long long exceed = 0, clusters = 0;
    int gap = 1000000;
    for (const double v : xs) {
        if (v > u) {
            ++exceed;
            if (gap >= 100) ++clusters;
            gap = 0;
        } else
            ++gap;
    }
    const double oracle = double(clusters) / double(exceed);
    CHECK(std::abs(oracle - 0.5) < 0.1);

    const auto r = blocks_estimator(series_from(std::move(xs)), 100, 0.99);
    CHECK(std::abs(r.estimate - 0.5) < 0.1);
    CHECK(std::abs(r.estimate - oracle) < 0.1);
}

TEST_CASE("blocks estimator: degenerate and invalid inputs") {
    CHECK_THROWS_AS((void)blocks_estimator(series_from(std::vector<double>(5000, 3.25)), 100, 0.95),
                    NumericalError);
    CHECK_THROWS_AS((void)blocks_estimator(series_from({1.0, 2.0, 3.0}), 100, 0.95),
                    ParameterError);
    RandomStream rng(227);
    std::vector<double> xs(5000);
    for (auto& x : xs) x = rng.normal();
    CHECK_THROWS_AS((void)blocks_estimator(series_from(std::move(xs)), 100, 0.3), ParameterError);
}
