#pragma once

#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "tailchain/distributions.hpp"
#include "tailchain/rng.hpp"
#include "tailchain/tail_index.hpp"

namespace tailchain::detail {

/// Streaming one-sided tail-chain walk in log space. Draw order matches
/// GarchTailChainSampler::sample exactly (asserted by a unit test):
/// Pareto uniform, Gamma, sign, then (normal, sign) per forward step,
/// then (uniform, sign) per backward step. All forward steps of a path
/// must be taken before its backward steps.
struct GarchWalker {
    const GarchParams* params = nullptr;
    const MonotoneCdfTable* table = nullptr;
    double alpha = 0.0;

    double lsig_fwd = 0.0;
    double lsig_bwd = 0.0;
    double pending_sq = 0.0;

    struct Step {
        double log_zeta;
        int sign;
        bool exceeds() const { return sign > 0 && log_zeta > 0.0; }
    };

    void init(RandomStream& rng) {
        const double two_alpha = 2.0 * alpha;
        const double lzeta0 = -std::log(rng.uniform_pos()) / two_alpha;
        double g = rng.gamma(alpha + 0.5);
        while (g <= 0.0) g = rng.gamma(alpha + 0.5);
        const double eps1_sq = 2.0 * g;
        (void)rng.rademacher(); // sign of the tilted innovation
        lsig_fwd = lzeta0 - 0.5 * std::log(eps1_sq);
        lsig_bwd = lsig_fwd;
        pending_sq = eps1_sq;
    }

    Step forward(RandomStream& rng) {
        lsig_fwd += 0.5 * std::log(params->alpha1 * pending_sq + params->beta1);
        const double e = rng.normal();
        const int s = rng.rademacher();
        pending_sq = e * e;
        return {lsig_fwd + std::log(std::abs(e)), s};
    }

    Step backward(RandomStream& rng) {
        const double a = table->sample(rng);
        const int s = rng.rademacher();
        lsig_bwd += std::log(a);
        const double w = std::max(0.0, 1.0 / (a * a) - params->beta1) / params->alpha1;
        return {lsig_bwd + 0.5 * std::log(w), s};
    }
};

/// Deterministic parallel Monte Carlo reduction: paths are indexed, each
/// takes its substream from (seed, index), and per-worker partial counts
/// are summed in worker order. Integer counts make the result
/// bit-identical for every worker count.
template <class Counts, class PathFn>
Counts mc_reduce(long long N, int workers, const PathFn& fn) {
    if (workers < 1) workers = 1;
    if (workers == 1 || N < 2 * workers) {
        Counts total{};
        for (long long i = 0; i < N; ++i) total += fn(i);
        return total;
    }
    std::vector<Counts> partial(std::size_t(workers));
    std::vector<std::thread> threads;
    threads.reserve(std::size_t(workers));
    const long long chunk = (N + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const long long lo = w * chunk;
        const long long hi = std::min(N, lo + chunk);
        threads.emplace_back([&fn, &partial, w, lo, hi] {
            Counts acc{};
            for (long long i = lo; i < hi; ++i) acc += fn(i);
            partial[std::size_t(w)] = acc;
        });
    }
    for (auto& t : threads) t.join();
    Counts total{};
    for (const auto& p : partial) total += p;
    return total;
}

struct HitCounts {
    long long hits = 0;
    HitCounts& operator+=(const HitCounts& o) {
        hits += o.hits;
        return *this;
    }
};

struct RatioCounts {
    long long num = 0;
    long long den = 0;
    RatioCounts& operator+=(const RatioCounts& o) {
        num += o.num;
        den += o.den;
        return *this;
    }
};

/// 1{no forward exceedance in t = 1..m}. Early exit on the first
/// exceedance is exact: a path's draws depend only on its own prefix.
template <class Walker>
HitCounts theta_path(Walker walker, int m, std::uint64_t seed, long long idx) {
    RandomStream rng(seed, std::uint64_t(idx));
    walker.init(rng);
    for (int t = 1; t <= m; ++t)
        if (walker.forward(rng).exceeds()) return {0};
    return {1};
}

/// 1{zeta_h > 1}; h = 0 is the conditioning event itself.
template <class Walker>
HitCounts chi_path(Walker walker, int h, std::uint64_t seed, long long idx) {
    RandomStream rng(seed, std::uint64_t(idx));
    walker.init(rng);
    if (h == 0) return {1};
    typename Walker::Step last{};
    if (h > 0)
        for (int t = 1; t <= h; ++t) last = walker.forward(rng);
    else
        for (int t = 1; t <= -h; ++t) last = walker.backward(rng);
    return {last.exceeds() ? 1LL : 0LL};
}

/// Joint forward/backward chain: numerator 1{zeta_h > 1, backward clear},
/// denominator 1{backward clear}.
template <class Walker>
RatioCounts gamma_path(Walker walker, int h, int m, std::uint64_t seed, long long idx) {
    RandomStream rng(seed, std::uint64_t(idx));
    walker.init(rng);
    typename Walker::Step last{};
    for (int t = 1; t <= h; ++t) last = walker.forward(rng);
    const bool fwd_hit = last.exceeds();
    for (int t = 1; t <= m; ++t)
        if (walker.backward(rng).exceeds()) return {0, 0};
    return {fwd_hit ? 1LL : 0LL, 1};
}

} // namespace tailchain::detail
