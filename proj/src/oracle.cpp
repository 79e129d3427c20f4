#include "tailchain/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

namespace tailchain {

namespace {

constexpr long long kChunkLen = 1'000'000;

void validate_config(const PathSimConfig& config) {
    validate_stationary(config.params);
    if (config.length < 1) throw ParameterError("PathSimConfig: length must be positive");
    if (config.burn_in < 10000) throw ParameterError("PathSimConfig: burn_in must be >= 1e4");
}

/// Runs fn(sigma, zeta) for every retained step of one chunk.
template <class Fn>
void generate_chunk(const PathSimConfig& config, long long chunk_idx, long long steps, Fn&& fn) {
    RandomStream rng(config.seed, std::uint64_t(chunk_idx));
    const double a0 = config.params.alpha0;
    const double a1 = config.params.alpha1;
    const double b1 = config.params.beta1;
    double sig2 = a0 / (1.0 - a1 - b1); // stationary mean of sigma^2
    for (long long i = 0; i < config.burn_in; ++i) {
        const double e = rng.normal();
        sig2 = a0 + (a1 * e * e + b1) * sig2;
    }
    for (long long i = 0; i < steps; ++i) {
        const double sig = std::sqrt(sig2);
        const double e_next = rng.normal(); // drives zeta_t and sigma_{t+1}
        fn(sig, sig * e_next);
        sig2 = a0 + (a1 * e_next * e_next + b1) * sig2;
    }
}

template <class Fn>
void for_each_chunk(const PathSimConfig& config, Fn&& fn) {
    const long long chunks = (config.length + kChunkLen - 1) / kChunkLen;
    for (long long c = 0; c < chunks; ++c) {
        const long long steps = std::min(kChunkLen, config.length - c * kChunkLen);
        fn(c, steps);
    }
}

} // namespace

std::pair<std::vector<double>, std::vector<double>> simulate_garch_path(const PathSimConfig& config) {
    validate_config(config);
    std::vector<double> sigma, zeta;
    sigma.reserve(std::size_t(config.length));
    zeta.reserve(std::size_t(config.length));
    for_each_chunk(config, [&](long long c, long long steps) {
        generate_chunk(config, c, steps, [&](double s, double z) {
            sigma.push_back(s);
            zeta.push_back(z);
        });
    });
    return {std::move(sigma), std::move(zeta)};
}

namespace {

struct WindowAccumulator {
    double x;
    int h_max;
    int m;
    long long resolved = 0;
    long long theta_hits = 0;
    std::vector<long long> chi_hits;
    std::vector<long long> gamma_hits;
    long long gamma_den = 0;
    long long sigma_u2 = 0;
    long long sigma_u5 = 0;

    WindowAccumulator(double x_, int h_max_, int m_)
        : x(x_), h_max(h_max_), m(m_), chi_hits(std::size_t(h_max_), 0),
          gamma_hits(std::size_t(h_max_), 0) {}

    // zeta/sigma hold a full window: indices 0..2W, center at W = max(m, h_max)
    // padded so both past m and future max(m, h_max) are present.
    void resolve(std::span<const double> zeta, std::span<const double> sigma, long long center) {
        if (!(zeta[std::size_t(center)] > x)) return;
        ++resolved;
        bool clear_fwd = true;
        for (int t = 1; t <= m && clear_fwd; ++t)
            if (zeta[std::size_t(center + t)] >= x) clear_fwd = false;
        if (clear_fwd) ++theta_hits;
        bool clear_bwd = true;
        for (int t = 1; t <= m && clear_bwd; ++t)
            if (zeta[std::size_t(center - t)] > x) clear_bwd = false;
        if (clear_bwd) ++gamma_den;
        for (int h = 1; h <= h_max; ++h) {
            const bool hit = zeta[std::size_t(center + h)] > x;
            if (hit) ++chi_hits[std::size_t(h - 1)];
            if (hit && clear_bwd) ++gamma_hits[std::size_t(h - 1)];
        }
        if (!sigma.empty()) {
            double smax = 0.0;
            for (long long t = center - m; t <= center + h_max; ++t)
                smax = std::max(smax, sigma[std::size_t(t)]);
            if (smax > 2.0 * x) ++sigma_u2;
            if (smax > 5.0 * x) ++sigma_u5;
        }
    }

    ConditionalEmpirics finish() const {
        if (resolved < 500)
            throw NumericalError("conditional_empirics: only " + std::to_string(resolved) +
                                 " usable exceedances at this quantile (need >= 500)");
        ConditionalEmpirics out;
        out.threshold = x;
        out.n_exceed = resolved;
        out.theta_hat = double(theta_hits) / double(resolved);
        out.window = m + h_max + 1;
        for (int h = 1; h <= h_max; ++h)
            out.chi.push_back(double(chi_hits[std::size_t(h - 1)]) / double(resolved));
        out.gamma_den = gamma_den;
        for (int h = 1; h <= h_max; ++h)
            out.gamma.push_back(gamma_den > 0
                                    ? double(gamma_hits[std::size_t(h - 1)]) / double(gamma_den)
                                    : 0.0);
        out.p_sigma_window_u2 = double(sigma_u2) / double(resolved);
        out.p_sigma_window_u5 = double(sigma_u5) / double(resolved);
        return out;
    }
};

} // namespace

ConditionalEmpirics conditional_empirics_series(std::span<const double> zeta,
                                                std::span<const double> sigma,
                                                double threshold, int h_max, int m) {
    if (h_max < 1 || m < 0) throw ParameterError("conditional_empirics: need h_max >= 1, m >= 0");
    if (!sigma.empty() && sigma.size() != zeta.size())
        throw ParameterError("conditional_empirics: sigma/zeta length mismatch");
    const long long w = std::max(m, h_max);
    WindowAccumulator acc(threshold, h_max, m);
    const long long n = (long long)zeta.size();
    for (long long c = m; c + w < n; ++c) acc.resolve(zeta, sigma, c);
    ConditionalEmpirics out = acc.finish();
    long long nabs = 0, nsig = 0;
    for (long long i = 0; i < n; ++i) {
        if (std::abs(zeta[std::size_t(i)]) > threshold) ++nabs;
        if (!sigma.empty() && sigma[std::size_t(i)] > threshold) ++nsig;
    }
    out.n_abs_exceed = nabs;
    out.n_sigma_exceed = nsig;
    out.c_hat = nsig > 0 ? double(nabs) / double(nsig) : 0.0;
    return out;
}

ConditionalEmpirics conditional_empirics(const PathSimConfig& config, int h_max, int m) {
    validate_config(config);
    if (config.length < 1'000'000)
        throw ParameterError("conditional_empirics: length must be >= 1e6");
    if (!(config.quantile > 0.99 && config.quantile < 1.0))
        throw ParameterError("conditional_empirics: quantile must lie in (0.99, 1)");
    if (h_max < 1 || m < 0) throw ParameterError("conditional_empirics: need h_max >= 1, m >= 0");

    // Pass 1: exact order statistic via a bounded min-heap of the k
    // largest zeta values.
    const long long k =
        std::max(1LL, (long long)std::floor(double(config.length) * (1.0 - config.quantile)) + 1);
    std::priority_queue<double, std::vector<double>, std::greater<double>> heap;
    for_each_chunk(config, [&](long long c, long long steps) {
        generate_chunk(config, c, steps, [&](double, double z) {
            if ((long long)heap.size() < k)
                heap.push(z);
            else if (z > heap.top()) {
                heap.pop();
                heap.push(z);
            }
        });
    });
    const double x = heap.top(); // k-th largest; exceedance means zeta > x

    // Pass 2: regenerate, resolve windows inside each chunk, count tail
    // ratios globally.
    const long long w = std::max(m, h_max);
    WindowAccumulator acc(x, h_max, m);
    long long nabs = 0, nsig = 0;
    std::vector<double> zbuf, sbuf;
    for_each_chunk(config, [&](long long c, long long steps) {
        zbuf.clear();
        sbuf.clear();
        zbuf.reserve(std::size_t(steps));
        sbuf.reserve(std::size_t(steps));
        generate_chunk(config, c, steps, [&](double s, double z) {
            zbuf.push_back(z);
            sbuf.push_back(s);
            if (std::abs(z) > x) ++nabs;
            if (s > x) ++nsig;
        });
        for (long long center = m; center + w < steps; ++center) acc.resolve(zbuf, sbuf, center);
    });
    ConditionalEmpirics out = acc.finish();
    out.n_abs_exceed = nabs;
    out.n_sigma_exceed = nsig;
    out.c_hat = nsig > 0 ? double(nabs) / double(nsig) : 0.0;
    return out;
}

HillEstimate tail_index_empirical(std::span<const double> zeta, int k) {
    if (k < 100) throw ParameterError("tail_index_empirical: k must be >= 100");
    if ((long long)zeta.size() < (long long)k + 1)
        throw ParameterError("tail_index_empirical: k + 1 exceeds the sample size");
    std::vector<double> mags(zeta.size());
    for (std::size_t i = 0; i < zeta.size(); ++i) mags[i] = std::abs(zeta[i]);
    std::nth_element(mags.begin(), mags.begin() + k, mags.end(), std::greater<double>());
    const double xk1 = mags[std::size_t(k)];
    if (!(xk1 > 0.0)) throw NumericalError("tail_index_empirical: nonpositive order statistic");
    std::vector<double> spacings(std::size_t(k));
    for (int i = 0; i < k; ++i) spacings[std::size_t(i)] = std::log(mags[std::size_t(i)] / xk1);
    double mean = 0.0;
    for (const double s : spacings) mean += s;
    mean /= double(k);
    if (!(mean > 0.0))
        throw NumericalError("tail_index_empirical: degenerate tail (all top order "
                             "statistics equal)");
    HillEstimate he;
    he.estimate = 1.0 / mean;
    he.k = k;

    RandomStream rng(0x48494C4CULL); // fixed bootstrap seed, reproducible
    const int B = 400;
    std::vector<double> boot;
    boot.reserve(std::size_t(B));
    for (int b = 0; b < B; ++b) {
        double s = 0.0;
        for (int i = 0; i < k; ++i)
            s += spacings[std::size_t(std::min<long long>(
                (long long)(rng.uniform() * k), k - 1))];
        s /= double(k);
        if (s > 0.0) boot.push_back(1.0 / s);
    }
    double bm = 0.0;
    for (const double v : boot) bm += v;
    bm /= double(boot.size());
    double vs = 0.0;
    for (const double v : boot) vs += (v - bm) * (v - bm);
    he.std_error = std::sqrt(vs / double(boot.size() - 1));
    return he;
}

} // namespace tailchain
