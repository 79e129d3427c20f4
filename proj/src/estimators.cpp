#include "tailchain/estimators.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <ostream>

#include "tailchain/estimators_detail.hpp"

namespace tailchain {

void wilson_interval(long long successes, long long trials, double& lo, double& hi) {
    if (trials <= 0) {
        lo = 0.0;
        hi = 1.0;
        return;
    }
    constexpr double z = 1.959963984540054;
    const double n = double(trials);
    const double p = double(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    lo = std::max(0.0, center - half);
    hi = std::min(1.0, center + half);
}

namespace {

detail::GarchWalker make_walker(const GarchTailChainSampler& sampler) {
    detail::GarchWalker w;
    w.params = &sampler.params();
    w.table = &sampler.backward_table();
    w.alpha = sampler.alpha();
    return w;
}

EstimatorReport binomial_report(long long hits, long long N, const GarchTailChainSampler& s,
                                std::uint64_t seed) {
    EstimatorReport r;
    r.estimate = double(hits) / double(N);
    r.std_error = std::sqrt(r.estimate * (1.0 - r.estimate) / double(N));
    wilson_interval(hits, N, r.ci_lo, r.ci_hi);
    r.n_rep = N;
    r.seed = seed;
    r.params = s.params();
    r.alpha = TailIndex{s.alpha(), 0.0};
    return r;
}

} // namespace

EstimatorReport estimate_theta(const GarchTailChainSampler& sampler, int m, long long N,
                               std::uint64_t seed, int workers) {
    if (m < 1) throw ParameterError("estimate_theta: m must be >= 1");
    if (N < 100) throw ParameterError("estimate_theta: N must be >= 100");
    const auto walker = make_walker(sampler);
    const auto counts = detail::mc_reduce<detail::HitCounts>(
        N, workers, [&](long long i) { return detail::theta_path(walker, m, seed, i); });
    EstimatorReport r = binomial_report(counts.hits, N, sampler, seed);
    r.m = m;
    r.h = -1;
    return r;
}

EstimatorReport estimate_chi(const GarchTailChainSampler& sampler, int h, long long N,
                             std::uint64_t seed, int workers) {
    if (N < 100) throw ParameterError("estimate_chi: N must be >= 100");
    const auto walker = make_walker(sampler);
    const auto counts = detail::mc_reduce<detail::HitCounts>(
        N, workers, [&](long long i) { return detail::chi_path(walker, h, seed, i); });
    EstimatorReport r = binomial_report(counts.hits, N, sampler, seed);
    r.h = h;
    return r;
}

EstimatorReport estimate_gamma(const GarchTailChainSampler& sampler, int h, int m,
                               long long N, std::uint64_t seed, int workers) {
    if (h < 1) throw ParameterError("estimate_gamma: h must be >= 1");
    if (m < 0) throw ParameterError("estimate_gamma: m must be >= 0");
    if (N < 100) throw ParameterError("estimate_gamma: N must be >= 100");
    const auto walker = make_walker(sampler);
    const auto counts = detail::mc_reduce<detail::RatioCounts>(
        N, workers, [&](long long i) { return detail::gamma_path(walker, h, m, seed, i); });
    if (counts.den < 50)
        throw NumericalError("estimate_gamma: insufficient conditioning mass, only " +
                             std::to_string(counts.den) + " of " + std::to_string(N) +
                             " chains clear the backward window");
    EstimatorReport r;
    r.estimate = double(counts.num) / double(counts.den);
    // Delta-method variance of the ratio collapses to the conditional
    // binomial form because the numerator event implies the denominator's.
    r.std_error = std::sqrt(r.estimate * (1.0 - r.estimate) / double(counts.den));
    wilson_interval(counts.num, counts.den, r.ci_lo, r.ci_hi);
    r.n_rep = N;
    r.denominator = counts.den;
    r.m = m;
    r.h = h;
    r.seed = seed;
    r.params = sampler.params();
    r.alpha = TailIndex{sampler.alpha(), 0.0};
    return r;
}

EstimatorReport estimate_theta(const GarchParams& params, const TailIndex& ti, int m,
                               long long N, std::uint64_t seed, int workers) {
    return estimate_theta(GarchTailChainSampler(params, ti), m, N, seed, workers);
}

EstimatorReport estimate_chi(const GarchParams& params, const TailIndex& ti, int h,
                             long long N, std::uint64_t seed, int workers) {
    return estimate_chi(GarchTailChainSampler(params, ti), h, N, seed, workers);
}

EstimatorReport estimate_gamma(const GarchParams& params, const TailIndex& ti, int h, int m,
                               long long N, std::uint64_t seed, int workers) {
    return estimate_gamma(GarchTailChainSampler(params, ti), h, m, N, seed, workers);
}

std::span<const GarchParams> table1_params() {
    static const std::array<GarchParams, 7> rows = {{
        {1e-6, 0.99, 0.0},
        {1e-6, 0.15, 0.84},
        {1e-6, 0.11, 0.88},
        {1e-6, 0.09, 0.90},
        {1e-6, 0.07, 0.92},
        {1e-6, 0.04, 0.95},
        {1e-6, 0.072, 0.920},
    }};
    return rows;
}

std::vector<SurveyRow> table1(long long N, int m, std::uint64_t seed, int workers,
                              std::span<const GarchParams> rows) {
    if (rows.empty()) rows = table1_params();
    std::vector<SurveyRow> out;
    out.reserve(rows.size());
    for (const GarchParams& p : rows) {
        const auto t0 = std::chrono::steady_clock::now();
        SurveyRow row;
        row.params = p;
        row.ti = solve_tail_index(p);
        const GarchTailChainSampler sampler(p, row.ti);
        row.theta = estimate_theta(sampler, m, N, seed, workers);
        for (int h = 1; h <= 3; ++h) row.chi.push_back(estimate_chi(sampler, h, N, seed, workers));
        for (int h = 1; h <= 3; ++h)
            row.gamma.push_back(estimate_gamma(sampler, h, m, N, seed, workers));
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.push_back(std::move(row));
    }
    return out;
}

void write_table1_csv(std::ostream& os, const std::vector<SurveyRow>& rows) {
    os << "alpha1,beta1,alpha,theta,chi1,chi2,chi3,gamma1,gamma2,gamma3,"
          "se_theta,se_chi1,se_chi2,se_chi3,se_gamma1,se_gamma2,se_gamma3\n";
    for (const auto& r : rows) {
        os << format_double(r.params.alpha1) << ',' << format_double(r.params.beta1) << ','
           << format_double(r.ti.alpha) << ',' << format_double(r.theta.estimate);
        for (const auto& c : r.chi) os << ',' << format_double(c.estimate);
        for (const auto& g : r.gamma) os << ',' << format_double(g.estimate);
        os << ',' << format_double(r.theta.std_error);
        for (const auto& c : r.chi) os << ',' << format_double(c.std_error);
        for (const auto& g : r.gamma) os << ',' << format_double(g.std_error);
        os << '\n';
    }
}

EstimatorReport blocks_estimator(const ReturnSeries& series, int block_len, double quantile) {
    const long long n = (long long)series.values.size();
    if (block_len < 1) throw ParameterError("blocks_estimator: block length must be >= 1");
    if (n < 2LL * block_len)
        throw ParameterError("blocks_estimator: series shorter than two blocks");
    if (!(quantile > 0.5 && quantile < 1.0))
        throw ParameterError("blocks_estimator: quantile must lie in (0.5, 1)");

    std::vector<double> sorted(series.values);
    std::sort(sorted.begin(), sorted.end());
    const long long qi =
        std::clamp((long long)std::ceil(quantile * double(n)) - 1, 0LL, n - 1);
    const double threshold = sorted[std::size_t(qi)];

    long long n_exceed = 0;
    const long long k_blocks = (n + block_len - 1) / block_len;
    long long k_exceeding = 0;
    for (long long b = 0; b < k_blocks; ++b) {
        bool any = false;
        const long long lo = b * block_len;
        const long long hi = std::min(n, lo + block_len);
        for (long long i = lo; i < hi; ++i) {
            if (series.values[std::size_t(i)] > threshold) {
                ++n_exceed;
                any = true;
            }
        }
        if (any) ++k_exceeding;
    }
    if (n_exceed == 0)
        throw NumericalError("blocks_estimator: no exceedances above the empirical quantile");

    // Log-form blocks estimator (Smith-Weissman); the plain count ratio
    // K/N is badly biased once blocks hold several exceedances.
    const double log_rate = std::log(1.0 - double(n_exceed) / double(n));
    const auto theta_of = [&](double K) {
        if (K >= double(k_blocks)) return 1.0;
        return std::clamp(std::log(1.0 - K / double(k_blocks)) / (double(block_len) * log_rate),
                          0.0, 1.0);
    };

    EstimatorReport r;
    r.estimate = theta_of(double(k_exceeding));
    const double pk = double(k_exceeding) / double(k_blocks);
    if (k_exceeding < k_blocks) {
        const double dK = std::sqrt(double(k_blocks) * pk * (1.0 - pk));
        r.std_error = dK / (double(k_blocks) * (1.0 - pk) * double(block_len) * (-log_rate));
    }
    double klo, khi;
    wilson_interval(k_exceeding, k_blocks, klo, khi);
    r.ci_lo = theta_of(klo * double(k_blocks));
    r.ci_hi = theta_of(khi * double(k_blocks));
    r.n_rep = n_exceed;
    r.denominator = k_exceeding;
    r.m = block_len;
    return r;
}

} // namespace tailchain
