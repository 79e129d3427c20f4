#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "tailchain/csv.hpp"
#include "tailchain/distributions.hpp"
#include "tailchain/garch_tailchain.hpp"
#include "tailchain/rng.hpp"
#include "tailchain/tail_index.hpp"

namespace tailchain {

/// A Monte Carlo point estimate with a Wilson 95% interval and the run
/// metadata needed to reproduce it.
struct EstimatorReport {
    double estimate = 0.0;
    double std_error = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    long long n_rep = 0;       // replications N
    long long denominator = -1; // accepted conditioning count (gamma only)
    long long m = -1;
    long long h = 0;
    std::uint64_t seed = 0;
    GarchParams params;
    TailIndex alpha;
};

/// theta_{zeta,m}: P(max(zeta_1..zeta_m) < 1) over one-sided tail-chain
/// draws; binomial SE, Wilson CI. Bit-identical for any worker count.
EstimatorReport estimate_theta(const GarchParams& params, const TailIndex& ti,
                               int m, long long N, std::uint64_t seed, int workers = 1);

/// chi_zeta(h): P(zeta_h > 1); negative h runs the backward chain.
EstimatorReport estimate_chi(const GarchParams& params, const TailIndex& ti,
                             int h, long long N, std::uint64_t seed, int workers = 1);

/// gamma_{zeta,m}(h): P(zeta_h > 1 | no exceedance at lags -m..-1), a
/// ratio over N joint forward+backward chains; delta-method SE. With
/// m = 0 it coincides with estimate_chi(h) draw for draw.
EstimatorReport estimate_gamma(const GarchParams& params, const TailIndex& ti,
                               int h, int m, long long N, std::uint64_t seed,
                               int workers = 1);

// Variants reusing a prebuilt sampler (avoids rebuilding the backward
// table when several estimators run on the same parameters).
EstimatorReport estimate_theta(const GarchTailChainSampler& sampler, int m, long long N,
                               std::uint64_t seed, int workers = 1);
EstimatorReport estimate_chi(const GarchTailChainSampler& sampler, int h, long long N,
                             std::uint64_t seed, int workers = 1);
EstimatorReport estimate_gamma(const GarchTailChainSampler& sampler, int h, int m,
                               long long N, std::uint64_t seed, int workers = 1);

/// One row of the survey table: solved tail index plus the extremal
/// measures theta, chi(1..3), gamma(1..3).
struct SurveyRow {
    GarchParams params;
    TailIndex ti;
    EstimatorReport theta;
    std::vector<EstimatorReport> chi;   // h = 1..3
    std::vector<EstimatorReport> gamma; // h = 1..3
    double seconds = 0.0;
};

/// The seven (alpha1, beta1) parameter pairs of the survey table.
std::span<const GarchParams> table1_params();

/// Runs the full survey. `rows` selects a subset (empty = all).
std::vector<SurveyRow> table1(long long N, int m, std::uint64_t seed, int workers = 1,
                              std::span<const GarchParams> rows = {});

/// CSV with columns alpha1,beta1,alpha,theta,chi1..chi3,gamma1..gamma3,
/// se_theta,se_chi1..se_gamma3.
void write_table1_csv(std::ostream& os, const std::vector<SurveyRow>& rows);

/// Blocks estimator of the extremal index at the empirical `quantile`
/// threshold, over consecutive blocks of `block_len` (trailing partial
/// block included), clamped to [0, 1].
EstimatorReport blocks_estimator(const ReturnSeries& series, int block_len, double quantile);

/// Wilson score interval for a binomial proportion.
void wilson_interval(long long successes, long long trials, double& lo, double& hi);

} // namespace tailchain
