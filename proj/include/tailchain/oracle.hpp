#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "tailchain/rng.hpp"
#include "tailchain/tail_index.hpp"

namespace tailchain {

/// Configuration of a stationary GARCH(1,1) path simulation. Generation
/// is chunked (1e6 steps per chunk, each with its own substream and
/// burn-in), so statistics merge associatively and memory stays bounded
/// regardless of length.
struct PathSimConfig {
    GarchParams params;
    long long length = 0;       // retained steps (after burn-in)
    long long burn_in = 20000;  // per chunk, >= 1e4
    double quantile = 0.999;    // threshold as empirical quantile of zeta
    std::uint64_t seed = 42;
};

/// Materializes (sigma_t, zeta_t), t = 0..length-1. Same values as the
/// streaming consumers for identical config.
std::pair<std::vector<double>, std::vector<double>> simulate_garch_path(const PathSimConfig& config);

/// Finite-x conditional statistics around exceedances zeta_tau > x of
/// the empirical `quantile` threshold; exceedance windows may overlap.
struct ConditionalEmpirics {
    double threshold = 0.0;
    long long n_exceed = 0; // exceedances with a complete +-window
    double theta_hat = 0.0; // P(max zeta_{tau+1..tau+m} < x | zeta_tau > x)
    std::vector<double> chi;   // h = 1..h_max
    std::vector<double> gamma; // h = 1..h_max, backward-clear conditioning
    long long gamma_den = 0;
    double c_hat = 0.0; // #{|zeta| > x} / #{sigma > x}
    long long n_abs_exceed = 0;
    long long n_sigma_exceed = 0;
    double p_sigma_window_u2 = 0.0; // P(max sigma over window > 2x | zeta_tau > x)
    double p_sigma_window_u5 = 0.0;
    long long window = 0; // m + h_max + 1
};

ConditionalEmpirics conditional_empirics(const PathSimConfig& config, int h_max, int m);

/// Same statistics on an in-memory series (no chunking); sigma may be
/// empty, disabling the tail-ratio and sigma-window fields.
ConditionalEmpirics conditional_empirics_series(std::span<const double> zeta,
                                                std::span<const double> sigma,
                                                double threshold, int h_max, int m);

/// Hill estimate of the tail index of |zeta| from the top k order
/// statistics, with a seeded nonparametric bootstrap SE.
struct HillEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    int k = 0;
};

HillEstimate tail_index_empirical(std::span<const double> zeta, int k);

} // namespace tailchain
