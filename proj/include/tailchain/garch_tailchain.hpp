#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "tailchain/distributions.hpp"
#include "tailchain/rng.hpp"
#include "tailchain/tail_index.hpp"

namespace tailchain {

/// Conditioning of the limit law: on |zeta_0| > x (two-sided) or on
/// zeta_0 > x, which fixes S_0 = +1.
enum class Conditioning { two_sided, one_sided };

/// One joint draw of the GARCH(1,1) tail chain on lags -m..n: the
/// independent components together with the sigma- and zeta-paths
/// assembled from them.
///
/// Identities satisfied by construction (relative 1e-12):
///   sigma_0 = zeta0_mag / |eps1|,  sigma_1 = sigma_0 sqrt(a1 eps1^2 + b1)
///   sigma_t = sigma_{t-1} sqrt(a1 eps_t^2 + b1)        t >= 2
///   sigma_{-t} = sigma_{-t+1} A_{-t}                   t >= 1
///   zeta_t = sigma_t |eps_{t+1}| S_t                   t >= 0
///   zeta_{-t} = sigma_{-t} sqrt((A_{-t}^{-2} - b1)/a1) S_{-t}
struct GarchTailChainSample {
    GarchParams params;
    double alpha = 0.0; // tail index of the squared process
    int m = 0;
    int n = 0;
    Conditioning conditioning = Conditioning::one_sided;

    double zeta0_mag = 0.0; // |zeta_0| ~ Par(2 alpha)
    double eps1 = 0.0;      // tilted innovation
    std::vector<int> signs;             // S_t, t = -m..n at signs[t+m]
    std::vector<double> fwd_innovations; // eps_t, t = 2..n+1
    std::vector<double> bwd_increments;  // A_{-t}, t = 1..m
    std::vector<double> sigma_path;      // t = -m..n at [t+m]
    std::vector<double> zeta_path;       // t = -m..n at [t+m]
    bool saturated = false; // some log-magnitude fell below -700 and was reported 0

    double sigma(int t) const { return sigma_path[std::size_t(t + m)]; }
    double zeta(int t) const { return zeta_path[std::size_t(t + m)]; }
    int sign(int t) const { return signs[std::size_t(t + m)]; }
};

/// Validates parameters once, then samples chains of any shape. The
/// backward increment table is built at construction.
class GarchTailChainSampler {
public:
    GarchTailChainSampler(const GarchParams& params, const TailIndex& ti);

    const MonotoneCdfTable& backward_table() const { return table_; }
    const GarchParams& params() const { return params_; }
    double alpha() const { return alpha_; }

    GarchTailChainSample sample(int m, int n, Conditioning cond, RandomStream& rng) const;

private:
    GarchParams params_;
    double alpha_;
    MonotoneCdfTable table_;
};

/// Single-shot convenience wrapper (validates and rebuilds the backward
/// table on every call; use the sampler class in loops).
GarchTailChainSample sample_garch_tail_chain(const GarchParams& params, const TailIndex& ti,
                                             int m, int n, Conditioning cond,
                                             RandomStream& rng);

/// True iff every structural identity of the sample holds to the given
/// relative tolerance. Saturated (reported-zero) entries are skipped.
bool chain_algebra_check(const GarchTailChainSample& sample, double rel_tol = 1e-12);

/// Recomputes zeta_t from the stored components via the closed
/// multiplicative form (log-space, same accumulation order as the
/// sampler).
double zeta_closed_product(const GarchTailChainSample& sample, int t);

/// CSV rows "t,sigma,zeta" for the path.
void write_path_csv(std::ostream& os, const GarchTailChainSample& sample);

} // namespace tailchain
