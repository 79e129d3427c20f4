#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "tailchain/distributions.hpp"
#include "tailchain/rng.hpp"
#include "tailchain/tail_index.hpp"

namespace tailchain {

/// Sign-aware transition map of the tail chain:
/// h(y, a, b) = y * (a 1{y>0} + b 1{y<0}), h(0, ., .) = 0.
inline double transition_h(double y, double a, double b) {
    if (y > 0.0) return y * a;
    if (y < 0.0) return y * b;
    return 0.0;
}

/// Forward increment law of a tail chain. `forward` draws the pair
/// (A, B) = (phi(eps, +1), phi(eps, -1)) for one innovation; `index` is
/// the chain's index of regular variation (2*alpha for the GARCH sigma
/// chain); `prob_plus` = P(M_0 = +1), 1 for nonnegative chains.
struct IncrementLaw {
    double index = 1.0;
    double prob_plus = 1.0;
    std::function<std::pair<double, double>(RandomStream&)> forward;
};

/// Backward increment law obtained from the adjoint relation. Discrete
/// weighted-bootstrap atoms for each conditioning sign, plus the point
/// mass at zero that absorbs the missing alpha-moment.
struct BackwardLaw {
    std::vector<double> a_values; // atoms of A_{-1}, sorted ascending
    std::vector<double> a_cum;    // cumulative normalized weights, last = 1
    double point_mass_zero = 0.0; // P(A_{-1} = 0)

    std::vector<double> b_values; // B_{-1} atoms (signed chains), may be empty
    std::vector<double> b_cum;
    double point_mass_zero_b = 0.0;

    // Exact-law escape hatch: when set, A_{-1} is drawn from the table
    // instead of the bootstrap atoms (used by the GARCH preset).
    const MonotoneCdfTable* exact_a = nullptr;

    double sample_a(RandomStream& rng) const;
    double sample_b(RandomStream& rng) const;
};

/// Weighted-bootstrap construction of the adjoint law from a forward
/// pool of `pool_size` (A, B) draws: a backward draw returns 1/value
/// with probability proportional to its (sign-adjusted) alpha-moment
/// weight, and 0 with the leftover probability.
BackwardLaw build_adjoint(const IncrementLaw& increment, std::size_t pool_size,
                          RandomStream& rng);

/// Back-and-forth tail chain specification: start block for lags 0..s,
/// forward increments beyond s, adjoint increments below 0.
struct BftcSpec {
    IncrementLaw increment;
    std::function<std::vector<double>(RandomStream&)> start_block;
    int s = 0;
    std::optional<BackwardLaw> backward; // required when simulating m > 0
};

/// One realization of the chain on lags -m .. s+n.
struct TailChainPath {
    int m = 0;
    int s = 0;
    std::vector<double> values; // index t stored at values[t + m]

    double at(int t) const { return values[std::size_t(t + m)]; }
    int lo() const { return -m; }
    int hi() const { return int(values.size()) - m - 1; }
};

TailChainPath simulate_bftc(const BftcSpec& spec, int m, int n, RandomStream& rng);

/// Lemma-style point-mass diagnostic: P(Y_0^(X) = 0) = 1 - E|chi|^alpha / C,
/// clamped to [0, 1]. Throws ConsistencyError if chi_moment exceeds C
/// beyond relative 1e-9.
double point_mass_diagnostic(double chi_moment, double C);

/// Forward law of the GARCH(1,1) volatility chain: A = B =
/// sqrt(alpha1 eps^2 + beta1), index 2*alpha, nonnegative chain.
IncrementLaw garch_increment_law(const GarchParams& params, const TailIndex& ti);

/// GJR-GARCH(1,1): phi(eps) = sqrt((alpha1 + delta1 1{eps>0}) eps^2 + beta1).
IncrementLaw gjr_garch_increment_law(double alpha1, double delta1, double beta1,
                                     double index);

/// SR-SARV: phi(eta) = alpha1 eta + beta1, or its square root, for a
/// nonnegative innovation eta drawn by `eta_sampler`.
IncrementLaw sr_sarv_increment_law(double alpha1, double beta1, double index,
                                   std::function<double(RandomStream&)> eta_sampler,
                                   bool sqrt_form);

/// Full GARCH preset: start block (sigma_0, sigma_1) from the Pareto
/// factor and the tilted innovation, s = 1, exact backward table.
BftcSpec garch_bftc_spec(const GarchParams& params, const TailIndex& ti,
                         const MonotoneCdfTable* exact_backward);

} // namespace tailchain
