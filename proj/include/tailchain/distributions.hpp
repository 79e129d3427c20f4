#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tailchain/errors.hpp"
#include "tailchain/rng.hpp"
#include "tailchain/tail_index.hpp"

namespace tailchain {

/// Pareto law on [1, inf): survival(x) = x^{-index}.
struct ParetoLaw {
    double index = 1.0;
};

double sample_pareto(const ParetoLaw& law, RandomStream& rng);
double pareto_survival(const ParetoLaw& law, double x);

/// The conditioning innovation eps_1 of the GARCH tail chain: symmetric,
/// with eps^2 / 2 ~ Gamma(alpha + 1/2, 1). Equivalently the standard
/// normal tilted by |e|^{2 alpha}.
struct TiltedInnovationLaw {
    double alpha = 1.0; // tail index of the squared GARCH process
};

double sample_tilted_innovation(const TiltedInnovationLaw& law, RandomStream& rng);

/// Density of |eps_1| on (0, inf) for the tilted law.
double tilted_abs_density(const TiltedInnovationLaw& law, double u);

/// Coin for the i.i.d. sign sequence S_t; prob_plus = 1/2 for GARCH.
struct SignLaw {
    double prob_plus = 0.5;
};

int sample_sign(const SignLaw& law, RandomStream& rng);

/// Tabulated monotone CDF with monotone cubic (Fritsch-Carlson)
/// interpolation in both directions. Grid abscissae strictly increase,
/// values are nondecreasing in [0,1] with the first <= 1e-12 and the
/// last >= 1 - 1e-12. Immutable after construction.
class MonotoneCdfTable {
public:
    MonotoneCdfTable(std::vector<double> grid, std::vector<double> cdf_values);

    double cdf(double x) const;     // clamped to [0, 1] outside the grid
    double inverse(double p) const; // p clamped to the tabulated range
    double sample(RandomStream& rng) const { return inverse(rng.uniform_pos()); }

    std::span<const double> grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    std::size_t size() const { return grid_.size(); }

private:
    std::vector<double> grid_;
    std::vector<double> values_;
    std::vector<double> slope_fwd_; // d cdf / dx at nodes
    std::vector<double> slope_inv_; // d inverse / dp at nodes
};

/// P(A_{-1} <= x) for the backward increment of the GARCH sigma tail
/// chain: sqrt(2/pi) * Int_{sqrt((x^-2 - beta1)/alpha1)}^inf
/// (alpha1 z^2 + beta1)^alpha exp(-z^2/2) dz, by adaptive quadrature with
/// absolute error <= 1e-10. x at or beyond the support boundary is
/// clamped to {0, 1}; `clamped` reports strictly-outside arguments.
/// Throws ConsistencyError when alpha does not satisfy the tail-index
/// equation to 1e-6.
double backward_increment_cdf(double x, const GarchParams& params, double alpha,
                              bool* clamped = nullptr);

/// Builds the inverse-CDF sampler for A_{-1}: >= 4096 nodes placed
/// logit-uniformly in probability (dense near both endpoints).
MonotoneCdfTable build_backward_sampler(const GarchParams& params, double alpha);

/// Upper support endpoint of A_{-1}: beta1^{-1/2}, infinite for ARCH(1).
double backward_support_upper(const GarchParams& params);

} // namespace tailchain
