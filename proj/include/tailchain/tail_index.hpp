#pragma once

#include <cstdint>

#include "tailchain/errors.hpp"

namespace tailchain {

/// GARCH(1,1) parameters: sigma_t^2 = alpha0 + alpha1 sigma_{t-1}^2 eps_t^2
/// + beta1 sigma_{t-1}^2, zeta_t = sigma_t eps_{t+1}, eps i.i.d. N(0,1).
struct GarchParams {
    double alpha0 = 1e-6;
    double alpha1 = 0.0;
    double beta1 = 0.0;

    bool stationary() const { return alpha1 + beta1 < 1.0; }
};

/// Throws ParameterError unless alpha0 > 0, alpha1 > 0, beta1 >= 0.
void validate(const GarchParams& params);

/// As validate(), additionally requiring alpha1 + beta1 < 1 (needed for
/// stationary path simulation; the tail-index solver itself only needs a
/// negative log drift).
void validate_stationary(const GarchParams& params);

/// Index of regular variation of the squared processes: the unique
/// positive root of E[(alpha1 eps^2 + beta1)^alpha] = 1. |zeta_0| and
/// sigma_0 are regularly varying with index 2*alpha.
struct TailIndex {
    double alpha = 0.0;
    double residual = 0.0; // achieved |E[(a1 e^2 + b1)^alpha] - 1|
};

/// E[(alpha1 eps^2 + beta1)^a] for standard normal eps. Gauss-Hermite for
/// beta1 > 0; for beta1 = 0 the closed form alpha1^a E|eps|^{2a} (the
/// integrand has a |x|^{2a} cusp at 0 that defeats polynomial rules).
double garch_moment(const GarchParams& params, double a);

/// E[log(alpha1 eps^2 + beta1)]. Negative drift is the existence
/// condition for a finite tail index.
double log_drift(const GarchParams& params);

/// Solves the tail-index equation by bracket expansion from [1e-6, 1]
/// (doubling, cap 200) and bisection/secant to |residual| < 1e-9.
TailIndex solve_tail_index(const GarchParams& params);

/// E|N(0,1)|^k for k = two_alpha > 0: pi^{-1/2} 2^{k/2} Gamma((k+1)/2).
double abs_normal_moment(double two_alpha);

} // namespace tailchain
