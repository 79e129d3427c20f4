#include "tailchain/garch_tailchain.hpp"

#include <cmath>
#include <ostream>

#include "tailchain/csv.hpp"

namespace tailchain {

namespace {

double exp_or_zero(double lx, bool& saturated) {
    if (lx < -700.0) {
        saturated = true;
        return 0.0;
    }
    return std::exp(lx);
}

} // namespace

namespace {

MonotoneCdfTable checked_backward_table(const GarchParams& params, const TailIndex& ti) {
    validate_stationary(params);
    if (!(ti.alpha > 0.0) || ti.residual > 1e-9)
        throw ConsistencyError("GarchTailChainSampler: tail index is unsolved or inconsistent");
    return build_backward_sampler(params, ti.alpha);
}

} // namespace

GarchTailChainSampler::GarchTailChainSampler(const GarchParams& params, const TailIndex& ti)
    : params_(params), alpha_(ti.alpha), table_(checked_backward_table(params, ti)) {}

GarchTailChainSample GarchTailChainSampler::sample(int m, int n, Conditioning cond,
                                                   RandomStream& rng) const {
    if (m < 0 || n < 0) throw ParameterError("sample: m, n must be nonnegative");
    GarchTailChainSample s;
    s.params = params_;
    s.alpha = alpha_;
    s.m = m;
    s.n = n;
    s.conditioning = cond;
    s.signs.assign(std::size_t(m + n + 1), 1);
    s.fwd_innovations.reserve(std::size_t(n));
    s.bwd_increments.reserve(std::size_t(m));
    s.sigma_path.assign(std::size_t(m + n + 1), 0.0);
    s.zeta_path.assign(std::size_t(m + n + 1), 0.0);

    const double a1 = params_.alpha1, b1 = params_.beta1;
    const double two_alpha = 2.0 * alpha_;

    // Draw order is a fixed contract shared with the estimator walkers:
    // Pareto magnitude, tilted innovation (magnitude then sign), S_0 when
    // two-sided, then per forward step (normal, sign), then per backward
    // step (uniform, sign).
    s.zeta0_mag = std::pow(rng.uniform_pos(), -1.0 / two_alpha);
    double g = rng.gamma(alpha_ + 0.5);
    while (g <= 0.0) g = rng.gamma(alpha_ + 0.5);
    const double eps1_sq = 2.0 * g;
    const double abs_eps1 = std::sqrt(eps1_sq);
    s.eps1 = rng.rademacher() > 0 ? abs_eps1 : -abs_eps1;
    const int s0 = (cond == Conditioning::one_sided) ? 1 : rng.rademacher();
    s.signs[std::size_t(m)] = s0;

    const double lzeta0 = std::log(s.zeta0_mag);
    const double lsig0 = lzeta0 - 0.5 * std::log(eps1_sq);
    s.sigma_path[std::size_t(m)] = exp_or_zero(lsig0, s.saturated);
    s.zeta_path[std::size_t(m)] = s0 * s.zeta0_mag; // sigma_0 |eps_1| = |zeta_0| exactly

    // Forward: sigma_1 consumes the tilted innovation, later steps fresh
    // normals; zeta_t needs the innovation one step ahead.
    double lsig = lsig0;
    double pending_sq = eps1_sq;
    for (int t = 1; t <= n; ++t) {
        lsig += 0.5 * std::log(a1 * pending_sq + b1);
        const double e_next = rng.normal();
        const int st = rng.rademacher();
        s.fwd_innovations.push_back(e_next);
        s.signs[std::size_t(t + m)] = st;
        s.sigma_path[std::size_t(t + m)] = exp_or_zero(lsig, s.saturated);
        const double lzeta = lsig + std::log(std::abs(e_next));
        s.zeta_path[std::size_t(t + m)] = st * exp_or_zero(lzeta, s.saturated);
        pending_sq = e_next * e_next;
    }

    // Backward: multiplicative walk with the exact inverse-CDF increments.
    double lsig_b = lsig0;
    for (int t = 1; t <= m; ++t) {
        const double a = table_.sample(rng);
        const int st = rng.rademacher();
        s.bwd_increments.push_back(a);
        s.signs[std::size_t(m - t)] = st;
        lsig_b += std::log(a);
        s.sigma_path[std::size_t(m - t)] = exp_or_zero(lsig_b, s.saturated);
        const double w = std::max(0.0, (1.0 / (a * a) - b1)) / a1;
        const double lzeta = lsig_b + 0.5 * std::log(w);
        s.zeta_path[std::size_t(m - t)] = st * exp_or_zero(lzeta, s.saturated);
    }
    return s;
}

GarchTailChainSample sample_garch_tail_chain(const GarchParams& params, const TailIndex& ti,
                                             int m, int n, Conditioning cond,
                                             RandomStream& rng) {
    const GarchTailChainSampler sampler(params, ti);
    return sampler.sample(m, n, cond, rng);
}

namespace {

bool close_rel(double a, double b, double tol) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) <= tol * scale;
}

} // namespace

bool chain_algebra_check(const GarchTailChainSample& s, double rel_tol) {
    const double a1 = s.params.alpha1, b1 = s.params.beta1;
    const double abs_eps1 = std::abs(s.eps1);
    if (!(s.zeta0_mag >= 1.0) || !(abs_eps1 > 0.0)) return false;

    const auto live = [&](int t) { return s.sigma(t) > 0.0; };

    if (live(0)) {
        if (!close_rel(s.sigma(0), s.zeta0_mag / abs_eps1, rel_tol)) return false;
        if (!close_rel(s.zeta(0), s.sign(0) * s.sigma(0) * abs_eps1, rel_tol)) return false;
    } else if (!s.saturated) {
        return false; // sigma must be strictly positive unless saturation was reported
    }
    for (int t = 1; t <= s.n; ++t) {
        if (!live(t)) {
            if (!s.saturated) return false;
            continue;
        }
        const double eps_t = (t == 1) ? s.eps1 : s.fwd_innovations[std::size_t(t - 2)];
        if (!close_rel(s.sigma(t), s.sigma(t - 1) * std::sqrt(a1 * eps_t * eps_t + b1), rel_tol))
            return false;
        const double eps_next = s.fwd_innovations[std::size_t(t - 1)];
        if (!close_rel(s.zeta(t), s.sign(t) * s.sigma(t) * std::abs(eps_next), rel_tol))
            return false;
    }
    for (int t = 1; t <= s.m; ++t) {
        if (!live(-t)) {
            if (!s.saturated) return false;
            continue;
        }
        const double a = s.bwd_increments[std::size_t(t - 1)];
        if (!close_rel(s.sigma(-t), s.sigma(-t + 1) * a, rel_tol)) return false;
        const double w = std::sqrt(std::max(0.0, 1.0 / (a * a) - b1) / a1);
        if (!close_rel(s.zeta(-t), s.sign(-t) * s.sigma(-t) * w, rel_tol)) return false;
    }
    return true;
}

double zeta_closed_product(const GarchTailChainSample& s, int t) {
    const double a1 = s.params.alpha1, b1 = s.params.beta1;
    const double eps1_sq = s.eps1 * s.eps1;
    double lz = std::log(s.zeta0_mag);
    if (t == 0) return s.sign(0) * s.zeta0_mag;
    if (t > 0) {
        double lsig = lz - 0.5 * std::log(eps1_sq);
        double pending_sq = eps1_sq;
        for (int i = 1; i <= t; ++i) {
            lsig += 0.5 * std::log(a1 * pending_sq + b1);
            pending_sq = s.fwd_innovations[std::size_t(i - 1)] * s.fwd_innovations[std::size_t(i - 1)];
        }
        const double lzeta = lsig + std::log(std::abs(s.fwd_innovations[std::size_t(t - 1)]));
        return s.sign(t) * (lzeta < -700.0 ? 0.0 : std::exp(lzeta));
    }
    const int k = -t;
    double lsig = lz - 0.5 * std::log(eps1_sq);
    for (int i = 1; i <= k; ++i) lsig += std::log(s.bwd_increments[std::size_t(i - 1)]);
    const double a = s.bwd_increments[std::size_t(k - 1)];
    const double w = std::max(0.0, (1.0 / (a * a) - b1)) / a1;
    const double lzeta = lsig + 0.5 * std::log(w);
    return s.sign(t) * (lzeta < -700.0 ? 0.0 : std::exp(lzeta));
}

void write_path_csv(std::ostream& os, const GarchTailChainSample& s) {
    os << "t,sigma,zeta\n";
    for (int t = -s.m; t <= s.n; ++t)
        os << t << ',' << format_double(s.sigma(t)) << ',' << format_double(s.zeta(t)) << '\n';
}

} // namespace tailchain
