#include "tailchain/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tailchain/quadrature.hpp"

namespace tailchain {

double sample_pareto(const ParetoLaw& law, RandomStream& rng) {
    if (!(law.index > 0.0)) throw ParameterError("ParetoLaw: index must be positive");
    return std::pow(rng.uniform_pos(), -1.0 / law.index);
}

double pareto_survival(const ParetoLaw& law, double x) {
    if (!(law.index > 0.0)) throw ParameterError("ParetoLaw: index must be positive");
    if (x <= 1.0) return 1.0;
    return std::pow(x, -law.index);
}

double sample_tilted_innovation(const TiltedInnovationLaw& law, RandomStream& rng) {
    if (!(law.alpha > 0.0)) throw ParameterError("TiltedInnovationLaw: alpha must be positive");
    double g = rng.gamma(law.alpha + 0.5);
    while (g <= 0.0) g = rng.gamma(law.alpha + 0.5); // null set, guard underflow
    const double mag = std::sqrt(2.0 * g);
    return rng.rademacher() > 0 ? mag : -mag;
}

double tilted_abs_density(const TiltedInnovationLaw& law, double u) {
    if (u <= 0.0) return 0.0;
    const double a = law.alpha + 0.5;
    // |eps| = sqrt(2W), W ~ Gamma(a, 1): density u (u^2/2)^{a-1} e^{-u^2/2} / Gamma(a)
    const double w = 0.5 * u * u;
    return std::exp(std::log(u) + (a - 1.0) * std::log(w) - w - std::lgamma(a));
}

int sample_sign(const SignLaw& law, RandomStream& rng) {
    if (!(law.prob_plus >= 0.0 && law.prob_plus <= 1.0))
        throw ParameterError("SignLaw: prob_plus must lie in [0, 1]");
    return rng.uniform() < law.prob_plus ? 1 : -1;
}

namespace {

// Fritsch-Carlson slopes for a monotone cubic Hermite interpolant.
std::vector<double> monotone_slopes(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<double> d(n, 0.0);
    if (n < 2) return d;
    std::vector<double> sec(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) sec[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
    d[0] = sec[0];
    d[n - 1] = sec[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (sec[i - 1] * sec[i] <= 0.0)
            d[i] = 0.0;
        else {
            const double w1 = 2.0 * (x[i + 1] - x[i]) + (x[i] - x[i - 1]);
            const double w2 = (x[i + 1] - x[i]) + 2.0 * (x[i] - x[i - 1]);
            d[i] = (w1 + w2) / (w1 / sec[i - 1] + w2 / sec[i]);
        }
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (sec[i] == 0.0) {
            d[i] = 0.0;
            d[i + 1] = 0.0;
        } else {
            const double a = d[i] / sec[i];
            const double b = d[i + 1] / sec[i];
            const double s = a * a + b * b;
            if (s > 9.0) {
                const double t = 3.0 / std::sqrt(s);
                d[i] = t * a * sec[i];
                d[i + 1] = t * b * sec[i];
            }
        }
    }
    return d;
}

double hermite_eval(const std::vector<double>& x, const std::vector<double>& y,
                    const std::vector<double>& d, double xq) {
    const auto it = std::upper_bound(x.begin(), x.end(), xq);
    std::size_t i = (it == x.begin()) ? 0 : std::size_t(it - x.begin()) - 1;
    if (i + 1 >= x.size()) i = x.size() - 2;
    const double h = x[i + 1] - x[i];
    const double t = (xq - x[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * y[i] + h10 * h * d[i] + h01 * y[i + 1] + h11 * h * d[i + 1];
}

} // namespace

MonotoneCdfTable::MonotoneCdfTable(std::vector<double> grid, std::vector<double> cdf_values)
    : grid_(std::move(grid)), values_(std::move(cdf_values)) {
    if (grid_.size() != values_.size() || grid_.size() < 2)
        throw ParameterError("MonotoneCdfTable: need matching grid/value arrays of size >= 2");
    for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
        if (!(grid_[i] < grid_[i + 1]))
            throw ParameterError("MonotoneCdfTable: grid must be strictly increasing");
        if (values_[i + 1] < values_[i])
            throw ParameterError("MonotoneCdfTable: cdf values must be nondecreasing");
    }
    if (!(values_.front() <= 1e-12 && values_.back() >= 1.0 - 1e-12))
        throw ParameterError("MonotoneCdfTable: tabulated range must cover [1e-12, 1 - 1e-12]");
    slope_fwd_ = monotone_slopes(grid_, values_);
    slope_inv_ = monotone_slopes(values_, grid_);
}

double MonotoneCdfTable::cdf(double x) const {
    if (x <= grid_.front()) return x < grid_.front() ? 0.0 : values_.front();
    if (x >= grid_.back()) return x > grid_.back() ? 1.0 : values_.back();
    return std::clamp(hermite_eval(grid_, values_, slope_fwd_, x), 0.0, 1.0);
}

double MonotoneCdfTable::inverse(double p) const {
    const double pc = std::clamp(p, values_.front(), values_.back());
    return std::clamp(hermite_eval(values_, grid_, slope_inv_, pc), grid_.front(), grid_.back());
}

double backward_support_upper(const GarchParams& params) {
    return params.beta1 > 0.0 ? 1.0 / std::sqrt(params.beta1)
                              : std::numeric_limits<double>::infinity();
}

namespace {

constexpr double kZMax = 42.0; // integrand below 1e-300 past here for any Table-1 scale
constexpr double kSqrt2OverPi = 0.7978845608028654;

double tilted_weight(const GarchParams& params, double alpha, double z) {
    return std::pow(params.alpha1 * z * z + params.beta1, alpha) * std::exp(-0.5 * z * z);
}

void check_alpha_consistency(const GarchParams& params, double alpha) {
    validate(params);
    if (!(alpha > 0.0)) throw ParameterError("backward increment law: alpha must be positive");
    const double norm = garch_moment(params, alpha);
    if (std::abs(norm - 1.0) > 1e-6)
        throw ConsistencyError("backward increment law: alpha does not solve the "
                               "tail-index equation (normalization off by more than 1e-6)");
}

double lower_limit(double x, const GarchParams& params) {
    const double t = (1.0 / (x * x) - params.beta1) / params.alpha1;
    return t > 0.0 ? std::sqrt(t) : 0.0;
}

} // namespace

double backward_increment_cdf(double x, const GarchParams& params, double alpha, bool* clamped) {
    check_alpha_consistency(params, alpha);
    if (clamped) *clamped = false;
    const double upper = backward_support_upper(params);
    if (x <= 0.0) {
        if (clamped && x < 0.0) *clamped = true;
        return 0.0;
    }
    if (x >= upper) {
        if (clamped && x > upper) *clamped = true;
        return 1.0;
    }
    const double lo = lower_limit(x, params);
    if (lo >= kZMax) return 0.0;
    const auto f = [&params, alpha](double z) { return tilted_weight(params, alpha, z); };
    const double v = kSqrt2OverPi * adaptive_simpson(f, lo, kZMax, 2e-11);
    return std::clamp(v, 0.0, 1.0);
}

MonotoneCdfTable build_backward_sampler(const GarchParams& params, double alpha) {
    check_alpha_consistency(params, alpha);

    // Cumulative tail integral G(z) = sqrt(2/pi) Int_z^{42} w on a fine panel
    // grid, accumulated from the top so G(0) reproduces the normalization.
    const int panels = 6000;
    const double h = kZMax / panels;
    const GaussLegendre gl(8);
    const auto w = [&params, alpha](double z) { return tilted_weight(params, alpha, z); };
    std::vector<double> edge(panels + 1), gtail(panels + 1);
    for (int i = 0; i <= panels; ++i) edge[i] = i * h;
    gtail[panels] = 0.0;
    for (int i = panels - 1; i >= 0; --i)
        gtail[i] = gtail[i + 1] + kSqrt2OverPi * gl.integrate(w, edge[i], edge[i + 1]);
    if (std::abs(gtail[0] - 1.0) > 1e-8)
        throw NumericalError("build_backward_sampler: cumulative normalization failed");

    // G(l) for arbitrary l via the panel grid plus a partial-panel integral.
    const auto G = [&](double l) {
        if (l <= 0.0) return gtail[0];
        if (l >= kZMax) return 0.0;
        const int i = std::min(int(l / h), panels - 1);
        return gtail[i + 1] + kSqrt2OverPi * gl.integrate(w, l, edge[i + 1]);
    };

    // Probability targets logit-spaced over [1e-13, 1 - 1e-13].
    const int n = 8192;
    const double tmax = std::log((1.0 - 1e-13) / 1e-13); // logit(1 - 1e-13)
    std::vector<double> xs, ps;
    xs.reserve(n);
    ps.reserve(n);
    for (int j = 0; j < n; ++j) {
        const double t = -tmax + 2.0 * tmax * double(j) / double(n - 1);
        const double p = 1.0 / (1.0 + std::exp(-t));
        // Solve G(l) = p  (G decreasing); bracket on the panel grid first.
        auto it = std::lower_bound(gtail.rbegin(), gtail.rend(), p);
        int hi_idx = panels - int(it - gtail.rbegin()); // gtail[hi_idx] >= p is the left edge
        hi_idx = std::clamp(hi_idx, 0, panels - 1);
        double lo_l = edge[hi_idx], hi_l = edge[hi_idx + 1];
        // Safeguarded Newton: d/dl G = -sqrt(2/pi) w(l).
        double l = 0.5 * (lo_l + hi_l);
        for (int it2 = 0; it2 < 100; ++it2) {
            const double gv = G(l) - p;
            if (gv > 0.0)
                lo_l = l;
            else
                hi_l = l;
            const double dw = kSqrt2OverPi * w(l);
            double step = dw > 0.0 ? gv / dw : 0.0;
            double cand = l + step;
            if (!(cand > lo_l && cand < hi_l)) cand = 0.5 * (lo_l + hi_l);
            if (std::abs(cand - l) <= 1e-15 * std::max(1.0, std::abs(l))) {
                l = cand;
                break;
            }
            l = cand;
        }
        const double x = 1.0 / std::sqrt(params.alpha1 * l * l + params.beta1);
        if (!xs.empty() && !(x > xs.back())) {
            // Saturated near the upper endpoint: keep the larger probability.
            ps.back() = std::max(ps.back(), p);
            continue;
        }
        xs.push_back(x);
        ps.push_back(p);
    }
    if (xs.size() < 4096)
        throw NumericalError("build_backward_sampler: fewer than 4096 usable nodes");
    return MonotoneCdfTable(std::move(xs), std::move(ps));
}

} // namespace tailchain
