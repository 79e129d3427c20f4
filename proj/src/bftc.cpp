#include "tailchain/bftc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tailchain {

namespace {

double draw_from_atoms(const std::vector<double>& values, const std::vector<double>& cum,
                       double point_mass_zero, RandomStream& rng) {
    const double u = rng.uniform();
    if (u < point_mass_zero) return 0.0;
    const double v = (u - point_mass_zero) / (1.0 - point_mass_zero);
    const auto it = std::lower_bound(cum.begin(), cum.end(), v);
    const std::size_t i = std::min(std::size_t(it - cum.begin()), values.size() - 1);
    return values[i];
}

struct AtomPool {
    std::vector<double> values;
    std::vector<double> cum;
    double total_weight = 0.0;
};

AtomPool finalize_pool(std::vector<std::pair<double, double>>& vw) {
    std::sort(vw.begin(), vw.end());
    AtomPool pool;
    pool.values.reserve(vw.size());
    pool.cum.reserve(vw.size());
    double acc = 0.0;
    for (const auto& [v, w] : vw) acc += w;
    pool.total_weight = acc;
    if (acc <= 0.0) return pool;
    double run = 0.0;
    for (const auto& [v, w] : vw) {
        run += w;
        pool.values.push_back(v);
        pool.cum.push_back(run / acc);
    }
    pool.cum.back() = 1.0;
    return pool;
}

} // namespace

double BackwardLaw::sample_a(RandomStream& rng) const {
    if (exact_a) return exact_a->sample(rng);
    return draw_from_atoms(a_values, a_cum, point_mass_zero, rng);
}

double BackwardLaw::sample_b(RandomStream& rng) const {
    if (b_values.empty()) return 0.0;
    return draw_from_atoms(b_values, b_cum, point_mass_zero_b, rng);
}

BackwardLaw build_adjoint(const IncrementLaw& increment, std::size_t pool_size,
                          RandomStream& rng) {
    if (pool_size < 100000)
        throw ParameterError("build_adjoint: pool_size must be at least 1e5");
    if (!increment.forward) throw ParameterError("build_adjoint: missing forward sampler");
    const double alpha = increment.index;
    const double p = increment.prob_plus;
    if (!(alpha > 0.0)) throw ParameterError("build_adjoint: index must be positive");
    if (!(p > 0.0 && p <= 1.0))
        throw ParameterError("build_adjoint: prob_plus must lie in (0, 1]");

    // L(M_{-1}/M_0 | M_0 = sigma) from the forward law: atoms M_0/M_1
    // carrying weights (sigma M_1)_+^alpha, normalized by P(M_0 = sigma).
    // M_1 equals A with probability p (M_0 = +1) and -B otherwise.
    std::vector<std::pair<double, double>> atoms_a, atoms_b;
    atoms_a.reserve(2 * pool_size);
    if (p < 1.0) atoms_b.reserve(2 * pool_size);
    for (std::size_t i = 0; i < pool_size; ++i) {
        const auto [a, b] = increment.forward(rng);
        const double m1_pos = a;  // M_0 = +1
        const double m1_neg = -b; // M_0 = -1
        if (m1_pos > 0.0) atoms_a.emplace_back(1.0 / m1_pos, p * std::pow(m1_pos, alpha));
        if (m1_neg > 0.0 && p < 1.0)
            atoms_a.emplace_back(-1.0 / m1_neg, (1.0 - p) * std::pow(m1_neg, alpha));
        if (p < 1.0) {
            if (m1_pos < 0.0) atoms_b.emplace_back(1.0 / m1_pos, p * std::pow(-m1_pos, alpha));
            if (m1_neg < 0.0)
                atoms_b.emplace_back(1.0 / (-m1_neg), (1.0 - p) * std::pow(-m1_neg, alpha));
        }
    }

    BackwardLaw law;
    AtomPool pa = finalize_pool(atoms_a);
    if (pa.total_weight <= 0.0)
        throw NumericalError("build_adjoint: degenerate pool, all forward weights vanish");
    law.a_values = std::move(pa.values);
    law.a_cum = std::move(pa.cum);
    law.point_mass_zero =
        std::max(0.0, 1.0 - pa.total_weight / (double(pool_size) * p));

    if (p < 1.0) {
        AtomPool pb = finalize_pool(atoms_b);
        law.b_values = std::move(pb.values);
        law.b_cum = std::move(pb.cum);
        law.point_mass_zero_b =
            std::min(1.0, std::max(0.0, 1.0 - pb.total_weight / (double(pool_size) * (1.0 - p))));
    }
    return law;
}

TailChainPath simulate_bftc(const BftcSpec& spec, int m, int n, RandomStream& rng) {
    if (m < 0 || n < 0) throw ParameterError("simulate_bftc: m, n must be nonnegative");
    if (spec.s < 0) throw ParameterError("simulate_bftc: s must be nonnegative");
    if (!spec.start_block) throw ParameterError("simulate_bftc: missing start block sampler");
    if (m > 0 && !spec.backward)
        throw ParameterError("simulate_bftc: backward law required for m > 0");

    TailChainPath path;
    path.m = m;
    path.s = spec.s;
    path.values.assign(std::size_t(m + spec.s + n + 1), 0.0);

    const std::vector<double> start = spec.start_block(rng);
    if (int(start.size()) != spec.s + 1)
        throw ParameterError("simulate_bftc: start block size must be s + 1");
    for (int t = 0; t <= spec.s; ++t) path.values[std::size_t(t + m)] = start[std::size_t(t)];

    double y = start.back();
    for (int t = spec.s + 1; t <= spec.s + n; ++t) {
        const auto [a, b] = spec.increment.forward(rng);
        y = transition_h(y, a, b);
        path.values[std::size_t(t + m)] = y;
    }

    const bool signed_chain = spec.increment.prob_plus < 1.0;
    y = start.front();
    for (int t = 1; t <= m; ++t) {
        const double a = spec.backward->sample_a(rng);
        const double b = signed_chain ? spec.backward->sample_b(rng) : 0.0;
        y = transition_h(y, a, b);
        path.values[std::size_t(m - t)] = y;
    }
    return path;
}

double point_mass_diagnostic(double chi_moment, double C) {
    if (!(C > 0.0)) throw ParameterError("point_mass_diagnostic: C must be positive");
    if (!(chi_moment >= 0.0))
        throw ParameterError("point_mass_diagnostic: moment must be nonnegative");
    if (chi_moment > C * (1.0 + 1e-9))
        throw ConsistencyError("point_mass_diagnostic: E|chi|^alpha exceeds C");
    return std::clamp(1.0 - chi_moment / C, 0.0, 1.0);
}

IncrementLaw garch_increment_law(const GarchParams& params, const TailIndex& ti) {
    validate(params);
    IncrementLaw law;
    law.index = 2.0 * ti.alpha;
    law.prob_plus = 1.0;
    const double a1 = params.alpha1, b1 = params.beta1;
    law.forward = [a1, b1](RandomStream& rng) {
        const double e = rng.normal();
        const double a = std::sqrt(a1 * e * e + b1);
        return std::pair<double, double>(a, a);
    };
    return law;
}

IncrementLaw gjr_garch_increment_law(double alpha1, double delta1, double beta1,
                                     double index) {
    if (!(alpha1 > 0.0) || !(beta1 >= 0.0) || !(delta1 >= 0.0))
        throw ParameterError("gjr_garch_increment_law: bad parameters");
    IncrementLaw law;
    law.index = index;
    law.prob_plus = 1.0;
    law.forward = [alpha1, delta1, beta1](RandomStream& rng) {
        const double e = rng.normal();
        const double coef = alpha1 + (e > 0.0 ? delta1 : 0.0);
        const double a = std::sqrt(coef * e * e + beta1);
        return std::pair<double, double>(a, a);
    };
    return law;
}

IncrementLaw sr_sarv_increment_law(double alpha1, double beta1, double index,
                                   std::function<double(RandomStream&)> eta_sampler,
                                   bool sqrt_form) {
    if (!(alpha1 > 0.0) || !(beta1 >= 0.0))
        throw ParameterError("sr_sarv_increment_law: bad parameters");
    if (!eta_sampler) throw ParameterError("sr_sarv_increment_law: missing eta sampler");
    IncrementLaw law;
    law.index = index;
    law.prob_plus = 1.0;
    law.forward = [alpha1, beta1, eta_sampler, sqrt_form](RandomStream& rng) {
        const double eta = eta_sampler(rng);
        const double v = alpha1 * eta + beta1;
        const double a = sqrt_form ? std::sqrt(v) : v;
        return std::pair<double, double>(a, a);
    };
    return law;
}

BftcSpec garch_bftc_spec(const GarchParams& params, const TailIndex& ti,
                         const MonotoneCdfTable* exact_backward) {
    BftcSpec spec;
    spec.increment = garch_increment_law(params, ti);
    spec.s = 1;
    const double two_alpha = 2.0 * ti.alpha;
    const double a1 = params.alpha1, b1 = params.beta1;
    const double alpha = ti.alpha;
    spec.start_block = [two_alpha, a1, b1, alpha](RandomStream& rng) {
        const double y = sample_pareto(ParetoLaw{two_alpha}, rng);
        const double e = sample_tilted_innovation(TiltedInnovationLaw{alpha}, rng);
        const double s0 = y / std::abs(e);
        return std::vector<double>{s0, s0 * std::sqrt(a1 * e * e + b1)};
    };
    if (exact_backward) {
        BackwardLaw bw;
        bw.exact_a = exact_backward;
        spec.backward = std::move(bw);
    }
    return spec;
}

} // namespace tailchain
