#include "tailchain/counterexample.hpp"

#include <algorithm>
#include <cmath>

namespace tailchain {

namespace {

// Bisection for strictly monotone fn on [lo, hi]; increasing flags the
// direction. Relative tolerance 1e-12 on the abscissa.
template <class Fn>
double bisect(Fn&& fn, double lo, double hi, double target, bool increasing) {
    double flo = fn(lo) - target;
    if (increasing ? flo > 0.0 : flo < 0.0) return lo;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = fn(mid) - target;
        const bool go_right = increasing ? (fm < 0.0) : (fm > 0.0);
        if (go_right)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-13 * hi) break;
    }
    return 0.5 * (lo + hi);
}

} // namespace

double LevelBlock::f1(double t) const {
    // f1 = inverse of the explicit f1_inv; f1_inv is strictly increasing.
    return bisect([this](double x) { return f1_inv(x); }, z, 3.0 * z, t, true);
}

double LevelBlock::f2_left_inv(double x) const {
    const double rhs = 1.0 / x - 1.0 / f4_inv(x);
    const auto lhs = [this](double g) { return 1.0 / g - 1.0 / (5.25 * z - g); };
    return bisect(lhs, 2.25 * z, 2.625 * z, rhs, false);
}

double LevelBlock::f2(double t) const {
    const double tt = std::min(t, 5.25 * z - t); // reflect the right half
    const double lhs = 1.0 / tt - 1.0 / (5.25 * z - tt);
    const auto rhs = [this](double x) { return 1.0 / x - 1.0 / f4_inv(x); };
    return bisect(rhs, 3.0 * z, 5.0 * z, lhs, false);
}

double LevelBlock::eval(double t) const {
    const double u = t / z;
    if (u <= 2.25) return f1(t);
    if (u <= 3.0) return f2(t);
    if (u <= 4.0) return f3(t);
    return f4(t);
}

double eval_f(double t) {
    if (!(t >= 0.0)) throw ParameterError("eval_f: argument must be nonnegative");
    if (t <= 1.0) return t;
    int i = int(std::floor(std::log(t) / std::log(5.0)));
    double z = std::pow(5.0, i);
    if (t < z) {
        --i;
        z = std::pow(5.0, i);
    } else if (t >= 5.0 * z) {
        ++i;
        z = std::pow(5.0, i);
    }
    return LevelBlock{z}.eval(t);
}

namespace {

double pareto_mass(double a, double b) { // P(Y in (a, b)), 1 <= a <= b
    if (!(b > a)) return 0.0;
    return 1.0 / a - 1.0 / b;
}

// Branch inverses of the *implemented* f, found by bisecting eval_f over
// the monotone pieces. Keeps the pushforward oracle observational.
struct BlockInverses {
    LevelBlock blk;

    double inv1(double x) const { // f restricted to [z, 2.25z], increasing
        return bisect([this](double t) { return blk.eval(t); }, blk.z, 2.25 * blk.z, x, true);
    }
    double g2(double x) const { // left half of f2, increasing 3z -> 5z
        return bisect([this](double t) { return blk.eval(t); }, 2.25 * blk.z, 2.625 * blk.z, x,
                      true);
    }
    double inv3(double x) const { // f3 decreasing 3z -> z
        return bisect([this](double t) { return blk.eval(t); }, 3.0 * blk.z, 4.0 * blk.z, x,
                      false);
    }
    double inv4(double x) const { // f4 increasing z -> 5z
        return bisect([this](double t) { return blk.eval(t); }, 4.0 * blk.z, 5.0 * blk.z, x,
                      true);
    }
};

// {f > x} within [z, 5z] as intervals; everything above 5z belongs to the
// region for any x < 5z since higher blocks map into themselves.
struct ExceedRegion {
    std::vector<std::pair<double, double>> intervals;
    double tail_from = 0.0;

    double measure_in(double lo, double hi) const {
        double acc = 0.0;
        for (const auto& [a, b] : intervals)
            acc += pareto_mass(std::max(a, lo), std::min(b, hi));
        if (hi > tail_from) acc += pareto_mass(std::max(tail_from, lo), hi);
        return acc;
    }
    double total() const {
        double acc = 0.0;
        for (const auto& [a, b] : intervals) acc += pareto_mass(a, b);
        acc += 1.0 / tail_from;
        return acc;
    }
};

ExceedRegion exceed_region(double x) {
    const int i = int(std::floor(std::log(x) / std::log(5.0) + 1e-12));
    const double z = std::pow(5.0, i);
    BlockInverses bi{LevelBlock{z}};
    ExceedRegion r;
    r.tail_from = 5.0 * z;
    if (x < 3.0 * z) {
        r.intervals.push_back({bi.inv1(x), 2.25 * z});
        r.intervals.push_back({2.25 * z, 3.0 * z}); // all of I2: f2 >= 3z > x
        r.intervals.push_back({3.0 * z, bi.inv3(x)});
        r.intervals.push_back({bi.inv4(x), 5.0 * z});
    } else {
        const double g = bi.g2(x);
        r.intervals.push_back({g, 5.25 * z - g});
        r.intervals.push_back({bi.inv4(x), 5.0 * z});
    }
    return r;
}

} // namespace

double verify_pareto_pushforward(std::span<const double> grid) {
    double worst = 0.0;
    for (const double x : grid) {
        if (!(x >= 1.0)) throw ParameterError("verify_pareto_pushforward: grid points must be >= 1");
        const double p = exceed_region(x).total();
        worst = std::max(worst, std::abs(p - 1.0 / x));
    }
    return worst;
}

double AccumulationSummary::conditional_mass(int level, double lo_mult, double hi_mult) const {
    const Level& lv = levels.at(std::size_t(level));
    ExceedRegion r{lv.region, lv.tail_from};
    return r.measure_in(lo_mult * lv.x, hi_mult * lv.x) / lv.total_prob;
}

AccumulationSummary accumulation_point_experiment(double c, int levels) {
    const bool pure_power = (c == 1.0);
    if (!pure_power && !(c >= 3.0 && c < 5.0))
        throw ParameterError("accumulation_point_experiment: c must be 1 (pure powers) "
                             "or in [3, 5)");
    if (levels < 5) throw ParameterError("accumulation_point_experiment: need levels >= 5");

    AccumulationSummary out;
    out.c = c;
    out.b_c = pure_power ? 1.0 : (15.0 + c) / (4.0 * c);
    for (int i = 0; i < levels; ++i) {
        const double z = std::pow(5.0, i);
        const double x = c * z;
        ExceedRegion r = exceed_region(x);
        AccumulationSummary::Level lv;
        lv.x = x;
        lv.region = r.intervals;
        lv.tail_from = r.tail_from;
        lv.total_prob = r.total();
        lv.below_mass = r.measure_in(z, x) / lv.total_prob;
        lv.gap_mass = out.b_c > 1.0 ? r.measure_in(x, out.b_c * x) / lv.total_prob : 0.0;
        for (const double b : {std::max(1.0, out.b_c), 1.5 * std::max(1.0, out.b_c), 2.5, 6.0}) {
            const double surv = r.measure_in(b * x, 1e300) / lv.total_prob;
            lv.tail_max_dev = std::max(lv.tail_max_dev, std::abs(surv - 1.0 / b));
        }
        out.levels.push_back(std::move(lv));
    }
    return out;
}

} // namespace tailchain
