#pragma once

#include <span>
#include <vector>

#include "tailchain/errors.hpp"

namespace tailchain {

/// One self-mapped level [z, 5z], z = 5^i, of the piecewise map f.
/// f3 and f4 are the explicit linear pieces; f1 and the symmetric f2 are
/// defined implicitly through the Pareto pushforward requirement and
/// evaluated by bisection (relative tolerance 1e-12).
struct LevelBlock {
    double z = 1.0;

    double f3(double t) const { return 9.0 * z - 2.0 * t; }          // [3z,4z]: 3z -> z
    double f4(double t) const { return 4.0 * t - 15.0 * z; }         // [4z,5z]: z -> 5z
    double f3_inv(double x) const { return 3.0 * z + 0.5 * (3.0 * z - x); }
    double f4_inv(double x) const { return 4.0 * z + 0.25 * (x - z); }

    /// 1/f1^{-1}(x) = 1/x + 1/f3^{-1}(x) - 1/f4^{-1}(x) on [z, 3z].
    double f1_inv(double x) const {
        return 1.0 / (1.0 / x + 1.0 / f3_inv(x) - 1.0 / f4_inv(x));
    }

    double f1(double t) const; // [z, 2.25z] increasing z -> 3z
    double f2(double t) const; // [2.25z, 3z], symmetric, peak 5z at 2.625z

    /// Left-half inverse of f2: g in [2.25z, 2.625z] with
    /// 1/g - 1/(5.25z - g) = 1/x - 1/f4^{-1}(x), for x in [3z, 5z].
    double f2_left_inv(double x) const;

    double eval(double t) const; // dispatch over the four pieces
};

/// The Appendix map: f(t) = t for t <= 1, LevelBlock pieces above.
double eval_f(double t);

/// Max over the grid of |P(f(Y) > x) - 1/x| for Y ~ Par(1), with the
/// preimage measure accumulated exactly from numerically inverted
/// branches of the implemented f. Grid points must be >= 1 and keep
/// 1e-6 clear of branch junctions.
double verify_pareto_pushforward(std::span<const double> grid);

/// Conditional law of Y/x_i given f(Y) > x_i along x_i = c 5^i.
/// For c in [3, 5) the interval (1, b_c), b_c = (15+c)/(4c), carries no
/// mass and the law above b_c is exactly Par(1); c = 1 gives the pure
/// power sequence with conditional law Par(1) throughout.
struct AccumulationSummary {
    double c = 0.0;
    double b_c = 1.0;
    struct Level {
        double x = 0.0;
        double total_prob = 0.0;   // P(f(Y) > x), should equal 1/x
        double below_mass = 0.0;   // P(Y <= x | f(Y) > x)
        double gap_mass = 0.0;     // P(Y/x in (1, b_c) | f(Y) > x)
        double tail_max_dev = 0.0; // max_b |P(Y/x >= b | f(Y) > x) - 1/b|, b >= b_c
        // Exceedance region {f > x}: finite intervals plus the whole of
        // (tail_from, infinity).
        std::vector<std::pair<double, double>> region;
        double tail_from = 0.0;
    };
    std::vector<Level> levels;

    /// P(Y/x in (lo_mult x, hi_mult x) | f(Y) > x) at one level.
    double conditional_mass(int level, double lo_mult, double hi_mult) const;
};

AccumulationSummary accumulation_point_experiment(double c, int levels);

} // namespace tailchain
