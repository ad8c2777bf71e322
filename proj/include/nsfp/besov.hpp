#pragma once

#include <array>
#include <string>
#include <vector>

#include "nsfp/grid.hpp"

namespace nsfp {

/// Discretization of the increment set {h : |h| <= hmax}: unit directions
/// (axes plus diagonals) times log-spaced magnitudes.  The magnitude range
/// is [2 max_a dx_a, min(1, 0.45 smallest box width)] so every increment is
/// resolvable and keeps valid evaluation points.
struct Ladder {
    std::vector<std::vector<double>> dirs; ///< unit vectors
    std::vector<double> mags;              ///< increasing magnitudes
};

Ladder make_ladder(const GridSpec& grid, int count = 20);

/// L^p norm over the valid region of the n-fold difference
///   D_h^n f(x) = sum_i (-1)^(n-i) C(n,i) f(x + i h),
/// evaluated at grid nodes with multilinear interpolation; nodes whose
/// shifted points leave the box are excluded.  Pass p = infinity for the
/// sup.  Returns 0 when no node is valid.
double diff_lp_norm(const GridFunction& f, const std::vector<double>& h, int n, double p);

/// Discrete Besov seminorm with smoothness alpha, integrability p, summation
/// exponent q, using n-fold differences (n > alpha required):
///  q = inf: sup over the ladder of |h|^-alpha |D_h^n f|_p,
///  q < inf: polar quadrature of the same quantity over the ladder.
double besov_seminorm(const GridFunction& f, double alpha, double p, double q, int n,
                      const Ladder& ladder);

/// |f|_inf plus the alpha-Hoelder (sup-sup) seminorm with the minimal
/// difference order n = floor(alpha) + 1.
double holder_norm(const GridFunction& f, double alpha, const Ladder& ladder);

/// Empirical verification data for the heat-kernel estimates
///   |P_t|_p           <= c t^(-d/2q),
///   |grad P_t|_p      <= c t^(-d/2q - 1/2),
///   |D_h^n P_t|_p     <= c t^(-d/2q)       (1 ^ |h|/sqrt(t))^n,
///   |D_h^n grad P_t|_p <= c t^(-d/2q - 1/2) (1 ^ |h|/sqrt(t))^n,
/// with 1/q = 1 - 1/p.  Ratios of left to right side depend only on
/// rho = |h|/sqrt(t) by parabolic scaling, so the sweep evaluates a grid of
/// times against shared rho values and reports the spread within each rho
/// group (1 up to quadrature error) and the largest ratio, an empirical
/// constant c.  Differences and the gradient component are taken along the
/// first axis; norms factor over axes and are computed by 1-d quadrature.
struct KernelBoundSweep {
    struct Entry {
        double t = 0.0;
        double rho = 0.0; ///< 0 for the two difference-free estimates
        double ratio = 0.0;
    };
    std::array<std::vector<Entry>, 4> entries;
    std::array<double, 4> cmax{};
    std::array<double, 4> group_spread{}; ///< worst max/min ratio over matched rho

    double l1_constant = 0.0;   ///< measured |P_t|_1, exactly 1 in theory
    double linf_constant = 0.0; ///< measured |P_t|_inf t^(d/2), (2 pi)^(-d/2) det(S)^(-1/2)
};

KernelBoundSweep kernel_bound_sweep(const std::vector<double>& sigma, double p, int n,
                                    const std::vector<double>& ts,
                                    const std::vector<double>& rhos);

/// Regularity bootstrap iteration
///   alpha_(j+1) = max(d/2, d/(2q) + alpha_j / p - 1/2),  1/q = 1 - 1/p,
/// which contracts the gap to d/2 by gap/p - 1/2 per step.  Requires
/// p in (1, d/(d-1)) so the step is a strict improvement near the target.
struct BootstrapResult {
    std::vector<double> alphas; ///< alpha_0 ... first clamped value
    int steps = 0;              ///< iterations until the clamp engages
    int predicted_bound = 0;    ///< closed-form bound on that count, >= 2
};

BootstrapResult bootstrap_exponents(int d, double p, double alpha0);

/// sup over the schedule of t^w |f(t)|_inf.
double time_weighted_linf_sup(const std::vector<double>& times,
                              const std::vector<const GridFunction*>& fs, double w);

/// sup over the schedule of t^w (Hoelder alpha norm of f(t)).
double time_weighted_holder_sup(const std::vector<double>& times,
                                const std::vector<const GridFunction*>& fs, double alpha,
                                double w, const Ladder& ladder);

} // namespace nsfp
