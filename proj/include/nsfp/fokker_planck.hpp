#pragma once

#include <string>
#include <vector>

#include "nsfp/density.hpp"
#include "nsfp/grid.hpp"

namespace nsfp {

/// Forward equation solved here, for the projected coordinates x:
///   d/dt f = 1/2 sum_a sigma_a^2 d^2_a f + sum_a d_a (G_a f),
/// the law of dx = -G(x) dt + sigma dW with diagonal diffusion.

/// Product Gaussian with per-axis standard deviations, evaluated at x.
double kernel_eval(const std::vector<double>& x, const std::vector<double>& center,
                   const std::vector<double>& std_dev);

/// Same kernel sampled on every grid node.
GridFunction kernel_on_grid(const GridSpec& grid, const std::vector<double>& center,
                            const std::vector<double>& std_dev);

/// Discretized convolution kernels for one Duhamel step of size dt:
/// full-step and half-step smoothing (taps sum to 1 exactly) and the
/// derivative of the half-step kernel (taps antisymmetric, sum 0).
/// Throws ValidationError when sigma sqrt(dt/2) < min_kernel_cells * dx,
/// where the dipole kernel degenerates on the grid.
struct FpKernels {
    std::vector<std::vector<double>> full;
    std::vector<std::vector<double>> half;
    std::vector<std::vector<double>> deriv;
};

FpKernels make_fp_kernels(const GridSpec& grid, const std::vector<double>& diffusion_sigma,
                          double dt, double min_kernel_cells);

/// One marching step of the interaction (Duhamel) form
///   f <- P_dt * f + dt sum_a d_a P_(dt/2) * (G_a f),
/// P_t the heat propagator, * convolution.  The drift enters through a
/// smoothed derivative, so no CFL condition ties dt to the grid spacing.
void duhamel_step(GridFunction& f, const FpKernels& kernels, const DriftField& G, double dt);

struct FpOptions {
    double dt = 1.0 / 64.0;
    double negative_tolerance = 1e-6; ///< allowed undershoot relative to the sup
    double min_kernel_cells = 1.2;    ///< resolvability bound for the half-step kernel
};

struct FpResult {
    std::vector<double> times;   ///< output instants, snapped to the step grid
    std::vector<GridFunction> f; ///< density at those instants
    std::vector<double> mass;    ///< box mass at those instants
    std::vector<std::string> warnings;
};

/// Marches the equation from a point mass at x0 at time zero.  The first
/// step is exact for frozen drift: a Gaussian of covariance dt sigma^2
/// centered at the drifted start.  `drift_times`/`drifts` form a
/// piecewise-constant-in-time schedule; each step uses the entry nearest its
/// midpoint.  Throws NumericalError when the solution undershoots below
/// -negative_tolerance * sup f.
FpResult solve_fp(const GridSpec& grid, const std::vector<double>& diffusion_sigma,
                  const std::vector<double>& x0, const std::vector<double>& drift_times,
                  const std::vector<const DriftField*>& drifts,
                  const std::vector<double>& output_times, const FpOptions& opt);

/// L1 norm over interior nodes of the stationary defect
///   1/2 sum_a sigma_a^2 d^2_a f + sum_a d_a (G_a f)
/// with central differences; zero for an invariant density.
double stationary_residual(const GridFunction& f, const DriftField& G,
                           const std::vector<double>& diffusion_sigma);

} // namespace nsfp
