#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nsfp/noise.hpp"
#include "nsfp/nonlinearity.hpp"
#include "nsfp/spectral.hpp"
#include "nsfp/subspace.hpp"

namespace nsfp {

/// Parameters of one ensemble simulation of the truncated stochastic system
///    du + (nu A u + B(u,u)) dt = dW,   W diagonal per NoiseSpec.
/// Time stepping is Euler-Maruyama, implicit in the Stokes term:
///    c' = (c - dt b + dw) / (1 + nu |k|^2 dt),
/// which is unconditionally stable in the linear part.
struct SimConfig {
    int cutoff = 1;
    double nu = 1.0;
    double dt = 1e-3;
    double horizon = 1.0;
    int ensemble = 1000;
    uint64_t seed = 0;
    bool linear_only = false;       ///< drop the convection term entirely
    NoiseSpec noise;
    std::vector<int> monitor_ps{1}; ///< exponents for the energy monitors; 1 is always kept
    double blowup_threshold = 1e12; ///< abort when the H norm squared exceeds this
};

/// Recorded output of an ensemble run.  Evaluation instants are snapped to
/// the step grid; per-instant arrays are laid out [time][member * dim + axis]
/// for the projections and [time][member] for the scalar monitors.
struct EnsembleRun {
    double dt = 0.0;
    std::vector<double> times;   ///< snapped evaluation instants, increasing
    std::vector<int64_t> steps;  ///< step index of each instant
    int dim = 0;                 ///< observation subspace dimension
    int members = 0;

    std::vector<std::vector<double>> proj_u; ///< subspace coordinates of the state
    std::vector<std::vector<double>> proj_b; ///< subspace coordinates of B(u,u)

    std::vector<std::vector<double>> norm_h2; ///< |u|_H^2 at the instant
    std::vector<std::vector<double>> norm_v2; ///< |u|_V^2 at the instant
    std::vector<std::vector<double>> sup_h2;  ///< running sup of |u|_H^2 over [0, t]

    /// integral_p[i][t][m] = nu * int_0^t |u|_V^2 |u|_H^(2p-2) ds for
    /// p = monitor_ps[i], accumulated with right-endpoint values.
    std::vector<int> monitor_ps;
    std::vector<std::vector<std::vector<double>>> integral_p;

    std::vector<std::string> warnings;

    /// Index of the recorded instant closest to t.
    size_t closest_time_index(double t) const;
};

/// Runs `cfg.ensemble` independent trajectories from the shared initial
/// state and records projections and energy monitors at the requested
/// instants.  Trajectories are pure functions of (seed, member), so results
/// do not depend on scheduling and ensembles can be extended reproducibly.
/// Throws ValidationError on malformed parameters and NumericalError when a
/// trajectory leaves the blow-up guard.
EnsembleRun simulate_ensemble(const SimConfig& cfg, const ModeSet& modes,
                              const SpectralField& ic, const Subspace& subspace,
                              const std::vector<double>& requested_times);

/// Ensemble mean of  sup_{[0,t]} |u|_H^(2p) + nu int_0^t |u|_V^2 |u|_H^(2p-2) ds
/// at recorded instant t_idx.  p must be one of the run's monitor exponents.
double energy_moment(const EnsembleRun& run, size_t t_idx, int p);

/// Exponential monitor with tail diagnostics.  A finite-sample estimate of
/// an exponential moment can be dominated by a handful of members; when the
/// top 1% of members carry more than half the total the estimate is flagged.
struct ExpMomentResult {
    double value = 0.0;     ///< mean of exp(lambda sup |u|_H^2 + lambda nu int |u|_V^2)
    bool heavy_tail = false;
    double top_share = 0.0; ///< mass fraction carried by the top 1% of members
};

ExpMomentResult exp_energy_moment(const EnsembleRun& run, size_t t_idx, double lambda);

} // namespace nsfp
