#pragma once

#include <map>
#include <string>
#include <vector>

#include "nsfp/lattice.hpp"
#include "nsfp/spectral.hpp"
#include "nsfp/subspace.hpp"

namespace nsfp {

/// Diagonal noise covariance on the mode basis: each mode (k, pol) is forced
/// by an independent Brownian motion with amplitude sigma(k, pol), and
/// sigma(-k, pol) == sigma(k, pol) so real fields stay real.
///
/// Amplitude resolution order: per-mode override, then per-shell override
/// (keyed by |k|^2), then the power law |k|^-decay restricted to the support.
struct NoiseSpec {
    double decay = 2.0;                       ///< power-law exponent, must be >= 2
    bool line_support = false;                ///< restrict support to multiples of line_dir
    Vec3i line_dir{1, 0, 0};
    std::map<int64_t, double> shell_override; ///< |k|^2 -> amplitude
    std::map<std::string, double> mode_override; ///< "k1,k2,k3:pol" (canonical k) -> amplitude

    double sigma(Vec3i k, int pol) const;

    /// Wavevectors of the mode set forced in both polarizations; this is the
    /// generating set whose group closure the hypoellipticity check examines.
    std::vector<Vec3i> active_wavevectors(const ModeSet& modes) const;

    static std::string mode_key(Vec3i k, int pol);
    void validate() const; ///< throws ValidationError on negative amplitudes or decay < 2
};

/// Outcome of the structural noise checks for a planned run.
struct AssumptionReport {
    bool diagonal = true;          ///< diagonal covariance holds by construction
    LatticeGenReport lattice;      ///< group closure of the fully forced wavevectors
    bool subspace_in_cutoff = false;
    bool covariance_nonsingular = false;
    std::vector<double> subspace_variances; ///< diagonal of the projected covariance
    double condition = 0.0;                 ///< max/min ratio of those variances
    std::vector<std::string> failures;      ///< one message per violated requirement

    bool all_ok() const { return failures.empty(); }
    std::string summary() const;
};

/// Checks the four structural requirements: diagonal covariance, group
/// closure of the forced set, observation subspace inside the cutoff, and
/// non-singular projected covariance.
AssumptionReport check_assumptions(const ModeSet& modes, const NoiseSpec& noise,
                                   const Subspace& subspace);

/// Diagonal entries sigma(k,pol)^2 of the projected noise covariance in
/// subspace coordinates.
std::vector<double> subspace_covariance(const NoiseSpec& noise, const Subspace& subspace);

} // namespace nsfp
