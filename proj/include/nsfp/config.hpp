#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nsfp/noise.hpp"
#include "nsfp/sde.hpp"
#include "nsfp/spectral.hpp"
#include "nsfp/subspace.hpp"

namespace nsfp {

/// One run description, the unit of reproducibility: everything a pipeline
/// invocation depends on is in here, and the canonical serialization hashes
/// to a stable fingerprint stamped into reports.
struct RunConfig {
    int cutoff = 1;
    double nu = 1.0;
    double dt = 1e-3;
    double horizon = 1.0;
    int ensemble = 10000;
    uint64_t seed = 1;
    bool linear_only = false;
    std::string ic = "zero"; ///< "zero" or "k1,k2,k3:pol:part:value;..."
    NoiseSpec noise;
    std::string subspace = "0,0,1:1:cos";

    int grid_nodes = 101;
    double grid_extent_sigmas = 6.0;

    double fp_dt = 1.0 / 64.0;
    double fp_negative_tolerance = 1e-6;

    double kde_min_effective = 10.0;

    std::vector<double> eval_times{0.25, 0.5, 1.0};
    std::vector<double> besov_alphas{0.25, 0.5, 0.75};
    double besov_t_min = -1.0; ///< < 0 selects the default 10 dt

    std::vector<int> monitor_ps{1, 2};
    double monitor_lambda = 0.0;

    std::vector<double> stationary_windows; ///< averaging windows before the horizon

    std::string out_dir = "out";
};

/// key = value lines, '#' comments.  Unknown or repeated keys are errors.
RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);

/// Every key in a fixed order with %.17g numbers; parses back to an
/// identical config.
std::string canonical_config_text(const RunConfig& cfg);

/// FNV-1a over the canonical text.
uint64_t config_hash(const RunConfig& cfg);

/// Built-in configurations: "ou-linear" (exactly solvable linear check),
/// "pair-full" (one-pair observation of the smallest system, the main
/// pipeline target), "single-coordinate" (one coordinate of the two-shell
/// system), "degenerate-line" (noise support on a line; fails validation).
RunConfig preset_config(const std::string& name);
std::vector<std::string> preset_names();

SimConfig make_sim_config(const RunConfig& cfg);
SpectralField build_initial_state(const RunConfig& cfg, const ModeSet& modes);
Subspace build_subspace(const RunConfig& cfg);
double besov_t_min(const RunConfig& cfg);

} // namespace nsfp
