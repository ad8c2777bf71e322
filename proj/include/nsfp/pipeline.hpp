#pragma once

#include <array>
#include <string>
#include <vector>

#include "nsfp/besov.hpp"
#include "nsfp/config.hpp"
#include "nsfp/density.hpp"
#include "nsfp/fokker_planck.hpp"
#include "nsfp/noise.hpp"
#include "nsfp/sde.hpp"

namespace nsfp {

/// Per evaluation instant: empirical density, estimated drift, forward-PDE
/// solution and the derived functionals.
struct InstantReport {
    double time = 0.0;

    double kde_mass = 0.0;
    double kde_sup = 0.0;
    int kde_dropped = 0;

    double drift_masked_mass = 0.0;

    double fp_mass = 0.0;
    double fp_sup = 0.0;
    double fp_vs_kde_l1 = 0.0;

    double moment_g1 = 0.0; ///< (integral |G| f)
    double moment_g2 = 0.0; ///< (integral |G|^2 f)^(1/2)
    ProductBound product;   ///< Hoelder product bound at p = 2

    double energy_p1 = 0.0;
    double energy_p2 = 0.0;

    double besov_b1 = 0.0;          ///< sup_h |D_h^2 kde|_L1 / |h| over the ladder
    double stationary_defect = 0.0; ///< residual of (kde, drift) at this instant
};

struct BesovAuditRow {
    double t = 0.0, h = 0.0, diff_l1 = 0.0; ///< |D_h^2 kde(t)|_L1
};

struct MainCurveRow {
    double alpha = 0.0, t = 0.0, value = 0.0; ///< t^((d+alpha)/2) |kde(t)|_C^alpha
};

struct KernelEntryRow {
    int inequality = 0; ///< 0..3 as in KernelBoundSweep
    double t = 0.0, rho = 0.0, ratio = 0.0;
};

struct PipelineResult {
    uint64_t config_hash = 0;
    std::string config_text;
    AssumptionReport assumptions;
    std::vector<std::string> warnings;

    GridSpec grid;
    Ladder ladder;
    std::vector<double> diffusion_sigma;
    std::vector<double> stokes_lambda;
    std::vector<std::vector<double>> bandwidth; ///< per instant, per axis

    std::vector<InstantReport> instants;
    std::vector<GridFunction> kde, fp;
    std::vector<DriftField> drift;

    double g1_sup = 0.0; ///< running sup over instants of moment_g1
    double g2_sup = 0.0;
    double linf_weighted = 0.0; ///< sup_t t^(d/2) |kde(t)|_inf

    std::vector<double> alphas;
    std::vector<double> main_stat; ///< per alpha, sup over t >= t_min of the curve
    std::vector<MainCurveRow> main_curve;
    std::vector<BesovAuditRow> besov_audit;

    ExpMomentResult exp_monitor; ///< at the final instant
    double monitor_lambda = 0.0;

    std::vector<KernelEntryRow> kernel_rows;
    std::array<double, 4> kernel_cmax{};
    std::array<double, 4> kernel_spread{};
    double kernel_l1_constant = 0.0;
    double kernel_linf_constant = 0.0;

    std::vector<double> window_lengths;
    std::vector<double> window_residuals;

    EnsembleRun run; ///< full ensemble record, for downstream analysis
};

/// Structural checks only (noise support closure, subspace placement,
/// projected covariance); does not simulate.
AssumptionReport validate_run(const RunConfig& cfg);

/// The whole chain: validate, simulate the ensemble, estimate densities and
/// drifts at the evaluation instants, march the forward equation from a
/// point mass with the estimated drift schedule, and derive every reported
/// functional.  Throws ValidationError when the structural checks fail.
PipelineResult run_pipeline(const RunConfig& cfg);

/// Canonical report: sorted keys, no timestamps, shortest round-trip floats.
/// Byte-identical across runs of the same config on one platform.
std::string report_json(const PipelineResult& r);

/// Writes report.json, config.txt, instants.csv and snapshots.bin under
/// dir; returns the file names written.
std::vector<std::string> write_report_bundle(const PipelineResult& r, const std::string& dir);

/// Tabular data for a named plot ("main_curve", "kernel_bounds",
/// "fp_vs_kde", "besov_audit").  Empty name returns a header listing the
/// options; an unknown name throws ValidationError naming them.
std::string emit_plot_data(const PipelineResult& r, const std::string& which);

/// Recomputes the config and compares the fresh report byte-for-byte.
bool replay_matches(const RunConfig& cfg, const std::string& stored_json);

} // namespace nsfp
