#include "nsfp/sde.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>

#include "nsfp/errors.hpp"
#include "nsfp/rng.hpp"

namespace nsfp {

namespace {

double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

// Per conjugate pair: canonical wavevector index, Stokes eigenvalue, and for
// each polarization the noise amplitude (scaled by sqrt(dt)) together with
// its position in the forced-coordinate list, or -1 when unforced.  The
// position keys the counter RNG, so the noise a coordinate sees is
// independent of which other coordinates are forced.
struct PairPlan {
    size_t w = 0;
    double lambda = 0.0;
    double sig_sqdt[2] = {0.0, 0.0};
    int block[2] = {-1, -1};
};

} // namespace

size_t EnsembleRun::closest_time_index(double t) const {
    if (times.empty()) throw ValidationError("run has no recorded instants");
    size_t best = 0;
    for (size_t i = 1; i < times.size(); ++i)
        if (std::abs(times[i] - t) < std::abs(times[best] - t)) best = i;
    return best;
}

EnsembleRun simulate_ensemble(const SimConfig& cfg, const ModeSet& modes,
                              const SpectralField& ic, const Subspace& subspace,
                              const std::vector<double>& requested_times) {
    if (cfg.cutoff != modes.cutoff())
        throw ValidationError("config cutoff disagrees with the mode set");
    if (!(cfg.nu > 0.0)) throw ValidationError("viscosity must be positive");
    if (!(cfg.dt > 0.0)) throw ValidationError("time step must be positive");
    if (!(cfg.horizon > 0.0)) throw ValidationError("horizon must be positive");
    if (cfg.ensemble < 1) throw ValidationError("ensemble size must be at least 1");
    if (!(cfg.blowup_threshold > 0.0))
        throw ValidationError("blow-up threshold must be positive");
    if (&ic.modes() != &modes)
        throw ValidationError("initial state lives on a different mode set");
    if (requested_times.empty())
        throw ValidationError("no evaluation times requested");
    cfg.noise.validate();
    if (subspace.dim() == 0) throw ValidationError("observation subspace is empty");
    if (subspace.max_norm2() > cfg.cutoff * int64_t(cfg.cutoff))
        throw ValidationError("observation subspace reaches outside the cutoff");

    const int64_t total_steps = std::llround(cfg.horizon / cfg.dt);
    if (total_steps < 1) throw ValidationError("horizon shorter than one time step");

    EnsembleRun run;
    run.dt = cfg.dt;
    run.dim = subspace.dim();
    run.members = cfg.ensemble;

    for (double t : requested_times) {
        if (!(t >= 0.0)) throw ValidationError("evaluation times must be nonnegative");
        int64_t j = std::llround(t / cfg.dt);
        if (j > total_steps) throw ValidationError("evaluation time beyond the horizon");
        run.steps.push_back(j);
    }
    std::sort(run.steps.begin(), run.steps.end());
    run.steps.erase(std::unique(run.steps.begin(), run.steps.end()), run.steps.end());
    for (int64_t j : run.steps) run.times.push_back(double(j) * cfg.dt);

    run.monitor_ps = cfg.monitor_ps;
    run.monitor_ps.push_back(1);
    std::sort(run.monitor_ps.begin(), run.monitor_ps.end());
    run.monitor_ps.erase(std::unique(run.monitor_ps.begin(), run.monitor_ps.end()),
                         run.monitor_ps.end());
    if (run.monitor_ps.front() < 1)
        throw ValidationError("monitor exponents must be positive integers");

    const double fastest = cfg.nu * cfg.dt * double(cfg.cutoff) * double(cfg.cutoff);
    if (fastest > 2.0)
        run.warnings.push_back(
            "time step under-resolves the fastest dissipative mode (nu * dt * "
            "max |k|^2 = " + std::to_string(fastest) + ")");

    // Static per-pair plan shared by all members.
    const auto& waves = modes.wavevectors();
    std::vector<PairPlan> plan;
    int blocks = 0;
    for (size_t w : modes.canonical_indices()) {
        PairPlan p;
        p.w = w;
        p.lambda = double(modes.norm2(w));
        for (int pol = 1; pol <= 2; ++pol) {
            double sig = cfg.noise.sigma(waves[w], pol);
            if (sig > 0.0) {
                p.sig_sqdt[pol - 1] = sig * std::sqrt(cfg.dt);
                p.block[pol - 1] = blocks++;
            }
        }
        plan.push_back(p);
    }

    std::optional<BilinearTable> table;
    if (!cfg.linear_only) table.emplace(modes);
    const bool need_b = table && !table->triples().empty();

    const size_t nt = run.times.size();
    const size_t np = run.monitor_ps.size();
    run.proj_u.assign(nt, std::vector<double>(size_t(run.members) * run.dim, 0.0));
    run.proj_b.assign(nt, std::vector<double>(size_t(run.members) * run.dim, 0.0));
    run.norm_h2.assign(nt, std::vector<double>(run.members, 0.0));
    run.norm_v2.assign(nt, std::vector<double>(run.members, 0.0));
    run.sup_h2.assign(nt, std::vector<double>(run.members, 0.0));
    run.integral_p.assign(np, run.norm_h2);

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    BilinearScratch scratch;
    SpectralField bfield(modes);

    for (int m = 0; m < cfg.ensemble; ++m) {
        SpectralField u = ic;
        double suph2 = u.norm_h_sq();
        std::vector<double> integ(np, 0.0);
        size_t next = 0;

        for (int64_t s = 0;; ++s) {
            const bool snap = next < run.steps.size() && run.steps[next] == s;
            const bool last = s == total_steps;
            if (need_b && (snap || !last)) bilinear_into(*table, u, u, bfield, scratch);

            if (snap) {
                std::vector<double> xu = subspace.project(u);
                std::vector<double> xb =
                    need_b ? subspace.project(bfield) : std::vector<double>(run.dim, 0.0);
                for (int a = 0; a < run.dim; ++a) {
                    run.proj_u[next][size_t(m) * run.dim + a] = xu[a];
                    run.proj_b[next][size_t(m) * run.dim + a] = xb[a];
                }
                run.norm_h2[next][m] = u.norm_h_sq();
                run.norm_v2[next][m] = u.norm_v_sq();
                run.sup_h2[next][m] = suph2;
                for (size_t pi = 0; pi < np; ++pi) run.integral_p[pi][next][m] = integ[pi];
                ++next;
            }
            if (last) break;

            for (const PairPlan& p : plan) {
                const double denom = 1.0 / (1.0 + cfg.nu * p.lambda * cfg.dt);
                for (int pol = 1; pol <= 2; ++pol) {
                    Cplx c = u.coeff(p.w, pol);
                    Cplx b = need_b ? bfield.coeff(p.w, pol) : Cplx(0);
                    Cplx dw(0);
                    if (p.block[pol - 1] >= 0) {
                        auto z = normal_pair(cfg.seed, uint64_t(m), uint64_t(s),
                                             uint32_t(p.block[pol - 1]));
                        dw = p.sig_sqdt[pol - 1] * inv_sqrt2 * Cplx(z[0], z[1]);
                    }
                    u.set_pair(p.w, pol, (c - cfg.dt * b + dw) * denom);
                }
            }

            const double h2 = u.norm_h_sq();
            const double v2 = u.norm_v_sq();
            suph2 = std::max(suph2, h2);
            for (size_t pi = 0; pi < np; ++pi)
                integ[pi] += cfg.dt * cfg.nu * v2 * ipow(h2, run.monitor_ps[pi] - 1);
            if (!std::isfinite(h2) || h2 > cfg.blowup_threshold)
                throw NumericalError("trajectory blow-up: member " + std::to_string(m) +
                                     " at step " + std::to_string(s + 1) +
                                     " has |u|_H^2 = " + std::to_string(h2));
        }
    }
    return run;
}

double energy_moment(const EnsembleRun& run, size_t t_idx, int p) {
    if (t_idx >= run.times.size()) throw ValidationError("instant index out of range");
    auto it = std::find(run.monitor_ps.begin(), run.monitor_ps.end(), p);
    if (it == run.monitor_ps.end())
        throw ValidationError("exponent " + std::to_string(p) +
                              " was not monitored in this run");
    size_t pi = size_t(it - run.monitor_ps.begin());
    double sum = 0.0;
    for (int m = 0; m < run.members; ++m)
        sum += ipow(run.sup_h2[t_idx][m], p) + run.integral_p[pi][t_idx][m];
    return sum / double(run.members);
}

ExpMomentResult exp_energy_moment(const EnsembleRun& run, size_t t_idx, double lambda) {
    if (t_idx >= run.times.size()) throw ValidationError("instant index out of range");
    auto it = std::find(run.monitor_ps.begin(), run.monitor_ps.end(), 1);
    if (it == run.monitor_ps.end())
        throw ValidationError("run is missing the p = 1 monitor");
    size_t pi = size_t(it - run.monitor_ps.begin());

    std::vector<double> terms(run.members);
    for (int m = 0; m < run.members; ++m)
        terms[m] = std::exp(lambda * (run.sup_h2[t_idx][m] + run.integral_p[pi][t_idx][m]));

    ExpMomentResult res;
    double total = 0.0;
    for (double v : terms) total += v;
    res.value = total / double(run.members);
    if (!std::isfinite(res.value))
        throw NumericalError("exponential monitor overflowed; lambda is too large");

    size_t top = std::max<size_t>(1, size_t(run.members) / 100);
    std::nth_element(terms.begin(), terms.begin() + (top - 1), terms.end(),
                     std::greater<double>());
    double top_sum = 0.0;
    for (size_t i = 0; i < top; ++i) top_sum += terms[i];
    res.top_share = total > 0.0 ? top_sum / total : 0.0;
    res.heavy_tail = res.top_share > 0.5;
    return res;
}

} // namespace nsfp
