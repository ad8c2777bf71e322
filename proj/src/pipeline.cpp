#include "nsfp/pipeline.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <utility>

#include <json.hpp>

#include "nsfp/errors.hpp"

namespace nsfp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_hash(uint64_t h) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
    return buf;
}

} // namespace

AssumptionReport validate_run(const RunConfig& cfg) {
    cfg.noise.validate();
    ModeSet modes(cfg.cutoff);
    Subspace sub = build_subspace(cfg);
    return check_assumptions(modes, cfg.noise, sub);
}

PipelineResult run_pipeline(const RunConfig& cfg) {
    PipelineResult r;
    r.config_text = canonical_config_text(cfg);
    r.config_hash = config_hash(cfg);
    r.monitor_lambda = cfg.monitor_lambda;
    r.alphas = cfg.besov_alphas;

    ModeSet modes(cfg.cutoff);
    Subspace sub = build_subspace(cfg);
    r.assumptions = check_assumptions(modes, cfg.noise, sub);
    if (!r.assumptions.all_ok())
        throw ValidationError("structural checks failed; run `validate` for the report:\n" +
                              r.assumptions.summary());

    SimConfig sim = make_sim_config(cfg);
    SpectralField ic = build_initial_state(cfg, modes);
    r.run = simulate_ensemble(sim, modes, ic, sub, cfg.eval_times);
    r.warnings.insert(r.warnings.end(), r.run.warnings.begin(), r.run.warnings.end());

    const int d = sub.dim();
    r.stokes_lambda = sub.stokes_eigenvalues();
    r.diffusion_sigma = subspace_covariance(cfg.noise, sub);
    for (double& v : r.diffusion_sigma) v = std::sqrt(v);

    const size_t T = r.run.times.size();
    SampleView last = make_samples(r.run.proj_u.back(), d);
    r.grid = auto_grid(last, cfg.grid_nodes, cfg.grid_extent_sigmas);
    r.ladder = make_ladder(r.grid);

    const bool has_p2 =
        std::find(r.run.monitor_ps.begin(), r.run.monitor_ps.end(), 2) != r.run.monitor_ps.end();

    for (size_t i = 0; i < T; ++i) {
        SampleView u = make_samples(r.run.proj_u[i], d);
        SampleView b = make_samples(r.run.proj_b[i], d);
        std::vector<double> h = silverman_bandwidth(u);
        KdeResult kde = kde_density(u, r.grid, h);
        DriftField G =
            estimate_drift(u, b, r.grid, h, r.stokes_lambda, cfg.nu, cfg.kde_min_effective);

        InstantReport rep;
        rep.time = r.run.times[i];
        rep.kde_mass = kde.mass;
        rep.kde_sup = lp_norm(kde.density, kInf);
        rep.kde_dropped = kde.dropped;
        rep.drift_masked_mass = G.masked_mass;
        rep.moment_g1 = drift_density_moment(G, kde.density, 1.0);
        rep.moment_g2 = drift_density_moment(G, kde.density, 2.0);
        rep.product = drift_density_product_norm(G, kde.density, 2.0);
        rep.energy_p1 = energy_moment(r.run, i, 1);
        rep.energy_p2 = has_p2 ? energy_moment(r.run, i, 2) : 0.0;
        rep.stationary_defect = stationary_residual(kde.density, G, r.diffusion_sigma);

        double b1 = 0.0;
        std::vector<double> hvec(size_t(d), 0.0);
        for (const std::vector<double>& dir : r.ladder.dirs) {
            for (double mag : r.ladder.mags) {
                for (int a = 0; a < d; ++a) hvec[size_t(a)] = mag * dir[size_t(a)];
                double v = diff_lp_norm(kde.density, hvec, 2, 1.0);
                r.besov_audit.push_back({rep.time, mag, v});
                b1 = std::max(b1, v / mag);
            }
        }
        rep.besov_b1 = b1;

        r.bandwidth.push_back(kde.bandwidth);
        r.kde.push_back(std::move(kde.density));
        r.drift.push_back(std::move(G));
        r.instants.push_back(rep);
    }

    std::vector<const DriftField*> sched;
    for (const DriftField& g : r.drift) sched.push_back(&g);
    FpOptions fo;
    fo.dt = cfg.fp_dt;
    fo.negative_tolerance = cfg.fp_negative_tolerance;
    FpResult fp =
        solve_fp(r.grid, r.diffusion_sigma, sub.project(ic), r.run.times, sched, r.run.times, fo);
    r.warnings.insert(r.warnings.end(), fp.warnings.begin(), fp.warnings.end());
    if (fp.f.size() != T)
        throw ValidationError("evaluation instants collide on the forward-equation step grid; "
                              "choose instants that are distinct multiples of fp.dt");
    for (size_t i = 0; i < T; ++i) {
        r.instants[i].fp_mass = fp.mass[i];
        r.instants[i].fp_sup = lp_norm(fp.f[i], kInf);
        GridFunction diff = fp.f[i];
        for (size_t j = 0; j < diff.values.size(); ++j) diff.values[j] -= r.kde[i].values[j];
        r.instants[i].fp_vs_kde_l1 = lp_norm(diff, 1.0);
        r.fp.push_back(std::move(fp.f[i]));
    }

    for (const InstantReport& rep : r.instants) {
        r.g1_sup = std::max(r.g1_sup, rep.moment_g1);
        r.g2_sup = std::max(r.g2_sup, rep.moment_g2);
    }
    {
        std::vector<const GridFunction*> fs;
        for (const GridFunction& f : r.kde) fs.push_back(&f);
        r.linf_weighted = time_weighted_linf_sup(r.run.times, fs, 0.5 * double(d));
    }

    const double tmin = besov_t_min(cfg);
    for (double alpha : cfg.besov_alphas) {
        const double w = 0.5 * (double(d) + alpha);
        double best = 0.0;
        bool any = false;
        for (size_t i = 0; i < T; ++i) {
            const double t = r.run.times[i];
            if (t < tmin * (1.0 - 1e-12)) continue;
            double v = std::pow(t, w) * holder_norm(r.kde[i], alpha, r.ladder);
            r.main_curve.push_back({alpha, t, v});
            best = std::max(best, v);
            any = true;
        }
        if (!any)
            r.warnings.push_back("no evaluation instant at or after besov.t_min " +
                                 fmt_double(tmin) + "; statistic left at 0");
        r.main_stat.push_back(best);
    }

    r.exp_monitor = exp_energy_moment(r.run, T - 1, cfg.monitor_lambda);

    {
        const std::vector<double> ts{0.01, 0.1, 1.0, 10.0};
        const std::vector<double> rhos{0.1, 0.31622776601683794, 1.0, 3.1622776601683795};
        KernelBoundSweep sweep = kernel_bound_sweep(r.diffusion_sigma, 2.0, 1, ts, rhos);
        r.kernel_cmax = sweep.cmax;
        r.kernel_spread = sweep.group_spread;
        r.kernel_l1_constant = sweep.l1_constant;
        r.kernel_linf_constant = sweep.linf_constant;
        for (int e = 0; e < 4; ++e)
            for (const KernelBoundSweep::Entry& en : sweep.entries[size_t(e)])
                r.kernel_rows.push_back({e, en.t, en.rho, en.ratio});
    }

    for (double w : cfg.stationary_windows) {
        std::vector<double> pooled_u, pooled_b;
        for (size_t i = 0; i < T; ++i) {
            if (r.run.times[i] < cfg.horizon - w - 1e-9) continue;
            pooled_u.insert(pooled_u.end(), r.run.proj_u[i].begin(), r.run.proj_u[i].end());
            pooled_b.insert(pooled_b.end(), r.run.proj_b[i].begin(), r.run.proj_b[i].end());
        }
        if (pooled_u.empty()) {
            r.warnings.push_back("stationary window " + fmt_double(w) +
                                 " contains no evaluation instant; skipped");
            continue;
        }
        SampleView u = make_samples(pooled_u, d);
        SampleView b = make_samples(pooled_b, d);
        std::vector<double> h = silverman_bandwidth(u);
        KdeResult kde = kde_density(u, r.grid, h);
        DriftField G =
            estimate_drift(u, b, r.grid, h, r.stokes_lambda, cfg.nu, cfg.kde_min_effective);
        r.window_lengths.push_back(w);
        r.window_residuals.push_back(stationary_residual(kde.density, G, r.diffusion_sigma));
    }

    return r;
}

std::string report_json(const PipelineResult& r) {
    using json = nlohmann::json;
    json j;

    {
        json a;
        a["condition"] = r.assumptions.condition;
        a["covariance_nonsingular"] = r.assumptions.covariance_nonsingular;
        a["diagonal"] = r.assumptions.diagonal;
        a["failures"] = r.assumptions.failures;
        a["lattice_generates"] = r.assumptions.lattice.generates;
        a["subspace_in_cutoff"] = r.assumptions.subspace_in_cutoff;
        a["subspace_variances"] = r.assumptions.subspace_variances;
        j["assumptions"] = a;
    }

    j["bandwidth"] = r.bandwidth;

    {
        json b;
        b["alphas"] = r.alphas;
        b["main_stat"] = r.main_stat;
        json curve = json::array();
        for (const MainCurveRow& row : r.main_curve)
            curve.push_back({row.alpha, row.t, row.value});
        b["curve"] = curve;
        json audit = json::array();
        for (const BesovAuditRow& row : r.besov_audit)
            audit.push_back({row.t, row.h, row.diff_l1});
        b["audit"] = audit;
        j["besov"] = b;
    }

    j["config"]["hash"] = fmt_hash(r.config_hash);
    j["config"]["text"] = r.config_text;
    j["diffusion_sigma"] = r.diffusion_sigma;

    {
        json axes = json::array();
        for (const GridAxis& ax : r.grid.axes()) axes.push_back({ax.lo, ax.hi, ax.n});
        j["grid"]["axes"] = axes;
    }

    {
        json list = json::array();
        for (const InstantReport& in : r.instants) {
            json e;
            e["besov_b1"] = in.besov_b1;
            e["drift_masked_mass"] = in.drift_masked_mass;
            e["energy_p1"] = in.energy_p1;
            e["energy_p2"] = in.energy_p2;
            e["fp_mass"] = in.fp_mass;
            e["fp_sup"] = in.fp_sup;
            e["fp_vs_kde_l1"] = in.fp_vs_kde_l1;
            e["kde_dropped"] = in.kde_dropped;
            e["kde_mass"] = in.kde_mass;
            e["kde_sup"] = in.kde_sup;
            e["moment_g1"] = in.moment_g1;
            e["moment_g2"] = in.moment_g2;
            e["product_lhs"] = in.product.lhs;
            e["product_rhs"] = in.product.rhs;
            e["stationary_defect"] = in.stationary_defect;
            e["time"] = in.time;
            list.push_back(e);
        }
        j["instants"] = list;
    }

    {
        json k;
        k["cmax"] = r.kernel_cmax;
        k["spread"] = r.kernel_spread;
        k["l1_constant"] = r.kernel_l1_constant;
        k["linf_constant"] = r.kernel_linf_constant;
        json rows = json::array();
        for (const KernelEntryRow& row : r.kernel_rows)
            rows.push_back({row.inequality, row.t, row.rho, row.ratio});
        k["rows"] = rows;
        j["kernel"] = k;
    }

    {
        json m;
        m["exp_value"] = r.exp_monitor.value;
        m["heavy_tail"] = r.exp_monitor.heavy_tail;
        m["lambda"] = r.monitor_lambda;
        m["top_share"] = r.exp_monitor.top_share;
        j["monitors"] = m;
    }

    j["stationary"]["residuals"] = r.window_residuals;
    j["stationary"]["windows"] = r.window_lengths;
    j["stokes_lambda"] = r.stokes_lambda;

    j["summary"]["g1_sup"] = r.g1_sup;
    j["summary"]["g2_sup"] = r.g2_sup;
    j["summary"]["linf_weighted"] = r.linf_weighted;

    j["warnings"] = r.warnings;

    return j.dump(2) + "\n";
}

namespace {

void write_text_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ValidationError("cannot open " + p.string() + " for writing");
    out << text;
    if (!out) throw ValidationError("short write to " + p.string());
}

std::string instants_csv(const PipelineResult& r) {
    std::string s = "time,kde_mass,kde_sup,kde_dropped,drift_masked_mass,fp_mass,fp_sup,"
                    "fp_vs_kde_l1,moment_g1,moment_g2,product_lhs,product_rhs,energy_p1,"
                    "energy_p2,besov_b1,stationary_defect\n";
    for (const InstantReport& in : r.instants) {
        s += fmt_double(in.time) + "," + fmt_double(in.kde_mass) + "," + fmt_double(in.kde_sup) +
             "," + std::to_string(in.kde_dropped) + "," + fmt_double(in.drift_masked_mass) + "," +
             fmt_double(in.fp_mass) + "," + fmt_double(in.fp_sup) + "," +
             fmt_double(in.fp_vs_kde_l1) + "," + fmt_double(in.moment_g1) + "," +
             fmt_double(in.moment_g2) + "," + fmt_double(in.product.lhs) + "," +
             fmt_double(in.product.rhs) + "," + fmt_double(in.energy_p1) + "," +
             fmt_double(in.energy_p2) + "," + fmt_double(in.besov_b1) + "," +
             fmt_double(in.stationary_defect) + "\n";
    }
    return s;
}

template <typename T> void put_raw(std::ofstream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

/// Layout (native little-endian x86-64):
///   magic "NSFPSNAP", u32 version, u32 dim,
///   per axis: f64 lo, f64 hi, u32 n,
///   u32 count, then per snapshot: u8 kind (0 kde, 1 fp), f64 time,
///   u64 value count, f64 values (row-major, last axis fastest).
void write_snapshots(const std::filesystem::path& p, const PipelineResult& r) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ValidationError("cannot open " + p.string() + " for writing");
    out.write("NSFPSNAP", 8);
    put_raw(out, uint32_t{1});
    put_raw(out, uint32_t(r.grid.dim()));
    for (const GridAxis& ax : r.grid.axes()) {
        put_raw(out, ax.lo);
        put_raw(out, ax.hi);
        put_raw(out, uint32_t(ax.n));
    }
    put_raw(out, uint32_t(r.kde.size() + r.fp.size()));
    auto dump = [&](const GridFunction& f, uint8_t kind, double time) {
        put_raw(out, kind);
        put_raw(out, time);
        put_raw(out, uint64_t(f.values.size()));
        out.write(reinterpret_cast<const char*>(f.values.data()),
                  std::streamsize(f.values.size() * sizeof(double)));
    };
    for (size_t i = 0; i < r.kde.size(); ++i) dump(r.kde[i], 0, r.instants[i].time);
    for (size_t i = 0; i < r.fp.size(); ++i) dump(r.fp[i], 1, r.instants[i].time);
    if (!out) throw ValidationError("short write to " + p.string());
}

} // namespace

std::vector<std::string> write_report_bundle(const PipelineResult& r, const std::string& dir) {
    std::filesystem::path base(dir);
    std::filesystem::create_directories(base);
    write_text_file(base / "report.json", report_json(r));
    write_text_file(base / "config.txt", r.config_text);
    write_text_file(base / "instants.csv", instants_csv(r));
    write_snapshots(base / "snapshots.bin", r);
    return {"report.json", "config.txt", "instants.csv", "snapshots.bin"};
}

std::string emit_plot_data(const PipelineResult& r, const std::string& which) {
    static const char* const kOptions = "besov_audit, fp_vs_kde, kernel_bounds, main_curve";
    if (which.empty()) return std::string("# plots: ") + kOptions + "\n";
    std::string s;
    if (which == "main_curve") {
        s = "alpha,t,value\n";
        for (const MainCurveRow& row : r.main_curve)
            s += fmt_double(row.alpha) + "," + fmt_double(row.t) + "," + fmt_double(row.value) +
                 "\n";
    } else if (which == "kernel_bounds") {
        s = "inequality,t,rho,ratio\n";
        for (const KernelEntryRow& row : r.kernel_rows)
            s += std::to_string(row.inequality) + "," + fmt_double(row.t) + "," +
                 fmt_double(row.rho) + "," + fmt_double(row.ratio) + "\n";
    } else if (which == "fp_vs_kde") {
        s = "t,kde_mass,fp_mass,l1_distance\n";
        for (const InstantReport& in : r.instants)
            s += fmt_double(in.time) + "," + fmt_double(in.kde_mass) + "," +
                 fmt_double(in.fp_mass) + "," + fmt_double(in.fp_vs_kde_l1) + "\n";
    } else if (which == "besov_audit") {
        s = "t,h,diff_l1\n";
        for (const BesovAuditRow& row : r.besov_audit)
            s += fmt_double(row.t) + "," + fmt_double(row.h) + "," + fmt_double(row.diff_l1) +
                 "\n";
    } else {
        throw ValidationError("unknown plot '" + which + "'; available: " + kOptions);
    }
    return s;
}

bool replay_matches(const RunConfig& cfg, const std::string& stored_json) {
    return report_json(run_pipeline(cfg)) == stored_json;
}

} // namespace nsfp
