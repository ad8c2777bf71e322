#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nsfp/besov.hpp"
#include "nsfp/config.hpp"
#include "nsfp/counterexample.hpp"
#include "nsfp/errors.hpp"
#include "nsfp/pipeline.hpp"

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

/// Shared run selection: exactly one of a preset name or a config file,
/// plus repeated key=value overrides fed back through the strict parser.
struct RunSelect {
    std::string preset;
    std::string file;
    std::vector<std::string> sets;

    void attach(CLI::App* cmd) {
        auto* p = cmd->add_option("--preset", preset, "built-in configuration name");
        auto* f = cmd->add_option("--config", file, "configuration file (key = value lines)");
        p->excludes(f);
        cmd->add_option("--set", sets, "override, key=value (repeatable)");
    }

    nsfp::RunConfig resolve() const {
        if (preset.empty() && file.empty())
            throw nsfp::ValidationError("pass --preset NAME or --config FILE; presets: " +
                                        [] {
                                            std::string s;
                                            for (const std::string& n : nsfp::preset_names())
                                                s += (s.empty() ? "" : ", ") + n;
                                            return s;
                                        }());
        nsfp::RunConfig cfg =
            preset.empty() ? nsfp::load_config_file(file) : nsfp::preset_config(preset);
        if (sets.empty()) return cfg;

        std::vector<std::string> lines;
        std::istringstream in(nsfp::canonical_config_text(cfg));
        for (std::string line; std::getline(in, line);) lines.push_back(line);
        for (const std::string& kv : sets) {
            size_t eq = kv.find('=');
            if (eq == std::string::npos)
                throw nsfp::ValidationError("--set needs key=value, got '" + kv + "'");
            std::string key = kv.substr(0, eq);
            while (!key.empty() && key.back() == ' ') key.pop_back();
            bool replaced = false;
            for (std::string& line : lines) {
                if (line.rfind(key + " =", 0) == 0) {
                    line = key + " =" + kv.substr(eq + 1);
                    replaced = true;
                    break;
                }
            }
            if (!replaced) lines.push_back(kv);
        }
        std::string text;
        for (const std::string& line : lines) text += line + "\n";
        return nsfp::parse_config_text(text);
    }
};

void write_or_print(const std::string& out_file, const std::string& text) {
    if (out_file.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_file, std::ios::binary);
    if (!out) throw nsfp::ValidationError("cannot open " + out_file + " for writing");
    out << text;
}

size_t pick_instant(const nsfp::PipelineResult& r, double t) {
    if (t < 0) return r.instants.size() - 1;
    return r.run.closest_time_index(t);
}

std::string grid_csv(const nsfp::GridFunction& f) {
    std::string s;
    const int d = f.spec.dim();
    for (int a = 0; a < d; ++a) s += "x" + std::to_string(a + 1) + ",";
    s += "value\n";
    for (size_t i = 0; i < f.values.size(); ++i) {
        for (double c : f.spec.point(i)) s += fmt(c) + ",";
        s += fmt(f.values[i]) + "\n";
    }
    return s;
}

std::string drift_csv(const nsfp::DriftField& g) {
    std::string s;
    const nsfp::GridSpec& spec = g.effective.spec;
    const int d = spec.dim();
    for (int a = 0; a < d; ++a) s += "x" + std::to_string(a + 1) + ",";
    for (int a = 0; a < d; ++a) s += "g" + std::to_string(a + 1) + ",";
    s += "effective,masked\n";
    for (size_t i = 0; i < g.effective.values.size(); ++i) {
        for (double c : spec.point(i)) s += fmt(c) + ",";
        for (int a = 0; a < d; ++a) s += fmt(g.g[size_t(a)].values[i]) + ",";
        s += fmt(g.effective.values[i]) + "," + std::to_string(int(g.masked[i])) + "\n";
    }
    return s;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"density pipeline for the spectrally truncated stochastic flow"};
    app.require_subcommand(1);
    int rc = 0;

    RunSelect sel_validate, sel_sim, sel_density, sel_drift, sel_fp, sel_besov, sel_report,
        sel_plot;

    auto* validate = app.add_subcommand("validate", "structural checks for a run description");
    sel_validate.attach(validate);
    validate->callback([&] {
        nsfp::AssumptionReport rep = nsfp::validate_run(sel_validate.resolve());
        std::cout << rep.summary();
        if (!rep.all_ok()) rc = 2;
    });

    auto* simulate = app.add_subcommand("simulate", "ensemble run, energy monitor table");
    sel_sim.attach(simulate);
    simulate->callback([&] {
        nsfp::RunConfig cfg = sel_sim.resolve();
        nsfp::ModeSet modes(cfg.cutoff);
        nsfp::Subspace sub = nsfp::build_subspace(cfg);
        nsfp::AssumptionReport rep = nsfp::check_assumptions(modes, cfg.noise, sub);
        if (!rep.all_ok()) throw nsfp::ValidationError(rep.summary());
        nsfp::EnsembleRun run = nsfp::simulate_ensemble(
            nsfp::make_sim_config(cfg), modes, nsfp::build_initial_state(cfg, modes), sub,
            cfg.eval_times);
        std::cout << "time";
        for (int p : run.monitor_ps) std::cout << ",energy_p" << p;
        std::cout << ",exp_monitor\n";
        for (size_t i = 0; i < run.times.size(); ++i) {
            std::cout << fmt(run.times[i]);
            for (int p : run.monitor_ps) std::cout << "," << fmt(nsfp::energy_moment(run, i, p));
            std::cout << "," << fmt(nsfp::exp_energy_moment(run, i, cfg.monitor_lambda).value)
                      << "\n";
        }
        for (const std::string& w : run.warnings) std::cerr << "warning: " << w << "\n";
    });

    double at_time = -1.0;
    std::string out_file;

    auto* density = app.add_subcommand("density", "kernel density estimate on the grid");
    sel_density.attach(density);
    density->add_option("--time", at_time, "evaluation instant (default: last)");
    density->add_option("--out", out_file, "output file (default: stdout)");
    density->callback([&] {
        nsfp::PipelineResult r = nsfp::run_pipeline(sel_density.resolve());
        write_or_print(out_file, grid_csv(r.kde[pick_instant(r, at_time)]));
    });

    auto* drift = app.add_subcommand("drift", "estimated drift field on the grid");
    sel_drift.attach(drift);
    drift->add_option("--time", at_time, "evaluation instant (default: last)");
    drift->add_option("--out", out_file, "output file (default: stdout)");
    drift->callback([&] {
        nsfp::PipelineResult r = nsfp::run_pipeline(sel_drift.resolve());
        write_or_print(out_file, drift_csv(r.drift[pick_instant(r, at_time)]));
    });

    auto* solvefp = app.add_subcommand("solve-fp", "forward-equation density on the grid");
    sel_fp.attach(solvefp);
    solvefp->add_option("--time", at_time, "evaluation instant (default: last)");
    solvefp->add_option("--out", out_file, "output file (default: stdout)");
    solvefp->callback([&] {
        nsfp::PipelineResult r = nsfp::run_pipeline(sel_fp.resolve());
        write_or_print(out_file, grid_csv(r.fp[pick_instant(r, at_time)]));
    });

    auto* besov = app.add_subcommand("besov", "time-weighted Hoelder statistics");
    sel_besov.attach(besov);
    besov->callback([&] {
        nsfp::PipelineResult r = nsfp::run_pipeline(sel_besov.resolve());
        std::cout << nsfp::emit_plot_data(r, "main_curve");
        for (size_t i = 0; i < r.alphas.size(); ++i)
            std::cout << "# sup alpha=" << fmt(r.alphas[i]) << ": " << fmt(r.main_stat[i])
                      << "\n";
    });

    int bs_dim = 2;
    double bs_p = 1.5, bs_alpha0 = 5.0;
    auto* bootstrap = app.add_subcommand("bootstrap", "regularity bootstrap iteration");
    bootstrap->add_option("--dim", bs_dim, "dimension d");
    bootstrap->add_option("--p", bs_p, "integrability exponent, in (1, d/(d-1))");
    bootstrap->add_option("--alpha0", bs_alpha0, "starting exponent, > d/2");
    bootstrap->callback([&] {
        nsfp::BootstrapResult b = nsfp::bootstrap_exponents(bs_dim, bs_p, bs_alpha0);
        std::cout << "step,alpha\n";
        for (size_t i = 0; i < b.alphas.size(); ++i)
            std::cout << i << "," << fmt(b.alphas[i]) << "\n";
        std::cout << "# steps " << b.steps << ", predicted bound " << b.predicted_bound << "\n";
    });

    std::vector<int> ce_windows{2, 4, 8};
    auto* counter =
        app.add_subcommand("counterexample", "bounded joint density, unbounded marginal");
    counter->add_option("--windows", ce_windows, "window radii K (repeatable)");
    counter->callback([&] {
        std::cout << "K,joint_sup,marginal_sup,mass\n";
        for (int k : ce_windows) {
            nsfp::CounterexampleDensity ce(k);
            std::cout << k << "," << fmt(ce.joint_sup()) << "," << fmt(ce.marginal_sup()) << ","
                      << fmt(ce.mass()) << "\n";
        }
    });

    std::string report_out;
    auto* report = app.add_subcommand("report", "full pipeline, bundle on disk");
    sel_report.attach(report);
    report->add_option("--out", report_out, "bundle directory (default: config out.dir)");
    report->callback([&] {
        nsfp::RunConfig cfg = sel_report.resolve();
        nsfp::PipelineResult r = nsfp::run_pipeline(cfg);
        std::string dir = report_out.empty() ? cfg.out_dir : report_out;
        for (const std::string& f : nsfp::write_report_bundle(r, dir))
            std::cout << dir << "/" << f << "\n";
        std::cout << "# config " << std::hex << r.config_hash << std::dec << "\n";
        for (size_t i = 0; i < r.instants.size(); ++i)
            std::cout << "# t=" << fmt(r.instants[i].time)
                      << " fp_vs_kde_l1=" << fmt(r.instants[i].fp_vs_kde_l1) << "\n";
        for (const std::string& w : r.warnings) std::cerr << "warning: " << w << "\n";
    });

    std::string replay_dir;
    auto* replay = app.add_subcommand("replay", "re-run a bundle and byte-compare the report");
    replay->add_option("--dir", replay_dir, "bundle directory")->required();
    replay->callback([&] {
        namespace fs = std::filesystem;
        auto slurp = [](const fs::path& p) {
            std::ifstream in(p, std::ios::binary);
            if (!in) throw nsfp::ValidationError("cannot read " + p.string());
            std::ostringstream ss;
            ss << in.rdbuf();
            return ss.str();
        };
        nsfp::RunConfig cfg = nsfp::parse_config_text(slurp(fs::path(replay_dir) / "config.txt"));
        std::string stored = slurp(fs::path(replay_dir) / "report.json");
        if (nsfp::replay_matches(cfg, stored)) {
            std::cout << "replay: match\n";
        } else {
            std::cout << "replay: MISMATCH\n";
            rc = 4;
        }
    });

    std::string plot_which;
    auto* plot = app.add_subcommand("plot-data", "tabular data for a named plot");
    sel_plot.attach(plot);
    plot->add_option("--which", plot_which, "plot name; empty lists the options");
    plot->add_option("--out", out_file, "output file (default: stdout)");
    plot->callback([&] {
        if (plot_which.empty()) {
            std::cout << nsfp::emit_plot_data(nsfp::PipelineResult{}, "");
            return;
        }
        nsfp::PipelineResult r = nsfp::run_pipeline(sel_plot.resolve());
        write_or_print(out_file, nsfp::emit_plot_data(r, plot_which));
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const nsfp::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nsfp::NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return rc;
}
