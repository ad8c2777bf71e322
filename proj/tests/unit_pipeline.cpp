#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "nsfp/config.hpp"
#include "nsfp/errors.hpp"
#include "nsfp/pipeline.hpp"

using namespace nsfp;

namespace {

RunConfig tiny_linear_config() {
    RunConfig cfg;
    cfg.cutoff = 1;
    cfg.nu = 1.0;
    cfg.dt = 1e-3;
    cfg.horizon = 0.1;
    cfg.ensemble = 400;
    cfg.seed = 2024;
    cfg.linear_only = true;
    cfg.noise.shell_override[1] = 3.0;
    cfg.subspace = "0,0,1:1:cos";
    cfg.grid_nodes = 101;
    cfg.fp_dt = 0.01;
    cfg.eval_times = {0.05, 0.1};
    cfg.monitor_lambda = 0.001;
    cfg.out_dir = "out/tiny";
    return cfg;
}

} // namespace

TEST_CASE("configuration text round trip and strictness") {
    RunConfig cfg = preset_config("pair-full");
    std::string text = canonical_config_text(cfg);
    RunConfig back = parse_config_text(text);
    CHECK(canonical_config_text(back) == text);
    CHECK(config_hash(back) == config_hash(cfg));

    CHECK_THROWS_AS(parse_config_text("bogus_key = 3\n"), ValidationError);
    CHECK_THROWS_AS(parse_config_text("nu = 1\nnu = 2\n"), ValidationError);
    CHECK_THROWS_AS(parse_config_text("nu = not_a_number\n"), ValidationError);
    CHECK_THROWS_AS(parse_config_text("nu\n"), ValidationError);
    CHECK_NOTHROW(parse_config_text("# only a comment\n"));

    // each preset hashes differently
    auto names = preset_names();
    REQUIRE(names.size() == 4);
    for (size_t i = 0; i < names.size(); ++i)
        for (size_t j = i + 1; j < names.size(); ++j)
            CHECK(config_hash(preset_config(names[i])) != config_hash(preset_config(names[j])));
    CHECK_THROWS_AS(preset_config("nope"), ValidationError);
}

TEST_CASE("derived run pieces") {
    RunConfig cfg = tiny_linear_config();
    CHECK(besov_t_min(cfg) == doctest::Approx(0.01)); // default 10 dt
    cfg.besov_t_min = 0.2;
    CHECK(besov_t_min(cfg) == 0.2);

    SimConfig sim = make_sim_config(cfg);
    CHECK(sim.cutoff == cfg.cutoff);
    CHECK(sim.linear_only);
    CHECK(sim.seed == cfg.seed);

    ModeSet modes(cfg.cutoff);
    SpectralField zero = build_initial_state(cfg, modes);
    CHECK(zero.norm_h_sq() == 0.0);

    cfg.ic = "0,0,1:1:cos:1.25;0,1,0:2:sin:-0.5";
    SpectralField ic = build_initial_state(cfg, modes);
    CHECK(ic.reality_defect() == 0.0);
    CHECK(ic.norm_h_sq() == doctest::Approx(1.25 * 1.25 + 0.25).epsilon(1e-12));
    Subspace probe = Subspace::parse("0,0,1:1:cos");
    CHECK(probe.project(ic)[0] == doctest::Approx(1.25).epsilon(1e-12));

    cfg.ic = "0,0,1:1:cos"; // missing value
    CHECK_THROWS_AS(build_initial_state(cfg, modes), ValidationError);

    CHECK(build_subspace(tiny_linear_config()).dim() == 1);
}

TEST_CASE("structural validation is surfaced before simulating") {
    CHECK(validate_run(preset_config("ou-linear")).all_ok());
    CHECK(validate_run(preset_config("pair-full")).all_ok());
    CHECK(!validate_run(preset_config("degenerate-line")).all_ok());
    CHECK_THROWS_AS(run_pipeline(preset_config("degenerate-line")), ValidationError);
}

TEST_CASE("small linear run produces a coherent report") {
    RunConfig cfg = tiny_linear_config();
    PipelineResult r = run_pipeline(cfg);

    REQUIRE(r.instants.size() == 2);
    CHECK(r.run.members == 400);
    CHECK(r.diffusion_sigma[0] == doctest::Approx(3.0));
    CHECK(r.stokes_lambda[0] == 1.0);

    for (const InstantReport& in : r.instants) {
        CHECK(in.kde_mass == doctest::Approx(1.0).epsilon(0.01));
        CHECK(in.fp_mass == doctest::Approx(1.0).epsilon(0.02));
        CHECK(in.kde_sup > 0.1);
        CHECK(in.fp_vs_kde_l1 < 0.5);
        CHECK(in.product.lhs <= in.product.rhs + 1e-12);
        CHECK(in.energy_p1 > 0.0);
    }
    CHECK(r.g1_sup > 0.0);
    CHECK(r.linf_weighted > 0.0);
    REQUIRE(r.main_stat.size() == 3);
    for (double v : r.main_stat) CHECK(v > 0.0);
    CHECK(r.main_curve.size() == 6);  // 3 alphas x 2 instants
    CHECK(r.besov_audit.size() == 2 * r.ladder.mags.size());
    CHECK(r.exp_monitor.value > 0.9);
    CHECK(r.kernel_l1_constant == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.warnings.empty());
}

TEST_CASE("reports replay byte for byte") {
    RunConfig cfg = tiny_linear_config();
    PipelineResult r = run_pipeline(cfg);
    std::string first = report_json(r);
    CHECK(replay_matches(cfg, first));

    // a different seed is a different report
    cfg.seed += 1;
    CHECK(!replay_matches(cfg, first));
}

TEST_CASE("bundle files land on disk") {
    namespace fs = std::filesystem;
    RunConfig cfg = tiny_linear_config();
    PipelineResult r = run_pipeline(cfg);
    fs::path dir = fs::temp_directory_path() / "nsfp-bundle-test";
    fs::remove_all(dir);
    auto files = write_report_bundle(r, dir.string());
    CHECK(files.size() == 4);
    for (const std::string& f : files) CHECK(fs::exists(dir / f));

    std::ifstream snap(dir / "snapshots.bin", std::ios::binary);
    char magic[8] = {};
    snap.read(magic, 8);
    CHECK(std::string(magic, 8) == "NSFPSNAP");

    // stored config text parses back to the same hash
    std::ifstream cf(dir / "config.txt");
    std::string text((std::istreambuf_iterator<char>(cf)), std::istreambuf_iterator<char>());
    CHECK(config_hash(parse_config_text(text)) == r.config_hash);
    fs::remove_all(dir);
}

TEST_CASE("plot data tables") {
    RunConfig cfg = tiny_linear_config();
    PipelineResult r = run_pipeline(cfg);

    CHECK(emit_plot_data(r, "").find("main_curve") != std::string::npos);
    CHECK_THROWS_AS(emit_plot_data(r, "nonsense"), ValidationError);

    std::string fp = emit_plot_data(r, "fp_vs_kde");
    CHECK(fp.find("t,kde_mass") == 0);
    size_t lines = 0;
    for (char c : fp)
        if (c == '\n') ++lines;
    CHECK(lines == 3); // header + one row per instant

    CHECK(emit_plot_data(r, "main_curve").find("alpha,t,value") == 0);
    CHECK(emit_plot_data(r, "kernel_bounds").find("inequality") == 0);
    CHECK(emit_plot_data(r, "besov_audit").find("t,h,diff_l1") == 0);
}
