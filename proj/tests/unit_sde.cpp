#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "nsfp/errors.hpp"
#include "nsfp/rng.hpp"
#include "nsfp/sde.hpp"

using namespace nsfp;

namespace {

SimConfig linear_config(double sigma) {
    SimConfig cfg;
    cfg.cutoff = 1;
    cfg.nu = 1.0;
    cfg.dt = 1e-3;
    cfg.horizon = 0.5;
    cfg.ensemble = 1;
    cfg.seed = 9001;
    cfg.linear_only = true;
    cfg.noise.shell_override[1] = sigma;
    return cfg;
}

} // namespace

TEST_CASE("one linear trajectory reproduced coefficient by coefficient") {
    SimConfig cfg = linear_config(3.0);
    ModeSet modes(cfg.cutoff);
    SpectralField ic(modes);
    Subspace sub = Subspace::parse("0,0,1:1:both");
    EnsembleRun run = simulate_ensemble(cfg, modes, ic, sub, {0.25, 0.5});

    // The observed pair (0,0,1) is the first canonical pair, so its two
    // polarizations hold noise blocks 0 and 1; polarization 1 is block 0.
    const double beta = 1.0 / (1.0 + cfg.nu * cfg.dt);
    const double amp = 3.0 * std::sqrt(cfg.dt) / std::sqrt(2.0);
    Cplx c(0.0, 0.0);
    int64_t s = 0;
    for (size_t idx = 0; idx < run.steps.size(); ++idx) {
        for (; s < run.steps[idx]; ++s) {
            auto z = normal_pair(cfg.seed, 0, uint64_t(s), 0);
            c = (c + amp * Cplx(z[0], z[1])) * beta;
        }
        const double rt2 = std::sqrt(2.0);
        CHECK(run.proj_u[idx][0] == doctest::Approx(rt2 * c.real()).epsilon(1e-13));
        CHECK(run.proj_u[idx][1] == doctest::Approx(rt2 * c.imag()).epsilon(1e-13));
    }
}

TEST_CASE("stationary approach matches the discrete variance formula") {
    SimConfig cfg = linear_config(3.0);
    cfg.ensemble = 4000;
    ModeSet modes(cfg.cutoff);
    SpectralField ic(modes);
    Subspace sub = Subspace::parse("0,0,1:1:both");
    EnsembleRun run = simulate_ensemble(cfg, modes, ic, sub, {0.25, 0.5});

    const double beta = 1.0 / (1.0 + cfg.nu * cfg.dt);
    for (size_t idx = 0; idx < run.times.size(); ++idx) {
        const double n = double(run.steps[idx]);
        const double b2 = beta * beta;
        const double exact =
            9.0 * cfg.dt * b2 * (1.0 - std::pow(b2, n)) / (1.0 - b2);
        for (int a = 0; a < 2; ++a) {
            std::vector<double> coord(size_t(run.members));
            for (int m = 0; m < run.members; ++m)
                coord[size_t(m)] = run.proj_u[idx][size_t(m) * 2 + a];
            MeanVar mv = mean_var(coord);
            // standard error of a sample variance ~ V sqrt(2/(n-1))
            const double se = exact * std::sqrt(2.0 / double(run.members - 1));
            CHECK(std::abs(mv.mean) < 4.0 * std::sqrt(exact / double(run.members)));
            CHECK(std::abs(mv.var - exact) < 4.0 * se);
        }
    }
}

TEST_CASE("requested instants snap to the step grid") {
    SimConfig cfg = linear_config(1.0);
    ModeSet modes(cfg.cutoff);
    SpectralField ic(modes);
    Subspace sub = Subspace::parse("0,0,1:1:cos");
    EnsembleRun run =
        simulate_ensemble(cfg, modes, ic, sub, {0.2504, 0.5, 0.4996, 0.0});
    REQUIRE(run.times.size() == 3);
    CHECK(run.times[0] == 0.0);
    CHECK(run.times[1] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(run.times[2] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(run.steps[1] == 250);
    CHECK(run.closest_time_index(0.6) == 2);
    CHECK(run.closest_time_index(0.1) == 0);

    CHECK_THROWS_AS(simulate_ensemble(cfg, modes, ic, sub, {0.7}), ValidationError);
    CHECK_THROWS_AS(simulate_ensemble(cfg, modes, ic, sub, {}), ValidationError);
}

TEST_CASE("members are unchanged when the ensemble grows") {
    SimConfig cfg = linear_config(2.0);
    cfg.horizon = 0.05;
    cfg.linear_only = false; // full dynamics, same property
    ModeSet modes(cfg.cutoff);
    SpectralField ic(modes);
    Subspace sub = Subspace::parse("0,0,1:1:both");

    cfg.ensemble = 6;
    EnsembleRun small = simulate_ensemble(cfg, modes, ic, sub, {0.05});
    cfg.ensemble = 17;
    EnsembleRun big = simulate_ensemble(cfg, modes, ic, sub, {0.05});
    for (size_t i = 0; i < 12; ++i) CHECK(small.proj_u[0][i] == big.proj_u[0][i]);
    for (int m = 0; m < 6; ++m) CHECK(small.norm_h2[0][m] == big.norm_h2[0][m]);
}

TEST_CASE("energy monitors on a noiseless decaying state are exact") {
    SimConfig cfg = linear_config(0.0);
    cfg.monitor_ps = {1, 2};
    ModeSet modes(cfg.cutoff);
    SpectralField ic(modes);
    ic.set_pair(modes.canonical_indices()[0], 1, Cplx(1.0, 0.0));
    // |u_0|_H^2 = 2, every active eigenvalue is 1
    Subspace sub = Subspace::parse("0,0,1:1:both");
    EnsembleRun run = simulate_ensemble(cfg, modes, ic, sub, {0.25});

    const double beta = 1.0 / (1.0 + cfg.dt);
    const double b2 = beta * beta;
    const double n = double(run.steps[0]);
    // right-endpoint integrals of 2 beta^(2s) and (2 beta^(2s))^2
    const double i1 = cfg.dt * 2.0 * b2 * (1.0 - std::pow(b2, n)) / (1.0 - b2);
    const double i2 = cfg.dt * 4.0 * b2 * b2 * (1.0 - std::pow(b2 * b2, n)) / (1.0 - b2 * b2);
    CHECK(energy_moment(run, 0, 1) == doctest::Approx(2.0 + i1).epsilon(1e-12));
    CHECK(energy_moment(run, 0, 2) == doctest::Approx(4.0 + i2).epsilon(1e-12));
    CHECK_THROWS_AS(energy_moment(run, 0, 3), ValidationError);

    // sup is the initial square norm and the state keeps decaying
    CHECK(run.sup_h2[0][0] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(run.norm_h2[0][0] == doctest::Approx(2.0 * std::pow(b2, n)).epsilon(1e-12));
}

TEST_CASE("exponential monitor at lambda zero and its tail diagnostic") {
    SimConfig cfg = linear_config(1.0);
    cfg.ensemble = 250;
    cfg.horizon = 0.02;
    ModeSet modes(cfg.cutoff);
    SpectralField ic(modes);
    Subspace sub = Subspace::parse("0,0,1:1:cos");
    EnsembleRun run = simulate_ensemble(cfg, modes, ic, sub, {0.02});

    ExpMomentResult r = exp_energy_moment(run, 0, 0.0);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(!r.heavy_tail);
    CHECK(r.top_share == doctest::Approx(2.0 / 250.0).epsilon(1e-12));

    CHECK_THROWS_AS(exp_energy_moment(run, 0, 1e6), NumericalError);
}

TEST_CASE("blow-up guard names the offending member") {
    SimConfig cfg = linear_config(0.0);
    cfg.blowup_threshold = 1.0;
    ModeSet modes(cfg.cutoff);
    SpectralField ic(modes);
    ic.set_pair(modes.canonical_indices()[0], 1, Cplx(1.0, 0.0)); // |u|_H^2 = 2
    Subspace sub = Subspace::parse("0,0,1:1:cos");
    bool threw = false;
    try {
        simulate_ensemble(cfg, modes, ic, sub, {0.25});
    } catch (const NumericalError& e) {
        threw = true;
        CHECK(std::string(e.what()).find("member 0") != std::string::npos);
    }
    CHECK(threw);
}

TEST_CASE("parameter validation") {
    SimConfig cfg = linear_config(1.0);
    ModeSet modes(cfg.cutoff);
    SpectralField ic(modes);
    Subspace sub = Subspace::parse("0,0,1:1:cos");

    SimConfig bad = cfg;
    bad.nu = 0.0;
    CHECK_THROWS_AS(simulate_ensemble(bad, modes, ic, sub, {0.1}), ValidationError);
    bad = cfg;
    bad.cutoff = 2;
    CHECK_THROWS_AS(simulate_ensemble(bad, modes, ic, sub, {0.1}), ValidationError);
    bad = cfg;
    bad.ensemble = 0;
    CHECK_THROWS_AS(simulate_ensemble(bad, modes, ic, sub, {0.1}), ValidationError);

    Subspace far = Subspace::parse("1,1,0:1:cos");
    CHECK_THROWS_AS(simulate_ensemble(cfg, modes, ic, far, {0.1}), ValidationError);

    // under-resolved dissipation is a warning, not an error
    SimConfig coarse = cfg;
    coarse.dt = 0.5;
    coarse.horizon = 2.5;
    coarse.nu = 5.0;
    EnsembleRun run = simulate_ensemble(coarse, modes, ic, sub, {2.5});
    CHECK(!run.warnings.empty());
}
