#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "nsfp/besov.hpp"
#include "nsfp/errors.hpp"
#include "nsfp/rng.hpp"

using namespace nsfp;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("ladder covers axes and diagonals with resolvable magnitudes") {
    GridSpec g1({GridAxis{-2.0, 2.0, 101}});
    Ladder l1 = make_ladder(g1);
    CHECK(l1.dirs.size() == 1);
    CHECK(l1.mags.size() == 20);
    CHECK(l1.mags.front() == doctest::Approx(2.0 * g1.axis(0).dx()));
    CHECK(l1.mags.back() == doctest::Approx(1.0)); // min(1, 0.45 * 4)
    for (size_t i = 0; i + 1 < l1.mags.size(); ++i) CHECK(l1.mags[i] < l1.mags[i + 1]);

    GridSpec g2({GridAxis{-2.0, 2.0, 101}, GridAxis{-1.0, 1.0, 51}});
    Ladder l2 = make_ladder(g2);
    REQUIRE(l2.dirs.size() == 4); // two axes, two diagonals
    for (const auto& dir : l2.dirs) {
        double n2 = 0.0;
        for (double c : dir) n2 += c * c;
        CHECK(n2 == doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK(l2.mags.back() == doctest::Approx(0.45 * 2.0)); // smallest box width 2

    // a grid too coarse for any resolvable increment is rejected
    GridSpec tiny({GridAxis{0.0, 1e-3, 5}});
    CHECK_THROWS_AS(make_ladder(tiny), ValidationError);
}

TEST_CASE("difference norms are exact on polynomials") {
    GridSpec g({GridAxis{0.0, 1.0, 101}});
    GridFunction lin(g), quad(g);
    for (size_t i = 0; i < g.size(); ++i) {
        double x = g.point(i)[0];
        lin.values[i] = 2.0 * x;
        quad.values[i] = x * x;
    }

    // first difference of 2x is 2h at every valid node
    CHECK(diff_lp_norm(lin, {0.17}, 1, kInf) == doctest::Approx(0.34).epsilon(1e-12));
    // second difference of x^2 is 2h^2; keep evaluation points on nodes
    double h = 10.0 * g.axis(0).dx();
    CHECK(diff_lp_norm(quad, {h}, 2, kInf) == doctest::Approx(2.0 * h * h).epsilon(1e-9));

    // L1 of the first difference of 2x over the valid region [0, 1-h]
    double l1 = diff_lp_norm(lin, {0.25}, 1, 1.0);
    CHECK(l1 == doctest::Approx(0.5 * 0.75).epsilon(0.02));

    // an increment longer than the box has no valid nodes
    CHECK(diff_lp_norm(lin, {2.0}, 1, kInf) == 0.0);
}

TEST_CASE("square-root cusp has unit half-Hoelder seminorm") {
    GridSpec g({GridAxis{-1.0, 1.0, 401}});
    GridFunction f(g);
    for (size_t i = 0; i < g.size(); ++i) f.values[i] = std::sqrt(std::abs(g.point(i)[0]));
    Ladder ladder = make_ladder(g);

    double semi = besov_seminorm(f, 0.5, kInf, kInf, 1, ladder);
    CHECK(semi == doctest::Approx(1.0).epsilon(0.05));

    // integrated variant is finite and below the sup
    double q2 = besov_seminorm(f, 0.5, kInf, 2.0, 1, ladder);
    CHECK(q2 > 0.0);
    CHECK(q2 < 10.0 * semi);

    CHECK_THROWS_AS(besov_seminorm(f, 1.5, kInf, kInf, 1, ladder), ValidationError);
}

TEST_CASE("Hoelder norm of simple shapes") {
    GridSpec g({GridAxis{-1.0, 1.0, 201}});
    GridFunction c(g);
    for (double& v : c.values) v = 0.75;
    Ladder ladder = make_ladder(g);
    CHECK(holder_norm(c, 0.5, ladder) == doctest::Approx(0.75).epsilon(1e-12));

    GridFunction lin(g);
    for (size_t i = 0; i < g.size(); ++i) lin.values[i] = g.point(i)[0];
    // |f|_inf = 1; seminorm sup_h h^(1-alpha) = hmax^(1-alpha), hmax = 0.9
    double expect = 1.0 + std::pow(0.9, 0.75);
    CHECK(holder_norm(lin, 0.25, ladder) == doctest::Approx(expect).epsilon(1e-3));
}

TEST_CASE("time-weighted suprema") {
    GridSpec g({GridAxis{0.0, 1.0, 51}});
    GridFunction a(g), b(g);
    for (double& v : a.values) v = 1.0;
    for (double& v : b.values) v = 3.0;
    std::vector<const GridFunction*> fs{&a, &b};
    CHECK(time_weighted_linf_sup({0.5, 2.0}, fs, 1.0) == doctest::Approx(6.0));
    CHECK(time_weighted_linf_sup({0.5, 2.0}, fs, 0.0) == doctest::Approx(3.0));

    Ladder ladder = make_ladder(g);
    CHECK(time_weighted_holder_sup({0.5, 2.0}, fs, 0.5, 1.0, ladder) ==
          doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("kernel ratio sweep collapses onto the scaling profile") {
    std::vector<double> ts{0.25, 1.0, 4.0};
    std::vector<double> rhos{0.5, 1.0};
    for (double p : {1.0, 2.0, kInf}) {
        KernelBoundSweep s = kernel_bound_sweep({1.0}, p, 1, ts, rhos);
        for (int e = 0; e < 4; ++e) {
            CHECK(s.group_spread[size_t(e)] == doctest::Approx(1.0).epsilon(1e-6));
            CHECK(s.cmax[size_t(e)] > 0.0);
            CHECK(s.cmax[size_t(e)] < 10.0);
        }
        CHECK(s.l1_constant == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(s.linf_constant ==
              doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-8));
    }

    // anisotropic two-dimensional kernel: the exact sup constant is
    // (2 pi)^-1 (det Sigma)^-1/2 with det = (0.5 * 2)^2
    KernelBoundSweep s2 = kernel_bound_sweep({0.5, 2.0}, 2.0, 1, ts, rhos);
    CHECK(s2.linf_constant ==
          doctest::Approx(1.0 / (2.0 * std::numbers::pi)).epsilon(1e-8));
}

TEST_CASE("bootstrap sequence matches the exact rationals") {
    BootstrapResult b = bootstrap_exponents(2, 1.5, 5.0);
    REQUIRE(b.alphas.size() == 5);
    CHECK(std::abs(b.alphas[0] - 5.0) < 1e-12);
    CHECK(std::abs(b.alphas[1] - 19.0 / 6.0) < 1e-12);
    CHECK(std::abs(b.alphas[2] - 35.0 / 18.0) < 1e-12);
    CHECK(std::abs(b.alphas[3] - 61.0 / 54.0) < 1e-12);
    CHECK(std::abs(b.alphas[4] - 1.0) < 1e-12);
    CHECK(b.steps == 4);
    CHECK(b.predicted_bound == 4);

    // immediate clamp when the first step lands exactly on the target
    BootstrapResult c = bootstrap_exponents(1, 3.0, 2.0);
    CHECK(c.steps == 1);
    CHECK(std::abs(c.alphas.back() - 0.5) < 1e-15);
}

TEST_CASE("bootstrap domain and termination") {
    CHECK_THROWS_AS(bootstrap_exponents(2, 2.0, 5.0), ValidationError);
    CHECK_THROWS_AS(bootstrap_exponents(2, 1.0, 5.0), ValidationError);
    CHECK_THROWS_AS(bootstrap_exponents(2, 1.5, 1.0), ValidationError);
    CHECK_THROWS_AS(bootstrap_exponents(0, 1.5, 5.0), ValidationError);
    CHECK_NOTHROW(bootstrap_exponents(1, 50.0, 2.0)); // d = 1 allows any p > 1

    for (uint64_t i = 0; i < 500; ++i) {
        auto u = uniform_pair(31337, i, 0, 0);
        int d = 1 + int(i % 2);
        double pmax = d == 1 ? 20.0 : 2.0;
        double p = 1.0 + (pmax - 1.0) * u[0] * 0.999;
        if (p <= 1.0 + 1e-9) continue;
        double alpha0 = 0.5 * d + 1e-6 + 10.0 * u[1];
        BootstrapResult b = bootstrap_exponents(d, p, alpha0);
        CHECK(b.alphas[1] < b.alphas[0]);
        CHECK(b.steps >= 1);
        CHECK(b.steps <= std::max(b.predicted_bound, 2));
        CHECK(b.alphas.back() == doctest::Approx(0.5 * d).epsilon(1e-12));
    }
}
