#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "nsfp/density.hpp"
#include "nsfp/geometry.hpp"
#include "nsfp/errors.hpp"
#include "nsfp/rng.hpp"

using namespace nsfp;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> gaussian_samples(size_t n, double mean, double sd, uint64_t seed) {
    std::vector<double> flat;
    flat.reserve(n);
    for (size_t i = 0; i < n; i += 2) {
        auto z = normal_pair(seed, i, 0, 0);
        flat.push_back(mean + sd * z[0]);
        if (flat.size() < n) flat.push_back(mean + sd * z[1]);
    }
    return flat;
}

double normal_pdf(double x, double mean, double sd) {
    double u = (x - mean) / sd;
    return std::exp(-0.5 * u * u) / (sd * std::sqrt(2.0 * std::numbers::pi));
}

} // namespace

TEST_CASE("sample view and automatic grid") {
    std::vector<double> flat{0.0, 1.0, 2.0, 3.0, 4.0, 5.0};
    SampleView s = make_samples(flat, 2);
    CHECK(s.count == 3);
    CHECK(s.at(2, 1) == 5.0);
    CHECK_THROWS_AS(make_samples(flat, 4), ValidationError);

    GridSpec g = auto_grid(s, 11, 2.0);
    REQUIRE(g.dim() == 2);
    // coordinates 0,2,4 and 1,3,5: mean 2 and 3, deviation 2 each
    CHECK(g.axis(0).lo == doctest::Approx(-2.0));
    CHECK(g.axis(0).hi == doctest::Approx(6.0));
    CHECK(g.axis(1).lo == doctest::Approx(-1.0));
    CHECK(g.axis(1).n == 11);

    std::vector<double> degen{1.0, 1.0, 1.0};
    CHECK_THROWS_AS(auto_grid(make_samples(degen, 1), 11, 2.0), ValidationError);
}

TEST_CASE("rule-of-thumb bandwidth") {
    std::vector<double> flat = gaussian_samples(5000, 0.0, 2.0, 77);
    SampleView s = make_samples(flat, 1);
    std::vector<double> h = silverman_bandwidth(s);
    REQUIRE(h.size() == 1);
    MeanVar mv = mean_var(flat);
    double expect = std::sqrt(mv.var) * std::pow(4.0 / (3.0 * 5000.0), 0.2);
    CHECK(h[0] == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("density of a point mass is the discrete kernel") {
    GridSpec g({GridAxis{-4.0, 4.0, 81}});
    std::vector<double> one{0.0}; // exactly on the center node
    KdeResult kde = kde_density(make_samples(one, 1), g, {0.5});

    CHECK(kde.mass == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(kde.dropped == 0);
    // discretized normal pdf at the center, renormalized on the grid
    double center = kde.density.values[40];
    CHECK(center == doctest::Approx(normal_pdf(0.0, 0.0, 0.5)).epsilon(0.01));

    std::vector<double> outside{17.0};
    KdeResult dropped = kde_density(make_samples(outside, 1), g, {0.5});
    CHECK(dropped.dropped == 1);
    CHECK(dropped.mass == 0.0);
}

TEST_CASE("density of many draws approaches the population law") {
    const size_t n = 40000;
    std::vector<double> flat = gaussian_samples(n, 0.5, 1.5, 4242);
    SampleView s = make_samples(flat, 1);
    GridSpec g = auto_grid(s, 301, 6.0);
    KdeResult kde = kde_density(s, g);

    CHECK(kde.mass == doctest::Approx(1.0).epsilon(5e-3));
    double worst = 0.0;
    for (size_t i = 0; i < g.size(); ++i) {
        double x = g.point(i)[0];
        worst = std::max(worst, std::abs(kde.density.values[i] - normal_pdf(x, 0.5, 1.5)));
    }
    CHECK(worst < 0.012);

    // effective count near the mode is of order n * f * h
    double mid_eff = kde.effective.values[g.size() / 2];
    CHECK(mid_eff > 1000.0);
}

TEST_CASE("drift recovery on synthetic data") {
    const size_t n = 50000;
    std::vector<double> x = gaussian_samples(n, 0.0, 1.0, 99);
    std::vector<double> b(x.size());
    for (size_t i = 0; i < x.size(); ++i) b[i] = 3.0 * x[i];

    SampleView xs = make_samples(x, 1);
    SampleView bs = make_samples(b, 1);
    GridSpec g({GridAxis{-4.0, 4.0, 161}});
    std::vector<double> h = silverman_bandwidth(xs);

    SUBCASE("conditional mean of a linear response") {
        DriftField G = estimate_drift(xs, bs, g, h, {0.0}, 1.0, 10.0);
        for (size_t i = 0; i < g.size(); ++i) {
            double xc = g.point(i)[0];
            if (std::abs(xc) > 1.5 || G.masked[i]) continue;
            CHECK(std::abs(G.g[0].values[i] - 3.0 * xc) < 0.2);
        }
        CHECK(G.masked_mass < 0.05);
    }

    SUBCASE("masked nodes keep only the explicit linear term") {
        DriftField G = estimate_drift(xs, bs, g, h, {2.0}, 0.5, 1e12);
        // impossible effective threshold masks everything
        for (size_t i = 0; i < g.size(); ++i) {
            CHECK(G.masked[i] == 1);
            CHECK(G.g[0].values[i] == doctest::Approx(g.point(i)[0]).epsilon(1e-12));
        }
        CHECK(G.masked_mass == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("drift moments and the product bound on a known pair") {
    // f: uniform mass on [0,1] (up to trapezoid edges), G = x
    GridSpec g({GridAxis{0.0, 1.0, 101}});
    GridFunction f(g);
    for (double& v : f.values) v = 1.0;
    DriftField G;
    G.g.assign(1, GridFunction(g));
    G.effective = GridFunction(g);
    G.masked.assign(g.size(), 0);
    for (size_t i = 0; i < g.size(); ++i) G.g[0].values[i] = g.point(i)[0];

    // integral of x^p over [0,1] is 1/(p+1)
    CHECK(drift_density_moment(G, f, 1.0) == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(drift_density_moment(G, f, 2.0) ==
          doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-4));

    ProductBound pb = drift_density_product_norm(G, f, 2.0);
    // |G f|_2 = sqrt(1/3), moment * |f|_inf^(1/2) equals the same here
    CHECK(pb.lhs == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-4));
    CHECK(pb.rhs >= pb.lhs - 1e-12);

    // squashing f breaks the equality but keeps the bound direction
    for (size_t i = 0; i < g.size(); ++i) f.values[i] = 1.0 + g.point(i)[0];
    ProductBound pb2 = drift_density_product_norm(G, f, 2.0);
    CHECK(pb2.lhs <= pb2.rhs + 1e-12);
}
