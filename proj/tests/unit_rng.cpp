#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "nsfp/geometry.hpp"
#include "nsfp/rng.hpp"

using namespace nsfp;

// Published known-answer vectors for the 4x32 counter cipher at 10 rounds.
TEST_CASE("cipher known answers") {
    auto zeros = philox4x32({0, 0, 0, 0}, {0, 0});
    CHECK(zeros[0] == 0x6627e8d5u);
    CHECK(zeros[1] == 0xe169c58du);
    CHECK(zeros[2] == 0xbc57ac4cu);
    CHECK(zeros[3] == 0x9b00dbd8u);

    auto ones = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                           {0xffffffffu, 0xffffffffu});
    CHECK(ones[0] == 0x408f276du);
    CHECK(ones[1] == 0x41c83b0eu);
    CHECK(ones[2] == 0xa20bc7c6u);
    CHECK(ones[3] == 0x6d5451fdu);

    auto pi = philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                         {0xa4093822u, 0x299f31d0u});
    CHECK(pi[0] == 0xd16cfe09u);
    CHECK(pi[1] == 0x94fdccebu);
    CHECK(pi[2] == 0x5001e420u);
    CHECK(pi[3] == 0x24126ea1u);
}

TEST_CASE("stream positions are pure function arguments") {
    auto a = normal_pair(7, 3, 11, 2);
    auto b = normal_pair(7, 3, 11, 2);
    CHECK(a[0] == b[0]);
    CHECK(a[1] == b[1]);

    // Changing any single index moves to a different block.
    CHECK(normal_pair(8, 3, 11, 2)[0] != a[0]);
    CHECK(normal_pair(7, 4, 11, 2)[0] != a[0]);
    CHECK(normal_pair(7, 3, 12, 2)[0] != a[0]);
    CHECK(normal_pair(7, 3, 11, 3)[0] != a[0]);

    // High member words participate (injectivity beyond 32 bits).
    CHECK(normal_pair(7, 3 + (uint64_t(1) << 32), 11, 2)[0] != a[0]);
}

TEST_CASE("uniforms stay inside the half-open interval") {
    for (uint64_t s = 0; s < 2000; ++s) {
        auto u = uniform_pair(123, 0, s, 0);
        CHECK(u[0] > 0.0);
        CHECK(u[0] <= 1.0);
        CHECK(u[1] > 0.0);
        CHECK(u[1] <= 1.0);
    }
}

TEST_CASE("normal draws match standard moments") {
    const size_t n = 200000;
    std::vector<double> x0, x1;
    x0.reserve(n);
    x1.reserve(n);
    double cross = 0.0;
    for (size_t i = 0; i < n; ++i) {
        auto z = normal_pair(42, i, 0, 0);
        x0.push_back(z[0]);
        x1.push_back(z[1]);
        cross += z[0] * z[1];
    }
    MeanVar m0 = mean_var(x0);
    MeanVar m1 = mean_var(x1);
    // Mean SE is 1/sqrt(n) ~ 0.0022, variance SE is sqrt(2/n) ~ 0.0032;
    // allow four standard errors.
    CHECK(std::abs(m0.mean) < 0.009);
    CHECK(std::abs(m1.mean) < 0.009);
    CHECK(std::abs(m0.var - 1.0) < 0.013);
    CHECK(std::abs(m1.var - 1.0) < 0.013);
    CHECK(std::abs(cross / double(n)) < 0.009);
}

TEST_CASE("mean_var against a hand-computed list") {
    std::vector<double> v{1.0, 2.0, 4.0, 7.0};
    MeanVar m = mean_var(v);
    CHECK(m.mean == doctest::Approx(3.5).epsilon(1e-15));
    // squared deviations: 6.25, 2.25, 0.25, 12.25; sum 21; /3
    CHECK(m.var == doctest::Approx(7.0).epsilon(1e-15));

    CHECK(mean_var({}).mean == 0.0);
    CHECK(mean_var({5.0}).var == 0.0);
}
