#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nsfp/errors.hpp"
#include "nsfp/rng.hpp"
#include "nsfp/spectral.hpp"
#include "nsfp/subspace.hpp"

using namespace nsfp;

TEST_CASE("mode counts for small cutoffs") {
    // |k|^2 <= 1: the six unit vectors.
    ModeSet m1(1);
    CHECK(m1.wavevector_count() == 6);
    CHECK(m1.mode_count() == 12);
    CHECK(m1.canonical_indices().size() == 3);

    // |k|^2 <= 4: 6 units, 12 with |k|^2 = 2, 8 with |k|^2 = 3, 6 axis
    // doubles.
    ModeSet m2(2);
    CHECK(m2.wavevector_count() == 32);
    CHECK(m2.canonical_indices().size() == 16);

    CHECK_THROWS_AS(build_mode_set(0), ValidationError);
}

TEST_CASE("wavevector order is stable and lookup is consistent") {
    ModeSet m(2);
    const auto& w = m.wavevectors();
    for (size_t i = 0; i + 1 < w.size(); ++i) CHECK(w[i] < w[i + 1]);
    for (size_t i = 0; i < w.size(); ++i) {
        CHECK(m.index_of(w[i]) == i);
        CHECK(w[m.conjugate_index(i)] == -w[i]);
        CHECK(m.conjugate_index(m.conjugate_index(i)) == i);
    }
    CHECK(m.index_of({5, 0, 0}) == ModeSet::npos);
    CHECK(m.index_of({0, 0, 0}) == ModeSet::npos);
}

TEST_CASE("polarization frames are orthonormal, perpendicular and even") {
    ModeSet m(3);
    for (size_t i = 0; i < m.wavevector_count(); ++i) {
        const Frame& f = m.frame(i);
        Vec3d k = to_vec3d(m.wavevectors()[i]);
        CHECK(std::abs(f.x1.dot(f.x1) - 1.0) < 1e-14);
        CHECK(std::abs(f.x2.dot(f.x2) - 1.0) < 1e-14);
        CHECK(std::abs(f.x1.dot(f.x2)) < 1e-14);
        CHECK(std::abs(f.x1.dot(k)) < 1e-13);
        CHECK(std::abs(f.x2.dot(k)) < 1e-13);

        // frame(-k) == frame(k), the property the reality convention needs
        const Frame& g = m.frame(m.conjugate_index(i));
        CHECK(g.x1.dot(f.x1) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(g.x2.dot(f.x2) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("paired assignment keeps the field real") {
    ModeSet m(2);
    SpectralField u(m);
    uint64_t s = 0;
    for (size_t w : m.canonical_indices())
        for (int pol : {1, 2}) {
            auto z = normal_pair(5, 0, s++, 0);
            u.set_pair(w, pol, Cplx(z[0], z[1]));
        }
    CHECK(u.reality_defect() == 0.0);

    // Norms count every mode: one pair set to c contributes 2|c|^2.
    SpectralField v(m);
    size_t w0 = m.canonical_indices()[0];
    v.set_pair(w0, 2, Cplx(3.0, 4.0));
    CHECK(v.norm_h_sq() == doctest::Approx(50.0).epsilon(1e-14));
    CHECK(v.norm_v_sq() ==
          doctest::Approx(50.0 * double(m.norm2(w0))).epsilon(1e-14));

    // An unpaired write is visible as a defect.
    v.set_coeff(m.conjugate_index(w0), 2, Cplx(0.0, 0.0));
    CHECK(v.reality_defect() == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("vector coefficients live in the frame plane") {
    ModeSet m(1);
    SpectralField u(m);
    size_t w = m.canonical_indices()[1];
    u.set_pair(w, 1, Cplx(1.0, -2.0));
    u.set_pair(w, 2, Cplx(0.5, 0.25));
    CVec3 c = u.vector_coeff(w);
    Vec3d k = to_vec3d(u.modes().wavevectors()[w]);
    // divergence-free: k . c == 0
    Cplx div = double(k.x) * c[0] + double(k.y) * c[1] + double(k.z) * c[2];
    CHECK(std::abs(div) < 1e-14);
    // projecting back onto the frame recovers the scalars
    const Frame& f = m.frame(w);
    Cplx p1 = c[0] * f.x1.x + c[1] * f.x1.y + c[2] * f.x1.z;
    Cplx p2 = c[0] * f.x2.x + c[1] * f.x2.y + c[2] * f.x2.z;
    CHECK(std::abs(p1 - Cplx(1.0, -2.0)) < 1e-14);
    CHECK(std::abs(p2 - Cplx(0.5, 0.25)) < 1e-14);
}

TEST_CASE("stokes multiplier and arithmetic") {
    ModeSet m(2);
    SpectralField u(m);
    for (size_t w : m.canonical_indices()) u.set_pair(w, 1, Cplx(1.0, 0.0));
    SpectralField au = apply_stokes(u);
    for (size_t w = 0; w < m.wavevector_count(); ++w)
        CHECK(au.coeff(w, 1) == Cplx(double(m.norm2(w)), 0.0) * u.coeff(w, 1));

    SpectralField v = u;
    v *= 2.0;
    v += u;
    CHECK(v.norm_h_sq() == doctest::Approx(9.0 * u.norm_h_sq()).epsilon(1e-14));
}

TEST_CASE("field serialization round trip") {
    ModeSet m(2);
    SpectralField u(m);
    uint64_t s = 0;
    for (size_t w : m.canonical_indices())
        for (int pol : {1, 2}) {
            auto z = normal_pair(11, 1, s++, 0);
            u.set_pair(w, pol, Cplx(z[0], z[1]));
        }
    SpectralField v = field_from_json(field_to_json(u), m);
    for (size_t w = 0; w < m.wavevector_count(); ++w)
        for (int pol : {1, 2}) CHECK(std::abs(u.coeff(w, pol) - v.coeff(w, pol)) < 1e-15);

    CHECK_THROWS_AS(field_from_json("{\"cutoff\": 3, \"modes\": []}", m), ValidationError);
}

TEST_CASE("subspace projection is an isometric partial inverse of embedding") {
    ModeSet m(2);
    Subspace sub = Subspace::parse("0,0,1:1:both;1,1,0:2:cos");
    CHECK(sub.dim() == 3);

    std::vector<double> coords{0.7, -1.3, 2.1};
    SpectralField u(m);
    sub.embed(u, coords);
    CHECK(u.reality_defect() == 0.0);
    std::vector<double> back = sub.project(u);
    for (size_t i = 0; i < coords.size(); ++i)
        CHECK(back[i] == doctest::Approx(coords[i]).epsilon(1e-14));

    // With the sqrt(2) coordinate scaling the embedding is an H isometry.
    CHECK(u.norm_h_sq() ==
          doctest::Approx(0.7 * 0.7 + 1.3 * 1.3 + 2.1 * 2.1).epsilon(1e-14));

    sub.remove_component(u);
    CHECK(u.norm_h_sq() < 1e-28);

    CHECK(sub.stokes_eigenvalues()[0] == 1.0);
    CHECK(sub.stokes_eigenvalues()[2] == 2.0);
    CHECK(sub.max_norm2() == 2);
    CHECK(Subspace::parse(sub.format()).format() == sub.format());
    CHECK_THROWS_AS(Subspace::parse("0,0,0:1:cos"), ValidationError);
    CHECK_THROWS_AS(Subspace::parse("0,0,1:3:cos"), ValidationError);
}
