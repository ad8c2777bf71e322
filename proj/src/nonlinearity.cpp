#include "nsfp/nonlinearity.hpp"

#include "nsfp/errors.hpp"

namespace nsfp {

BilinearTable::BilinearTable(const ModeSet& modes) : modes_(&modes) {
    const auto& waves = modes.wavevectors();
    for (uint32_t mi = 0; mi < waves.size(); ++mi)
        for (uint32_t ni = 0; ni < waves.size(); ++ni) {
            Vec3i k = waves[mi] + waves[ni];
            if (k.is_zero()) continue;
            size_t ki = modes.index_of(k);
            if (ki == ModeSet::npos) continue;
            triples_.push_back({mi, ni, uint32_t(ki)});
        }
}

void bilinear_into(const BilinearTable& table, const SpectralField& u,
                   const SpectralField& v, SpectralField& out, BilinearScratch& s) {
    const ModeSet& m = table.modes();
    if (&u.modes() != &m || !u.compatible(v) || !u.compatible(out))
        throw ValidationError("bilinear evaluation across mismatched mode sets");

    size_t nw = m.wavevector_count();
    s.uh.assign(nw, cvec3_zero());
    s.vh.assign(nw, cvec3_zero());
    s.acc.assign(nw, cvec3_zero());
    for (size_t w = 0; w < nw; ++w) {
        s.uh[w] = u.vector_coeff(w);
        s.vh[w] = v.vector_coeff(w);
    }

    const auto& waves = m.wavevectors();
    for (const auto& t : table.triples()) {
        const CVec3& a = s.uh[t.m];
        const CVec3& b = s.vh[t.n];
        Vec3i n = waves[t.n];
        // i * (u_hat(m) . n) with the gradient convention grad_hat = i n.
        Cplx dot = a[0] * double(n.x) + a[1] * double(n.y) + a[2] * double(n.z);
        Cplx f = Cplx(0, 1) * dot;
        s.acc[t.k][0] += f * b[0];
        s.acc[t.k][1] += f * b[1];
        s.acc[t.k][2] += f * b[2];
    }

    // Frame components; the frame spans the plane perpendicular to k, so this
    // also applies the divergence-free projection.
    for (size_t w = 0; w < nw; ++w) {
        const Frame& fr = m.frame(w);
        const CVec3& a = s.acc[w];
        out.set_coeff(w, 1, a[0] * fr.x1.x + a[1] * fr.x1.y + a[2] * fr.x1.z);
        out.set_coeff(w, 2, a[0] * fr.x2.x + a[1] * fr.x2.y + a[2] * fr.x2.z);
    }
}

SpectralField bilinear(const BilinearTable& table, const SpectralField& u,
                       const SpectralField& v) {
    SpectralField out(table.modes());
    BilinearScratch s;
    bilinear_into(table, u, v, out, s);
    return out;
}

DriftDecomposition decompose_drift_terms(const BilinearTable& table,
                                         const SpectralField& u, const Subspace& F) {
    // Observed part keeps only the subspace coordinates; the remainder is
    // everything else, so f + r == u exactly.
    SpectralField f(u.modes());
    F.embed(f, F.project(u));
    SpectralField r = u;
    F.remove_component(r);

    DriftDecomposition d;
    d.part[0] = F.project(bilinear(table, f, f));
    d.part[1] = F.project(bilinear(table, f, r));
    d.part[2] = F.project(bilinear(table, r, f));
    d.part[3] = F.project(bilinear(table, r, r));
    return d;
}

} // namespace nsfp
