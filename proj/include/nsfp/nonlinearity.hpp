#pragma once

#include <array>
#include <vector>

#include "nsfp/spectral.hpp"
#include "nsfp/subspace.hpp"

namespace nsfp {

/// Precomputed interaction table for the truncated convection term.
/// Stores every wavevector triple (m, n, k) with m + n = k, all three inside
/// the lattice ball and k != 0.  Building the table once makes repeated
/// evaluations a flat loop over triples.
class BilinearTable {
  public:
    explicit BilinearTable(const ModeSet& modes);

    struct Triple {
        uint32_t m, n, k; // wavevector indices
    };

    const ModeSet& modes() const { return *modes_; }
    const std::vector<Triple>& triples() const { return triples_; }

  private:
    const ModeSet* modes_;
    std::vector<Triple> triples_;
};

/// Divergence-free projection of (u . grad) v truncated to the mode set:
/// output coefficient at k is the frame component of
/// i * sum_{m+n=k} (u_hat(m) . n) v_hat(n).
/// Throws ValidationError when u, v and the table disagree on the mode set.
SpectralField bilinear(const BilinearTable& table, const SpectralField& u,
                       const SpectralField& v);

/// Reusable buffers for repeated bilinear evaluations in inner loops.
struct BilinearScratch {
    std::vector<CVec3> uh, vh, acc;
};

/// Same computation as bilinear() without per-call allocation; out must
/// already live on the table's mode set.
void bilinear_into(const BilinearTable& table, const SpectralField& u,
                   const SpectralField& v, SpectralField& out, BilinearScratch& scratch);

/// The four pieces of the projected convection term obtained by splitting
/// u into its observed part f = P_F u and the remainder r = u - f:
/// parts are P_F of B(f,f), B(f,r), B(r,f), B(r,r), in that order, given in
/// subspace coordinates.  Their sum equals P_F of B(u,u).
struct DriftDecomposition {
    std::array<std::vector<double>, 4> part;
};

DriftDecomposition decompose_drift_terms(const BilinearTable& table,
                                         const SpectralField& u, const Subspace& F);

} // namespace nsfp
