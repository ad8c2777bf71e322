#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "nsfp/geometry.hpp"

namespace nsfp {

/// One basis element label: wavevector plus polarization index (1 or 2).
struct WaveMode {
    Vec3i k;
    int pol = 1;
    friend bool operator==(const WaveMode&, const WaveMode&) = default;
};

/// Orthonormal pair spanning the plane perpendicular to k.  Frames are
/// computed from the sign-canonical representative, so frame(k) == frame(-k).
struct Frame {
    Vec3d x1, x2;
};

/// Deterministic polarization frame for a nonzero wavevector.
/// Rule: take the sign-canonical representative kc, let a be the coordinate
/// axis least aligned with kc (ties resolved toward the higher index),
/// x1 = normalize(kc x a) with canonical sign, x2 = normalize(kc) x x1.
Frame polarization_frame(Vec3i k);

/// Truncated divergence-free Fourier basis: all k != 0 with |k|^2 <= cutoff^2,
/// two polarizations each.  Wavevectors are ordered lexicographically on
/// (|k|^2, k1, k2, k3) so layouts are stable across runs.
class ModeSet {
  public:
    explicit ModeSet(int cutoff);

    int cutoff() const { return cutoff_; }
    size_t wavevector_count() const { return waves_.size(); }
    size_t mode_count() const { return 2 * waves_.size(); }

    const std::vector<Vec3i>& wavevectors() const { return waves_; }
    const Frame& frame(size_t w) const { return frames_[w]; }
    int64_t norm2(size_t w) const { return waves_[w].norm2(); }

    /// Index of -k for wavevector index w.
    size_t conjugate_index(size_t w) const { return conj_[w]; }
    /// Indices of the sign-canonical representatives, one per {k,-k} pair.
    const std::vector<size_t>& canonical_indices() const { return canon_; }

    /// Index lookup; returns npos when k is outside the set.
    static constexpr size_t npos = size_t(-1);
    size_t index_of(Vec3i k) const;

  private:
    int cutoff_;
    std::vector<Vec3i> waves_;
    std::vector<Frame> frames_;
    std::vector<size_t> conj_;
    std::vector<size_t> canon_;
    std::unordered_map<int64_t, size_t> lookup_;
};

/// Convenience factory; throws ValidationError when cutoff < 1.
ModeSet build_mode_set(int cutoff);

/// Complex coefficients over a ModeSet, two scalars per wavevector
/// (one per polarization).  A field represents a real velocity field when
/// coeff(-k, i) == conj(coeff(k, i)) for every mode; all constructors here
/// preserve that symmetry.
class SpectralField {
  public:
    SpectralField() = default;
    explicit SpectralField(const ModeSet& modes)
        : modes_(&modes), c_(modes.mode_count(), Cplx(0)) {}

    const ModeSet& modes() const { return *modes_; }
    bool compatible(const SpectralField& o) const { return modes_ == o.modes_; }

    Cplx coeff(size_t w, int pol) const { return c_[2 * w + (pol - 1)]; }
    void set_coeff(size_t w, int pol, Cplx v) { c_[2 * w + (pol - 1)] = v; }

    /// Sets the coefficient at the canonical representative of {k,-k} and
    /// the conjugate value at -k, keeping the field real.
    void set_pair(size_t canonical_w, int pol, Cplx v);

    /// Vector Fourier coefficient c1 x1 + c2 x2 at wavevector index w.
    CVec3 vector_coeff(size_t w) const;

    double norm_h_sq() const;   ///< sum over all modes of |coeff|^2
    double norm_v_sq() const;   ///< sum over all modes of |k|^2 |coeff|^2

    /// Largest reality-symmetry violation max |c(-k,i) - conj(c(k,i))|.
    double reality_defect() const;

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator*=(double s);

  private:
    const ModeSet* modes_ = nullptr;
    std::vector<Cplx> c_;
};

/// Multiplies every coefficient by its Stokes eigenvalue |k|^2.
SpectralField apply_stokes(const SpectralField& u);

/// JSON serialization of a field: {"cutoff": N, "modes": [{"k": [..], "pol",
/// "re", "im"}, ...]}.  Parsing validates cutoff and mode membership.
std::string field_to_json(const SpectralField& u);
SpectralField field_from_json(const std::string& text, const ModeSet& modes);

} // namespace nsfp
