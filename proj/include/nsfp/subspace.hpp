#pragma once

#include <string>
#include <vector>

#include "nsfp/spectral.hpp"

namespace nsfp {

/// Which real coordinate of a conjugate mode pair an axis selects.
/// A pair {k,-k} with one polarization carries two real degrees of freedom,
/// sqrt(2) Re c and sqrt(2) Im c of the coefficient at the canonical k;
/// with this scaling the coordinate map is an isometry for the H norm.
enum class AxisPart { cos_part, sin_part };

struct SubspaceAxis {
    Vec3i k;            // sign-canonical representative
    int pol = 1;        // 1 or 2
    AxisPart part = AxisPart::cos_part;
    friend bool operator==(const SubspaceAxis&, const SubspaceAxis&) = default;
};

/// Finite-dimensional observation subspace spanned by selected real
/// coordinates of a mode set.  Selecting both parts of every listed pair
/// gives dimension 2 x (#pairs) x (#polarizations); single parts are allowed
/// so one-dimensional marginals are expressible.
class Subspace {
  public:
    Subspace() = default;
    explicit Subspace(std::vector<SubspaceAxis> axes);

    int dim() const { return int(axes_.size()); }
    const std::vector<SubspaceAxis>& axes() const { return axes_; }

    /// Real coordinates of the projection of u onto this subspace.
    std::vector<double> project(const SpectralField& u) const;

    /// Writes coordinates back into the subspace part of `field`, leaving
    /// every other mode untouched.  project(embed(x)) == x exactly.
    void embed(SpectralField& field, const std::vector<double>& coords) const;

    /// Zeroes the subspace part of `field`.
    void remove_component(SpectralField& field) const;

    /// Stokes eigenvalue |k|^2 per axis (the diagonal of the projected
    /// Stokes operator in these coordinates).
    std::vector<double> stokes_eigenvalues() const;

    int max_norm2() const;        ///< largest |k|^2 among axes

    /// Axis list syntax: "k1,k2,k3:pol:part" joined with ';', where part is
    /// one of both|cos|sin and "both" expands to the cos and sin axes.
    static Subspace parse(const std::string& text);
    std::string format() const;

  private:
    std::vector<SubspaceAxis> axes_;
};

} // namespace nsfp
