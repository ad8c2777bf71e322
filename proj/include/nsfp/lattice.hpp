#pragma once

#include <array>
#include <string>
#include <vector>

#include "nsfp/geometry.hpp"

namespace nsfp {

/// Diagonal of the Smith normal form of the 3 x m matrix whose columns are
/// the given vectors, with the divisibility property d1 | d2 | d3 and
/// nonnegative entries.  rank counts the nonzero diagonal entries.
struct SmithResult {
    std::array<int64_t, 3> factors = {0, 0, 0};
    int rank = 0;
};

/// All row/column operations use overflow-checked 64-bit arithmetic and
/// throw NumericalError on overflow, so a wrong answer is never returned
/// silently.
SmithResult smith_normal_form(const std::vector<Vec3i>& generators);

/// Does the set of vectors generate the full integer lattice Z^3 under
/// addition?  True exactly when all three invariant factors equal 1.
struct LatticeGenReport {
    bool generates = false;
    SmithResult smith;
    /// Three elements of the generated subgroup forming a Z^3 basis
    /// (scaled by the invariant factors when the test fails).
    std::vector<Vec3i> witness;
    /// Human-readable reason when the test fails (rank deficit or the first
    /// invariant factor exceeding 1).
    std::string obstruction;
};

LatticeGenReport generates_integer_lattice(const std::vector<Vec3i>& generators);

} // namespace nsfp
