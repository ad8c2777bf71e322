#pragma once

namespace nsfp {

/// A family of planar bump arrangements showing that a bounded joint density
/// says nothing about the suprema of its marginals.
///
/// For a window radius K, place one smooth product bump in each integer cell
/// (k1, k2) with k1, k2 >= 1 and k1^2 + k2^2 <= K^2.  The bump in cell k has
/// weight 1/k2^2, is squeezed in the first coordinate by k2, and keeps width
/// 1/4 in the second, so all supports are pairwise disjoint:
///   T_k(x) = (1/k2^2) * 2 k2 B(2 k2 (x1 - k1)) * 2 B(2 (x2 - k2)),
/// with B the normalized bump u -> exp(-1/(1 - (2u)^2)) / Z on |u| < 1/2.
///
/// The peak of T_k is 4 B(0)^2 / k2, so the pointwise supremum of the sum is
/// 4 B(0)^2 no matter how large K is.  The first marginal, however, stacks
/// the whole column k1 = 1: its supremum is 2 B(0) H_m with the harmonic
/// number H_m, m = floor(sqrt(K^2 - 1)), which is unbounded in K.
class CounterexampleDensity {
  public:
    explicit CounterexampleDensity(int window); ///< throws ValidationError when K < 2

    int window() const { return window_; }

    double joint(double x1, double x2) const; ///< O(1): cells are found by rounding
    double marginal1(double x1) const;        ///< integral over x2, in closed form

    double joint_sup() const;    ///< 4 B(0)^2, independent of the window
    double marginal_sup() const; ///< 2 B(0) H_m, growing with the window
    double mass() const;         ///< total mass, sum over the window of 1/k2^2

    int max_squeeze() const;     ///< m, the tallest column height (at k1 = 1)

    double bump_peak() const { return phi0_; } ///< B(0)

  private:
    int column_height(int k1) const; ///< largest k2 in the window for this k1

    int window_;
    double z_;    ///< bump normalizer
    double phi0_; ///< B(0) = exp(-1) / Z
};

} // namespace nsfp
