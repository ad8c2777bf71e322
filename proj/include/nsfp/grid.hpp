#pragma once

#include <cstddef>
#include <vector>

namespace nsfp {

/// Uniform nodes lo, lo + dx, ..., hi with n >= 2 so dx > 0.
struct GridAxis {
    double lo = 0.0;
    double hi = 1.0;
    int n = 2;

    double dx() const { return (hi - lo) / double(n - 1); }
    double coord(int i) const { return lo + dx() * double(i); }
};

/// Tensor-product grid on a box, row-major flattening (last axis fastest).
class GridSpec {
  public:
    GridSpec() = default;
    explicit GridSpec(std::vector<GridAxis> axes); ///< throws ValidationError when degenerate

    int dim() const { return int(axes_.size()); }
    const GridAxis& axis(int a) const { return axes_[size_t(a)]; }
    const std::vector<GridAxis>& axes() const { return axes_; }

    size_t size() const { return size_; }
    const std::vector<size_t>& strides() const { return strides_; }

    size_t flatten(const std::vector<int>& idx) const;
    void unflatten(size_t flat, std::vector<int>& idx) const;
    std::vector<double> point(size_t flat) const;

    double cell_volume() const; ///< product of the axis spacings

    bool contains(const std::vector<double>& x) const;

    friend bool operator==(const GridSpec&, const GridSpec&);

  private:
    std::vector<GridAxis> axes_;
    std::vector<size_t> strides_;
    size_t size_ = 0;
};

bool operator==(const GridAxis&, const GridAxis&);

/// Scalar samples on a GridSpec, values row-major.
struct GridFunction {
    GridSpec spec;
    std::vector<double> values;

    explicit GridFunction(GridSpec s = {})
        : spec(std::move(s)), values(spec.dim() ? spec.size() : 0, 0.0) {}
};

/// Trapezoid quadrature: integral of f over the box.
double integrate(const GridFunction& f);

/// Trapezoid-weighted L^p norm; pass infinity for the sup norm.
double lp_norm(const GridFunction& f, double p);

/// Multilinear interpolation at x; throws ValidationError outside the box.
double interpolate(const GridFunction& f, const std::vector<double>& x);

/// Per-node trapezoid weights including the cell volume, so that
/// integrate(f) == sum_i weights[i] * f[i].
GridFunction quadrature_weights(const GridSpec& spec);

/// In-place convolution along one axis with centered taps (odd length
/// 2R + 1): out[i] = sum_{|j| <= R} taps[R + j] * f[i + j], zero-padded at
/// the ends.  Applying this for every axis gives a separable convolution.
void convolve_axis(GridFunction& f, int axis, const std::vector<double>& taps);

} // namespace nsfp
