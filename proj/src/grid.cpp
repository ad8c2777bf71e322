#include "nsfp/grid.hpp"

#include <algorithm>
#include <cmath>

#include "nsfp/errors.hpp"

namespace nsfp {

bool operator==(const GridAxis& a, const GridAxis& b) {
    return a.lo == b.lo && a.hi == b.hi && a.n == b.n;
}

bool operator==(const GridSpec& a, const GridSpec& b) { return a.axes_ == b.axes_; }

GridSpec::GridSpec(std::vector<GridAxis> axes) : axes_(std::move(axes)) {
    if (axes_.empty()) throw ValidationError("grid needs at least one axis");
    size_ = 1;
    for (const GridAxis& ax : axes_) {
        if (ax.n < 2) throw ValidationError("grid axis needs at least two nodes");
        if (!(ax.hi > ax.lo)) throw ValidationError("grid axis has empty extent");
        if (size_ > (size_t(1) << 40) / size_t(ax.n))
            throw ValidationError("grid is too large");
        size_ *= size_t(ax.n);
    }
    strides_.assign(axes_.size(), 1);
    for (int a = int(axes_.size()) - 2; a >= 0; --a)
        strides_[size_t(a)] = strides_[size_t(a) + 1] * size_t(axes_[size_t(a) + 1].n);
}

size_t GridSpec::flatten(const std::vector<int>& idx) const {
    size_t flat = 0;
    for (int a = 0; a < dim(); ++a) flat += size_t(idx[size_t(a)]) * strides_[size_t(a)];
    return flat;
}

void GridSpec::unflatten(size_t flat, std::vector<int>& idx) const {
    idx.resize(axes_.size());
    for (int a = 0; a < dim(); ++a) {
        idx[size_t(a)] = int(flat / strides_[size_t(a)]);
        flat %= strides_[size_t(a)];
    }
}

std::vector<double> GridSpec::point(size_t flat) const {
    std::vector<int> idx;
    unflatten(flat, idx);
    std::vector<double> x(axes_.size());
    for (int a = 0; a < dim(); ++a) x[size_t(a)] = axes_[size_t(a)].coord(idx[size_t(a)]);
    return x;
}

double GridSpec::cell_volume() const {
    double v = 1.0;
    for (const GridAxis& ax : axes_) v *= ax.dx();
    return v;
}

bool GridSpec::contains(const std::vector<double>& x) const {
    if (int(x.size()) != dim()) throw ValidationError("point dimension mismatch");
    for (int a = 0; a < dim(); ++a) {
        const GridAxis& ax = axes_[size_t(a)];
        const double slack = 1e-12 * (ax.hi - ax.lo);
        if (x[size_t(a)] < ax.lo - slack || x[size_t(a)] > ax.hi + slack) return false;
    }
    return true;
}

namespace {

// Trapezoid weight of node i on an axis with n nodes, in units of dx.
double end_weight(int i, int n) { return (i == 0 || i == n - 1) ? 0.5 : 1.0; }

} // namespace

double integrate(const GridFunction& f) {
    std::vector<int> idx;
    double sum = 0.0;
    for (size_t i = 0; i < f.values.size(); ++i) {
        f.spec.unflatten(i, idx);
        double w = 1.0;
        for (int a = 0; a < f.spec.dim(); ++a)
            w *= end_weight(idx[size_t(a)], f.spec.axis(a).n);
        sum += w * f.values[i];
    }
    return sum * f.spec.cell_volume();
}

double lp_norm(const GridFunction& f, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : f.values) m = std::max(m, std::abs(v));
        return m;
    }
    if (!(p >= 1.0)) throw ValidationError("norm exponent must be >= 1");
    std::vector<int> idx;
    double sum = 0.0;
    for (size_t i = 0; i < f.values.size(); ++i) {
        f.spec.unflatten(i, idx);
        double w = 1.0;
        for (int a = 0; a < f.spec.dim(); ++a)
            w *= end_weight(idx[size_t(a)], f.spec.axis(a).n);
        sum += w * std::pow(std::abs(f.values[i]), p);
    }
    return std::pow(sum * f.spec.cell_volume(), 1.0 / p);
}

GridFunction quadrature_weights(const GridSpec& spec) {
    GridFunction w(spec);
    std::vector<int> idx;
    const double vol = spec.cell_volume();
    for (size_t i = 0; i < w.values.size(); ++i) {
        spec.unflatten(i, idx);
        double v = vol;
        for (int a = 0; a < spec.dim(); ++a) v *= end_weight(idx[size_t(a)], spec.axis(a).n);
        w.values[i] = v;
    }
    return w;
}

void convolve_axis(GridFunction& f, int axis, const std::vector<double>& taps) {
    if (axis < 0 || axis >= f.spec.dim()) throw ValidationError("convolution axis out of range");
    if (taps.size() % 2 == 0) throw ValidationError("convolution taps must have odd length");
    const int R = int(taps.size() / 2);
    const int n = f.spec.axis(axis).n;
    const size_t stride = f.spec.strides()[size_t(axis)];
    const size_t block = stride * size_t(n);

    std::vector<double> line(size_t(n), 0.0);
    for (size_t b = 0; b < f.values.size(); b += block)
        for (size_t o = 0; o < stride; ++o) {
            double* base = f.values.data() + b + o;
            for (int i = 0; i < n; ++i) line[size_t(i)] = base[size_t(i) * stride];
            for (int i = 0; i < n; ++i) {
                double acc = 0.0;
                const int j0 = std::max(-R, -i), j1 = std::min(R, n - 1 - i);
                for (int j = j0; j <= j1; ++j)
                    acc += taps[size_t(R + j)] * line[size_t(i + j)];
                base[size_t(i) * stride] = acc;
            }
        }
}

double interpolate(const GridFunction& f, const std::vector<double>& x) {
    const GridSpec& g = f.spec;
    if (!g.contains(x)) throw ValidationError("interpolation point outside the grid");
    const int d = g.dim();
    std::vector<int> base(size_t(d), 0);
    std::vector<double> frac(size_t(d), 0.0);
    for (int a = 0; a < d; ++a) {
        const GridAxis& ax = g.axis(a);
        double u = (x[size_t(a)] - ax.lo) / ax.dx();
        int i0 = int(std::floor(u));
        i0 = std::max(0, std::min(ax.n - 2, i0));
        base[size_t(a)] = i0;
        frac[size_t(a)] = u - double(i0);
    }
    double out = 0.0;
    for (unsigned corner = 0; corner < (1u << d); ++corner) {
        double w = 1.0;
        size_t flat = 0;
        for (int a = 0; a < d; ++a) {
            const bool hi = (corner >> a) & 1u;
            w *= hi ? frac[size_t(a)] : 1.0 - frac[size_t(a)];
            flat += size_t(base[size_t(a)] + (hi ? 1 : 0)) * g.strides()[size_t(a)];
        }
        out += w * f.values[flat];
    }
    return out;
}

} // namespace nsfp
