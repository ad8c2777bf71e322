#include "nsfp/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "nsfp/errors.hpp"
#include "nsfp/geometry.hpp"

namespace nsfp {

namespace {

std::vector<double> axis_values(const SampleView& s, int a) {
    std::vector<double> v(size_t(s.count), 0.0);
    for (int m = 0; m < s.count; ++m) v[size_t(m)] = s.at(m, a);
    return v;
}

/// Discrete Gaussian taps on the grid spacing, normalized so that
/// sum(taps) * dx == 1; reach 6 standard deviations.
std::vector<double> gauss_taps(double h, double dx) {
    if (!(h > 0.0)) throw ValidationError("bandwidth must be positive");
    int R = int(std::ceil(6.0 * h / dx));
    std::vector<double> taps(size_t(2 * R + 1));
    double sum = 0.0;
    for (int j = -R; j <= R; ++j) {
        double u = double(j) * dx / h;
        taps[size_t(R + j)] = std::exp(-0.5 * u * u);
        sum += taps[size_t(R + j)];
    }
    for (double& t : taps) t /= sum * dx;
    return taps;
}

/// Distributes weight w at point x over the 2^d surrounding nodes
/// (linear binning).  Returns false when x is outside the box.
bool bin_into(GridFunction& acc, const std::vector<double>& x, double w) {
    const GridSpec& g = acc.spec;
    const int d = g.dim();
    int base[8];
    double frac[8];
    for (int a = 0; a < d; ++a) {
        const GridAxis& ax = g.axis(a);
        if (x[size_t(a)] < ax.lo || x[size_t(a)] > ax.hi) return false;
        double u = (x[size_t(a)] - ax.lo) / ax.dx();
        int i0 = std::min(ax.n - 2, int(u));
        base[a] = i0;
        frac[a] = u - double(i0);
    }
    for (unsigned corner = 0; corner < (1u << d); ++corner) {
        double cw = w;
        size_t flat = 0;
        for (int a = 0; a < d; ++a) {
            const bool hi = (corner >> a) & 1u;
            cw *= hi ? frac[a] : 1.0 - frac[a];
            flat += size_t(base[a] + (hi ? 1 : 0)) * g.strides()[size_t(a)];
        }
        acc.values[flat] += cw;
    }
    return true;
}

void smooth(GridFunction& f, const std::vector<double>& bandwidth) {
    for (int a = 0; a < f.spec.dim(); ++a)
        convolve_axis(f, a, gauss_taps(bandwidth[size_t(a)], f.spec.axis(a).dx()));
}

double kernel_volume(const std::vector<double>& bandwidth) {
    double v = 1.0;
    for (double h : bandwidth) v *= std::sqrt(2.0 * std::numbers::pi) * h;
    return v;
}

} // namespace

SampleView make_samples(const std::vector<double>& flat, int dim) {
    if (dim < 1) throw ValidationError("sample dimension must be positive");
    if (flat.size() % size_t(dim) != 0)
        throw ValidationError("sample buffer length is not a multiple of the dimension");
    return {flat.data(), dim, int(flat.size() / size_t(dim))};
}

GridSpec auto_grid(const SampleView& s, int nodes, double extent_sigmas) {
    if (s.count < 2) throw ValidationError("need at least two samples to size a grid");
    if (nodes < 2) throw ValidationError("grid needs at least two nodes per axis");
    if (!(extent_sigmas > 0.0)) throw ValidationError("grid extent must be positive");
    std::vector<GridAxis> axes;
    for (int a = 0; a < s.dim; ++a) {
        MeanVar mv = mean_var(axis_values(s, a));
        double sd = std::sqrt(mv.var);
        if (!(sd > 0.0))
            throw ValidationError("samples have zero spread along axis " +
                                  std::to_string(a) + "; density is degenerate there");
        axes.push_back({mv.mean - extent_sigmas * sd, mv.mean + extent_sigmas * sd, nodes});
    }
    return GridSpec(axes);
}

std::vector<double> silverman_bandwidth(const SampleView& s) {
    if (s.count < 2) throw ValidationError("need at least two samples for a bandwidth");
    const double d = double(s.dim);
    const double factor = std::pow(4.0 / ((d + 2.0) * double(s.count)), 1.0 / (d + 4.0));
    std::vector<double> h(size_t(s.dim), 0.0);
    for (int a = 0; a < s.dim; ++a) {
        MeanVar mv = mean_var(axis_values(s, a));
        double sd = std::sqrt(mv.var);
        if (!(sd > 0.0))
            throw ValidationError("samples have zero spread along axis " + std::to_string(a));
        h[size_t(a)] = sd * factor;
    }
    return h;
}

KdeResult kde_density(const SampleView& s, const GridSpec& grid,
                      std::vector<double> bandwidth) {
    if (s.dim != grid.dim()) throw ValidationError("sample and grid dimensions differ");
    if (s.dim > 8) throw ValidationError("density estimation supports at most 8 axes");
    if (s.count < 1) throw ValidationError("no samples");
    if (bandwidth.empty()) bandwidth = silverman_bandwidth(s);
    if (int(bandwidth.size()) != s.dim)
        throw ValidationError("bandwidth list length must match the dimension");

    KdeResult r;
    r.bandwidth = bandwidth;
    r.density = GridFunction(grid);
    std::vector<double> x(size_t(s.dim), 0.0);
    for (int m = 0; m < s.count; ++m) {
        for (int a = 0; a < s.dim; ++a) x[size_t(a)] = s.at(m, a);
        if (!bin_into(r.density, x, 1.0)) ++r.dropped;
    }
    smooth(r.density, bandwidth);

    r.effective = r.density; // still counts, not a density
    const double kv = kernel_volume(bandwidth);
    for (double& v : r.effective.values) v *= kv;
    for (double& v : r.density.values) v /= double(s.count);
    r.mass = integrate(r.density);
    return r;
}

DriftField estimate_drift(const SampleView& u, const SampleView& b, const GridSpec& grid,
                          const std::vector<double>& bandwidth,
                          const std::vector<double>& stokes_lambda, double nu,
                          double min_effective) {
    if (u.dim != grid.dim() || b.dim != grid.dim())
        throw ValidationError("sample and grid dimensions differ");
    if (u.count != b.count) throw ValidationError("state and drift sample counts differ");
    if (int(bandwidth.size()) != u.dim || int(stokes_lambda.size()) != u.dim)
        throw ValidationError("bandwidth and eigenvalue lists must match the dimension");

    const int d = u.dim;
    GridFunction den(grid);
    std::vector<GridFunction> num;
    num.assign(size_t(d), GridFunction(grid));
    std::vector<double> x(size_t(d), 0.0);
    for (int m = 0; m < u.count; ++m) {
        for (int a = 0; a < d; ++a) x[size_t(a)] = u.at(m, a);
        if (!bin_into(den, x, 1.0)) continue;
        for (int a = 0; a < d; ++a) bin_into(num[size_t(a)], x, b.at(m, a));
    }
    smooth(den, bandwidth);
    for (int a = 0; a < d; ++a) smooth(num[size_t(a)], bandwidth);

    DriftField out;
    out.g.assign(size_t(d), GridFunction(grid));
    out.effective = den;
    const double kv = kernel_volume(bandwidth);
    for (double& v : out.effective.values) v *= kv;
    out.masked.assign(grid.size(), 0);

    GridFunction w = quadrature_weights(grid);
    std::vector<int> idx;
    double masked_mass = 0.0, total_mass = 0.0;
    for (size_t i = 0; i < grid.size(); ++i) {
        grid.unflatten(i, idx);
        const bool ok = out.effective.values[i] >= min_effective && den.values[i] > 0.0;
        if (!ok) out.masked[i] = 1;
        for (int a = 0; a < d; ++a) {
            double lin = nu * stokes_lambda[size_t(a)] * grid.axis(a).coord(idx[size_t(a)]);
            double cond = ok ? num[size_t(a)].values[i] / den.values[i] : 0.0;
            out.g[size_t(a)].values[i] = lin + cond;
        }
        const double node_mass = w.values[i] * den.values[i];
        total_mass += node_mass;
        if (!ok) masked_mass += node_mass;
    }
    out.masked_mass = total_mass > 0.0 ? masked_mass / total_mass : 0.0;
    return out;
}

double drift_density_moment(const DriftField& G, const GridFunction& f, double p) {
    if (!(p >= 1.0)) throw ValidationError("moment exponent must be >= 1");
    if (!(f.spec == G.effective.spec)) throw ValidationError("drift and density grids differ");
    GridFunction w = quadrature_weights(f.spec);
    double sum = 0.0;
    for (size_t i = 0; i < f.values.size(); ++i) {
        double g2 = 0.0;
        for (const GridFunction& ga : G.g) g2 += ga.values[i] * ga.values[i];
        sum += w.values[i] * std::pow(g2, 0.5 * p) * std::max(0.0, f.values[i]);
    }
    return std::pow(sum, 1.0 / p);
}

ProductBound drift_density_product_norm(const DriftField& G, const GridFunction& f, double p) {
    if (!(p > 1.0)) throw ValidationError("product bound needs p > 1");
    if (!(f.spec == G.effective.spec)) throw ValidationError("drift and density grids differ");
    GridFunction gf(f.spec);
    for (size_t i = 0; i < f.values.size(); ++i) {
        double g2 = 0.0;
        for (const GridFunction& ga : G.g) g2 += ga.values[i] * ga.values[i];
        gf.values[i] = std::sqrt(g2) * f.values[i];
    }
    ProductBound r;
    r.lhs = lp_norm(gf, p);
    const double q = p / (p - 1.0);
    r.rhs = drift_density_moment(G, f, p) *
            std::pow(lp_norm(f, std::numeric_limits<double>::infinity()), 1.0 / q);
    return r;
}

} // namespace nsfp
