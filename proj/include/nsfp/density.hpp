#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nsfp/grid.hpp"

namespace nsfp {

/// Flat sample matrix view, row m = one d-dimensional observation.
struct SampleView {
    const double* data = nullptr;
    int dim = 0;
    int count = 0;

    double at(int m, int a) const { return data[size_t(m) * size_t(dim) + size_t(a)]; }
};

/// Throws ValidationError when flat.size() is not a multiple of dim.
SampleView make_samples(const std::vector<double>& flat, int dim);

/// Box covering mean +- extent_sigmas sample deviations per axis.
/// Throws ValidationError when a coordinate has zero spread.
GridSpec auto_grid(const SampleView& s, int nodes, double extent_sigmas);

/// Per-axis rule-of-thumb bandwidth
///   h_a = sigma_a * (4 / ((d + 2) n))^(1 / (d + 4)).
std::vector<double> silverman_bandwidth(const SampleView& s);

/// Gaussian product-kernel density estimate, computed by linear binning
/// followed by a separable convolution with the discretized kernel
/// (normalized so binned mass is preserved away from the box edges).
struct KdeResult {
    GridFunction density;
    GridFunction effective;        ///< local equivalent sample count, n fhat prod(sqrt(2 pi) h_a)
    std::vector<double> bandwidth; ///< per axis
    int dropped = 0;               ///< samples outside the box, excluded
    double mass = 0.0;             ///< integral of the estimate over the box
};

/// Empty bandwidth selects the rule of thumb.
KdeResult kde_density(const SampleView& s, const GridSpec& grid,
                      std::vector<double> bandwidth = {});

/// Estimated drift of the projected dynamics on the grid:
///   G_a(x) = nu lambda_a x_a + E[b_a | x],
/// the conditional expectation estimated by a Nadaraya-Watson ratio with the
/// same binned-kernel machinery as the density.  Nodes whose effective count
/// falls below min_effective keep only the explicit linear term and are
/// flagged in `masked`.
struct DriftField {
    std::vector<GridFunction> g;   ///< one component per axis
    GridFunction effective;
    std::vector<uint8_t> masked;   ///< per node
    double masked_mass = 0.0;      ///< density mass carried by masked nodes
};

DriftField estimate_drift(const SampleView& u, const SampleView& b, const GridSpec& grid,
                          const std::vector<double>& bandwidth,
                          const std::vector<double>& stokes_lambda, double nu,
                          double min_effective);

/// ( integral |G(x)|^p f(x) dx )^(1/p) with |G| the Euclidean magnitude.
double drift_density_moment(const DriftField& G, const GridFunction& f, double p);

/// Both sides of the Hoelder product bound
///   |G f|_Lp <= (integral |G|^p f)^(1/p) * |f|_inf^(1/q),  1/p + 1/q = 1.
struct ProductBound {
    double lhs = 0.0;
    double rhs = 0.0;
};

ProductBound drift_density_product_norm(const DriftField& G, const GridFunction& f, double p);

} // namespace nsfp
