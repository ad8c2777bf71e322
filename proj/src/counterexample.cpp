#include "nsfp/counterexample.hpp"

#include <cmath>

#include "nsfp/errors.hpp"

namespace nsfp {

namespace {

/// Raw bump on (-1, 1), smooth and compactly supported.
double psi(double u) {
    if (std::abs(u) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - u * u));
}

/// Simpson integral of psi(2u) over the support |u| < 1/2.  The integrand
/// vanishes to all orders at the endpoints, so convergence is fast.
double bump_normalizer() {
    const int n = 2000; // even
    const double a = -0.5, b = 0.5;
    const double h = (b - a) / double(n);
    double sum = psi(2.0 * a) + psi(2.0 * b);
    for (int i = 1; i < n; ++i)
        sum += psi(2.0 * (a + h * double(i))) * ((i % 2 == 1) ? 4.0 : 2.0);
    return sum * h / 3.0;
}

double harmonic(int m) {
    double s = 0.0;
    for (int j = 1; j <= m; ++j) s += 1.0 / double(j);
    return s;
}

} // namespace

CounterexampleDensity::CounterexampleDensity(int window) : window_(window) {
    if (window < 2) throw ValidationError("window radius must be at least 2");
    z_ = bump_normalizer();
    phi0_ = std::exp(-1.0) / z_;
}

int CounterexampleDensity::column_height(int k1) const {
    const int budget = window_ * window_ - k1 * k1;
    if (budget < 1) return 0;
    int m = 0;
    while ((m + 1) * (m + 1) <= budget) ++m;
    return m;
}

double CounterexampleDensity::joint(double x1, double x2) const {
    const int k1 = int(std::lround(x1));
    const int k2 = int(std::lround(x2));
    if (k1 < 1 || k2 < 1 || k1 * k1 + k2 * k2 > window_ * window_) return 0.0;
    // Supports are confined to |x1 - k1| < 1/(4 k2), |x2 - k2| < 1/4, so the
    // rounded cell is the only one that can contribute.
    const double b1 = psi(4.0 * double(k2) * (x1 - double(k1))) / z_;
    const double b2 = psi(4.0 * (x2 - double(k2))) / z_;
    const double w = 1.0 / (double(k2) * double(k2));
    return w * 2.0 * double(k2) * b1 * 2.0 * b2;
}

double CounterexampleDensity::marginal1(double x1) const {
    const int k1 = int(std::lround(x1));
    if (k1 < 1) return 0.0;
    const int m = column_height(k1);
    double sum = 0.0;
    for (int k2 = 1; k2 <= m; ++k2)
        sum += (2.0 / double(k2)) * psi(4.0 * double(k2) * (x1 - double(k1))) / z_;
    return sum;
}

double CounterexampleDensity::joint_sup() const { return 4.0 * phi0_ * phi0_; }

double CounterexampleDensity::marginal_sup() const {
    return 2.0 * phi0_ * harmonic(column_height(1));
}

double CounterexampleDensity::mass() const {
    double total = 0.0;
    for (int k1 = 1; k1 < window_; ++k1) {
        const int m = column_height(k1);
        for (int k2 = 1; k2 <= m; ++k2) total += 1.0 / (double(k2) * double(k2));
    }
    return total;
}

int CounterexampleDensity::max_squeeze() const { return column_height(1); }

} // namespace nsfp
