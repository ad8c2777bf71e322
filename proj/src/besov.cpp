#include "nsfp/besov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "nsfp/errors.hpp"

namespace nsfp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double binom(int n, int i) {
    double v = 1.0;
    for (int j = 1; j <= i; ++j) v = v * double(n - j + 1) / double(j);
    return v;
}

double gauss_pdf(double x, double s) {
    double u = x / s;
    return std::exp(-0.5 * u * u) / (std::sqrt(2.0 * std::numbers::pi) * s);
}

double gauss_pdf_deriv(double x, double s) { return -x / (s * s) * gauss_pdf(x, s); }

/// Closed-form L^p norm of the centered 1-d Gaussian density with width s.
double gauss_norm(double s, double p) {
    const double two_pi_s2 = 2.0 * std::numbers::pi * s * s;
    if (std::isinf(p)) return 1.0 / std::sqrt(two_pi_s2);
    return std::pow(two_pi_s2, 0.5 * (1.0 / p - 1.0)) * std::pow(p, -0.5 / p);
}

/// L^p norm of the n-fold difference with step h of the 1-d Gaussian density
/// (or its derivative), by trapezoid quadrature on exact evaluations.
double gauss_diff_norm(double s, double h, int n, bool deriv, double p) {
    const double L = 8.0 * s + double(n) * h;
    const int N = 4001;
    const double dx = 2.0 * L / double(N - 1);
    double acc = 0.0;
    for (int i = 0; i < N; ++i) {
        const double x = -L + dx * double(i);
        double v = 0.0;
        for (int j = 0; j <= n; ++j) {
            const double sgn = ((n - j) % 2 == 0) ? 1.0 : -1.0;
            const double y = x + double(j) * h;
            v += sgn * binom(n, j) * (deriv ? gauss_pdf_deriv(y, s) : gauss_pdf(y, s));
        }
        if (std::isinf(p)) {
            acc = std::max(acc, std::abs(v));
        } else {
            const double w = (i == 0 || i == N - 1) ? 0.5 : 1.0;
            acc += w * std::pow(std::abs(v), p);
        }
    }
    return std::isinf(p) ? acc : std::pow(acc * dx, 1.0 / p);
}

} // namespace

Ladder make_ladder(const GridSpec& grid, int count) {
    if (count < 2) throw ValidationError("increment ladder needs at least two magnitudes");
    const int d = grid.dim();
    Ladder lad;
    for (int a = 0; a < d; ++a) {
        std::vector<double> e(size_t(d), 0.0);
        e[size_t(a)] = 1.0;
        lad.dirs.push_back(e);
    }
    if (d >= 2) {
        const double inv = 1.0 / std::sqrt(double(d));
        for (unsigned signs = 0; signs < (1u << (d - 1)); ++signs) {
            std::vector<double> e(size_t(d), inv);
            for (int a = 1; a < d; ++a)
                if ((signs >> (a - 1)) & 1u) e[size_t(a)] = -inv;
            lad.dirs.push_back(e);
        }
    }

    double max_dx = 0.0, min_width = kInf;
    for (int a = 0; a < d; ++a) {
        max_dx = std::max(max_dx, grid.axis(a).dx());
        min_width = std::min(min_width, grid.axis(a).hi - grid.axis(a).lo);
    }
    const double lo = 2.0 * max_dx;
    const double hi = std::min(1.0, 0.45 * min_width);
    if (!(lo < hi))
        throw ValidationError("grid is too coarse for an increment ladder");
    for (int i = 0; i < count; ++i)
        lad.mags.push_back(lo * std::pow(hi / lo, double(i) / double(count - 1)));
    return lad;
}

double diff_lp_norm(const GridFunction& f, const std::vector<double>& h, int n, double p) {
    if (n < 1) throw ValidationError("difference order must be at least 1");
    if (int(h.size()) != f.spec.dim()) throw ValidationError("increment dimension mismatch");
    if (!std::isinf(p) && !(p >= 1.0)) throw ValidationError("norm exponent must be >= 1");

    const GridSpec& g = f.spec;
    std::vector<double> x(h.size()), y(h.size());
    std::vector<double> coeff(size_t(n) + 1);
    for (int j = 0; j <= n; ++j)
        coeff[size_t(j)] = (((n - j) % 2 == 0) ? 1.0 : -1.0) * binom(n, j);

    double acc = 0.0;
    size_t valid = 0;
    for (size_t i = 0; i < g.size(); ++i) {
        x = g.point(i);
        bool ok = true;
        for (int j = 1; j <= n && ok; ++j) {
            for (size_t a = 0; a < h.size(); ++a) y[a] = x[a] + double(j) * h[a];
            ok = g.contains(y);
        }
        if (!ok) continue;
        double v = coeff[0] * f.values[i];
        for (int j = 1; j <= n; ++j) {
            for (size_t a = 0; a < h.size(); ++a) y[a] = x[a] + double(j) * h[a];
            v += coeff[size_t(j)] * interpolate(f, y);
        }
        ++valid;
        if (std::isinf(p))
            acc = std::max(acc, std::abs(v));
        else
            acc += std::pow(std::abs(v), p);
    }
    if (valid == 0) return 0.0;
    return std::isinf(p) ? acc : std::pow(acc * g.cell_volume(), 1.0 / p);
}

double besov_seminorm(const GridFunction& f, double alpha, double p, double q, int n,
                      const Ladder& ladder) {
    if (!(alpha > 0.0)) throw ValidationError("smoothness exponent must be positive");
    if (double(n) <= alpha)
        throw ValidationError("difference order must exceed the smoothness exponent");
    if (ladder.dirs.empty() || ladder.mags.size() < 2)
        throw ValidationError("increment ladder is empty");

    std::vector<double> h(size_t(f.spec.dim()), 0.0);
    if (std::isinf(q)) {
        double sup = 0.0;
        for (const auto& dir : ladder.dirs)
            for (double mag : ladder.mags) {
                for (size_t a = 0; a < h.size(); ++a) h[a] = mag * dir[a];
                sup = std::max(sup, std::pow(mag, -alpha) * diff_lp_norm(f, h, n, p));
            }
        return sup;
    }
    if (!(q >= 1.0)) throw ValidationError("summation exponent must be >= 1");
    // Polar quadrature of (|h|^-alpha |D_h^n f|_p)^q against dh / |h|^d:
    // directions average, magnitudes integrate in log scale.
    double total = 0.0;
    for (size_t mi = 0; mi < ladder.mags.size(); ++mi) {
        const double mag = ladder.mags[mi];
        double ang = 0.0;
        for (const auto& dir : ladder.dirs) {
            for (size_t a = 0; a < h.size(); ++a) h[a] = mag * dir[a];
            ang += std::pow(std::pow(mag, -alpha) * diff_lp_norm(f, h, n, p), q);
        }
        ang /= double(ladder.dirs.size());
        double wlog = 0.0;
        if (mi > 0) wlog += 0.5 * std::log(ladder.mags[mi] / ladder.mags[mi - 1]);
        if (mi + 1 < ladder.mags.size())
            wlog += 0.5 * std::log(ladder.mags[mi + 1] / ladder.mags[mi]);
        total += wlog * ang;
    }
    return std::pow(total, 1.0 / q);
}

double holder_norm(const GridFunction& f, double alpha, const Ladder& ladder) {
    const int n = int(std::floor(alpha)) + 1;
    return lp_norm(f, kInf) + besov_seminorm(f, alpha, kInf, kInf, n, ladder);
}

KernelBoundSweep kernel_bound_sweep(const std::vector<double>& sigma, double p, int n,
                                    const std::vector<double>& ts,
                                    const std::vector<double>& rhos) {
    if (sigma.empty()) throw ValidationError("kernel sweep needs at least one axis");
    for (double s : sigma)
        if (!(s > 0.0)) throw ValidationError("kernel widths must be positive");
    if (!std::isinf(p) && !(p >= 1.0)) throw ValidationError("norm exponent must be >= 1");
    if (n < 1) throw ValidationError("difference order must be at least 1");
    if (ts.empty() || rhos.empty()) throw ValidationError("kernel sweep grids are empty");
    for (double t : ts)
        if (!(t > 0.0)) throw ValidationError("sweep times must be positive");
    for (double r : rhos)
        if (!(r > 0.0)) throw ValidationError("sweep rho values must be positive");

    const int d = int(sigma.size());
    const double inv_q = std::isinf(p) ? 1.0 : 1.0 - 1.0 / p;
    const double w0 = 0.5 * double(d) * inv_q;

    KernelBoundSweep sweep;
    for (double t : ts) {
        const double rt = std::sqrt(t);
        double cross = 1.0;
        for (int a = 1; a < d; ++a) cross *= gauss_norm(rt * sigma[size_t(a)], p);
        const double s0 = rt * sigma[0];

        sweep.entries[0].push_back({t, 0.0, gauss_norm(s0, p) * cross * std::pow(t, w0)});
        sweep.entries[1].push_back(
            {t, 0.0, gauss_diff_norm(s0, 0.0, 0, true, p) * cross * std::pow(t, w0 + 0.5)});

        for (double rho : rhos) {
            const double h = rho * rt;
            const double damp = std::pow(std::min(1.0, rho), double(n));
            sweep.entries[2].push_back(
                {t, rho,
                 gauss_diff_norm(s0, h, n, false, p) * cross * std::pow(t, w0) / damp});
            sweep.entries[3].push_back(
                {t, rho,
                 gauss_diff_norm(s0, h, n, true, p) * cross * std::pow(t, w0 + 0.5) / damp});
        }
    }

    for (int e = 0; e < 4; ++e) {
        double cmax = 0.0;
        for (const auto& en : sweep.entries[size_t(e)]) cmax = std::max(cmax, en.ratio);
        sweep.cmax[size_t(e)] = cmax;

        double worst = 1.0;
        auto group = [&](double rho) {
            double lo = kInf, hi = 0.0;
            for (const auto& en : sweep.entries[size_t(e)])
                if (en.rho == rho) {
                    lo = std::min(lo, en.ratio);
                    hi = std::max(hi, en.ratio);
                }
            if (lo > 0.0 && hi > 0.0) worst = std::max(worst, hi / lo);
        };
        if (e < 2) {
            group(0.0);
        } else {
            for (double rho : rhos) group(rho);
        }
        sweep.group_spread[size_t(e)] = worst;
    }

    // Exact reference constants, measured with the same quadrature.
    const double t0 = ts.front();
    double l1 = 1.0, li = 1.0;
    for (int a = 0; a < d; ++a) {
        const double s = std::sqrt(t0) * sigma[size_t(a)];
        l1 *= gauss_diff_norm(s, 0.0, 0, false, 1.0);
        li *= gauss_diff_norm(s, 0.0, 0, false, kInf);
    }
    sweep.l1_constant = l1;
    sweep.linf_constant = li * std::pow(t0, 0.5 * double(d));
    return sweep;
}

BootstrapResult bootstrap_exponents(int d, double p, double alpha0) {
    if (d < 1) throw ValidationError("dimension must be positive");
    const double upper = d > 1 ? double(d) / double(d - 1) : kInf;
    if (!(p > 1.0) || !(p < upper))
        throw ValidationError("integrability exponent must lie in (1, d/(d-1))");
    if (!(alpha0 > 0.5 * double(d)))
        throw ValidationError("starting exponent must exceed d/2");

    const double target = 0.5 * double(d);
    BootstrapResult r;
    r.alphas.push_back(alpha0);
    double gap = alpha0 - target;
    while (gap > 0.0) {
        if (r.steps > 1000) throw NumericalError("bootstrap iteration failed to terminate");
        gap = gap / p - 0.5;
        r.alphas.push_back(target + std::max(0.0, gap));
        ++r.steps;
    }
    const double c = p / (2.0 * (p - 1.0));
    const double gap0 = alpha0 - target;
    r.predicted_bound =
        std::max(2, int(std::ceil(std::log(1.0 + gap0 / c) / std::log(p))));
    return r;
}

double time_weighted_linf_sup(const std::vector<double>& times,
                              const std::vector<const GridFunction*>& fs, double w) {
    if (times.size() != fs.size() || times.empty())
        throw ValidationError("schedule and snapshots must pair up");
    double sup = 0.0;
    for (size_t i = 0; i < times.size(); ++i)
        sup = std::max(sup, std::pow(times[i], w) * lp_norm(*fs[i], kInf));
    return sup;
}

double time_weighted_holder_sup(const std::vector<double>& times,
                                const std::vector<const GridFunction*>& fs, double alpha,
                                double w, const Ladder& ladder) {
    if (times.size() != fs.size() || times.empty())
        throw ValidationError("schedule and snapshots must pair up");
    double sup = 0.0;
    for (size_t i = 0; i < times.size(); ++i)
        sup = std::max(sup, std::pow(times[i], w) * holder_norm(*fs[i], alpha, ladder));
    return sup;
}

} // namespace nsfp
