#include "nsfp/fokker_planck.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nsfp/errors.hpp"

namespace nsfp {

namespace {

/// Gaussian taps at lattice offsets, normalized to sum exactly 1 so the
/// smoothing conserves mass away from the box edges.
std::vector<double> smooth_taps(double s, double dx) {
    const int R = std::max(1, int(std::ceil(6.0 * s / dx)));
    std::vector<double> taps(size_t(2 * R + 1));
    double sum = 0.0;
    for (int j = -R; j <= R; ++j) {
        double u = double(j) * dx / s;
        taps[size_t(R + j)] = std::exp(-0.5 * u * u);
        sum += taps[size_t(R + j)];
    }
    for (double& t : taps) t /= sum;
    return taps;
}

/// Taps of d_a P applied in the convention out[i] = sum_j taps[R+j] f[i+j]:
/// the tap at offset j carries the kernel value at -j dx, so for the odd
/// derivative d_x phi(x) = -x/s^2 phi(x) the entry is +(j dx)/s^2 phi(j dx).
std::vector<double> deriv_taps(double s, double dx) {
    std::vector<double> taps = smooth_taps(s, dx);
    const int R = int(taps.size() / 2);
    for (int j = -R; j <= R; ++j) taps[size_t(R + j)] *= double(j) * dx / (s * s);
    return taps;
}

size_t nearest_schedule_entry(const std::vector<double>& times, double t) {
    size_t best = 0;
    for (size_t i = 1; i < times.size(); ++i)
        if (std::abs(times[i] - t) < std::abs(times[best] - t)) best = i;
    return best;
}

} // namespace

double kernel_eval(const std::vector<double>& x, const std::vector<double>& center,
                   const std::vector<double>& std_dev) {
    if (x.size() != center.size() || x.size() != std_dev.size())
        throw ValidationError("kernel argument dimensions differ");
    double v = 1.0;
    for (size_t a = 0; a < x.size(); ++a) {
        if (!(std_dev[a] > 0.0)) throw ValidationError("kernel needs positive widths");
        double u = (x[a] - center[a]) / std_dev[a];
        v *= std::exp(-0.5 * u * u) / (std::sqrt(2.0 * std::numbers::pi) * std_dev[a]);
    }
    return v;
}

GridFunction kernel_on_grid(const GridSpec& grid, const std::vector<double>& center,
                            const std::vector<double>& std_dev) {
    GridFunction f(grid);
    for (size_t i = 0; i < f.values.size(); ++i)
        f.values[i] = kernel_eval(grid.point(i), center, std_dev);
    return f;
}

FpKernels make_fp_kernels(const GridSpec& grid, const std::vector<double>& diffusion_sigma,
                          double dt, double min_kernel_cells) {
    if (int(diffusion_sigma.size()) != grid.dim())
        throw ValidationError("diffusion width list must match the grid dimension");
    if (!(dt > 0.0)) throw ValidationError("step size must be positive");
    FpKernels k;
    for (int a = 0; a < grid.dim(); ++a) {
        const double sig = diffusion_sigma[size_t(a)];
        if (!(sig > 0.0)) throw ValidationError("diffusion widths must be positive");
        const double dx = grid.axis(a).dx();
        const double s_half = sig * std::sqrt(0.5 * dt);
        if (s_half < min_kernel_cells * dx)
            throw ValidationError(
                "half-step kernel too narrow for the grid on axis " + std::to_string(a) +
                ": sigma sqrt(dt/2) = " + std::to_string(s_half) + " but dx = " +
                std::to_string(dx) + "; increase the step size or refine the grid");
        k.full.push_back(smooth_taps(sig * std::sqrt(dt), dx));
        k.half.push_back(smooth_taps(s_half, dx));
        k.deriv.push_back(deriv_taps(s_half, dx));
    }
    return k;
}

void duhamel_step(GridFunction& f, const FpKernels& kernels, const DriftField& G, double dt) {
    const int d = f.spec.dim();
    if (int(G.g.size()) != d || !(G.effective.spec == f.spec))
        throw ValidationError("drift field does not match the solution grid");

    GridFunction next = f;
    for (int a = 0; a < d; ++a) convolve_axis(next, a, kernels.full[size_t(a)]);

    for (int a = 0; a < d; ++a) {
        GridFunction term = f;
        for (size_t i = 0; i < term.values.size(); ++i)
            term.values[i] *= G.g[size_t(a)].values[i];
        for (int c = 0; c < d; ++c)
            convolve_axis(term, c, c == a ? kernels.deriv[size_t(c)] : kernels.half[size_t(c)]);
        for (size_t i = 0; i < next.values.size(); ++i)
            next.values[i] += dt * term.values[i];
    }
    f = std::move(next);
}

FpResult solve_fp(const GridSpec& grid, const std::vector<double>& diffusion_sigma,
                  const std::vector<double>& x0, const std::vector<double>& drift_times,
                  const std::vector<const DriftField*>& drifts,
                  const std::vector<double>& output_times, const FpOptions& opt) {
    if (int(x0.size()) != grid.dim()) throw ValidationError("start point dimension mismatch");
    if (!grid.contains(x0)) throw ValidationError("start point outside the grid");
    if (drift_times.empty() || drift_times.size() != drifts.size())
        throw ValidationError("drift schedule is empty or mismatched");
    for (const DriftField* gp : drifts)
        if (!gp || int(gp->g.size()) != grid.dim() || !(gp->effective.spec == grid))
            throw ValidationError("drift schedule entry does not live on the grid");
    if (output_times.empty()) throw ValidationError("no output times requested");

    FpKernels kernels = make_fp_kernels(grid, diffusion_sigma, opt.dt, opt.min_kernel_cells);

    std::vector<int64_t> out_steps;
    for (double t : output_times) {
        int64_t j = std::llround(t / opt.dt);
        if (j < 1)
            throw ValidationError("output times must be at least one step after the start");
        out_steps.push_back(j);
    }
    std::sort(out_steps.begin(), out_steps.end());
    out_steps.erase(std::unique(out_steps.begin(), out_steps.end()), out_steps.end());
    const int64_t total = out_steps.back();

    FpResult res;

    // Exact first step for frozen drift: the point mass spreads to the heat
    // kernel, displaced by the drift of its center.
    const DriftField& g0 = *drifts[nearest_schedule_entry(drift_times, 0.5 * opt.dt)];
    std::vector<double> center(x0.size());
    std::vector<double> sd(x0.size());
    for (int a = 0; a < grid.dim(); ++a) {
        double ga = interpolate(g0.g[size_t(a)], x0);
        center[size_t(a)] = x0[size_t(a)] - opt.dt * ga;
        sd[size_t(a)] = diffusion_sigma[size_t(a)] * std::sqrt(opt.dt);
    }
    if (!grid.contains(center))
        throw ValidationError("drift carries the start point off the grid in one step");
    GridFunction f = kernel_on_grid(grid, center, sd);

    auto record = [&](int64_t step) {
        res.times.push_back(double(step) * opt.dt);
        res.f.push_back(f);
        res.mass.push_back(integrate(f));
    };
    auto check_negative = [&](int64_t step) {
        double lo = 0.0, hi = 0.0;
        for (double v : f.values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (lo < -opt.negative_tolerance * hi)
            throw NumericalError("density undershoot " + std::to_string(lo) +
                                 " at step " + std::to_string(step) +
                                 " exceeds the negativity tolerance");
    };

    size_t next_out = 0;
    check_negative(1);
    while (next_out < out_steps.size() && out_steps[next_out] == 1) {
        record(1);
        ++next_out;
    }
    for (int64_t s = 1; s < total; ++s) {
        const double t_mid = (double(s) + 0.5) * opt.dt;
        const DriftField& g = *drifts[nearest_schedule_entry(drift_times, t_mid)];
        duhamel_step(f, kernels, g, opt.dt);
        check_negative(s + 1);
        while (next_out < out_steps.size() && out_steps[next_out] == s + 1) {
            record(s + 1);
            ++next_out;
        }
    }

    if (!res.mass.empty() && (res.mass.back() < 0.98 || res.mass.back() > 1.02))
        res.warnings.push_back("box mass drifted to " + std::to_string(res.mass.back()) +
                               "; the grid may be too small for the horizon");
    return res;
}

double stationary_residual(const GridFunction& f, const DriftField& G,
                           const std::vector<double>& diffusion_sigma) {
    const GridSpec& grid = f.spec;
    const int d = grid.dim();
    if (int(diffusion_sigma.size()) != d || int(G.g.size()) != d ||
        !(G.effective.spec == grid))
        throw ValidationError("residual arguments do not share the grid");

    std::vector<int> idx;
    double sum = 0.0;
    for (size_t i = 0; i < f.values.size(); ++i) {
        grid.unflatten(i, idx);
        bool interior = true;
        for (int a = 0; a < d; ++a)
            if (idx[size_t(a)] == 0 || idx[size_t(a)] == grid.axis(a).n - 1) interior = false;
        if (!interior) continue;

        double r = 0.0;
        for (int a = 0; a < d; ++a) {
            const size_t st = grid.strides()[size_t(a)];
            const double dx = grid.axis(a).dx();
            const double sig = diffusion_sigma[size_t(a)];
            const double fp = f.values[i + st], fm = f.values[i - st], f0 = f.values[i];
            r += 0.5 * sig * sig * (fp - 2.0 * f0 + fm) / (dx * dx);
            const double gp = G.g[size_t(a)].values[i + st] * fp;
            const double gm = G.g[size_t(a)].values[i - st] * fm;
            r += (gp - gm) / (2.0 * dx);
        }
        sum += std::abs(r);
    }
    return sum * grid.cell_volume();
}

} // namespace nsfp
