#include "nsfp/noise.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nsfp/errors.hpp"

namespace nsfp {

std::string NoiseSpec::mode_key(Vec3i k, int pol) {
    Vec3i kc = k.canonical();
    std::ostringstream s;
    s << kc.x << ',' << kc.y << ',' << kc.z << ':' << pol;
    return s.str();
}

double NoiseSpec::sigma(Vec3i k, int pol) const {
    if (k.is_zero()) return 0.0;
    auto im = mode_override.find(mode_key(k, pol));
    if (im != mode_override.end()) return im->second;
    auto is = shell_override.find(k.norm2());
    if (is != shell_override.end()) return is->second;
    if (line_support) {
        // k must be an integer multiple of line_dir.
        Vec3i d = line_dir;
        int64_t n = 0;
        if (d.x != 0) n = k.x / d.x;
        else if (d.y != 0) n = k.y / d.y;
        else n = k.z / d.z;
        Vec3i back{n * d.x, n * d.y, n * d.z};
        if (n == 0 || !(back == k)) return 0.0;
    }
    return std::pow(double(k.norm2()), -0.5 * decay);
}

std::vector<Vec3i> NoiseSpec::active_wavevectors(const ModeSet& modes) const {
    std::vector<Vec3i> out;
    for (auto& k : modes.wavevectors())
        if (sigma(k, 1) > 0.0 && sigma(k, 2) > 0.0) out.push_back(k);
    return out;
}

void NoiseSpec::validate() const {
    if (decay < 2.0)
        throw ValidationError("noise decay exponent must be at least 2, got " +
                              std::to_string(decay));
    for (auto& [k2, v] : shell_override)
        if (v < 0.0 || k2 < 1)
            throw ValidationError("bad shell override (|k|^2 >= 1, amplitude >= 0 required)");
    for (auto& [key, v] : mode_override)
        if (v < 0.0)
            throw ValidationError("negative mode amplitude override for " + key);
    if (line_support && line_dir.is_zero())
        throw ValidationError("line support direction must be nonzero");
}

std::vector<double> subspace_covariance(const NoiseSpec& noise, const Subspace& subspace) {
    std::vector<double> var(subspace.axes().size());
    for (size_t i = 0; i < var.size(); ++i) {
        double s = noise.sigma(subspace.axes()[i].k, subspace.axes()[i].pol);
        var[i] = s * s;
    }
    return var;
}

std::string AssumptionReport::summary() const {
    std::ostringstream s;
    s << "diagonal covariance: ok\n";
    s << "forced set generates Z^3: " << (lattice.generates ? "ok" : "FAIL") << "\n";
    if (!lattice.generates) s << "  " << lattice.obstruction << "\n";
    s << "invariant factors: (" << lattice.smith.factors[0] << ", "
      << lattice.smith.factors[1] << ", " << lattice.smith.factors[2] << ")\n";
    s << "observation subspace inside cutoff: " << (subspace_in_cutoff ? "ok" : "FAIL") << "\n";
    s << "projected covariance non-singular: " << (covariance_nonsingular ? "ok" : "FAIL");
    if (covariance_nonsingular) s << " (condition " << condition << ")";
    s << "\n";
    for (auto& f : failures) s << "violated: " << f << "\n";
    return s.str();
}

AssumptionReport check_assumptions(const ModeSet& modes, const NoiseSpec& noise,
                                   const Subspace& subspace) {
    AssumptionReport rep;
    noise.validate();

    rep.lattice = generates_integer_lattice(noise.active_wavevectors(modes));
    if (!rep.lattice.generates)
        rep.failures.push_back(
            "the wavevectors forced in both polarizations do not generate the "
            "integer lattice (" +
            rep.lattice.obstruction + ")");

    rep.subspace_in_cutoff = true;
    for (auto& a : subspace.axes())
        if (modes.index_of(a.k) == ModeSet::npos) rep.subspace_in_cutoff = false;
    if (!rep.subspace_in_cutoff)
        rep.failures.push_back(
            "observation subspace uses modes outside the truncation cutoff");

    rep.subspace_variances = subspace_covariance(noise, subspace);
    double lo = 0.0, hi = 0.0;
    for (size_t i = 0; i < rep.subspace_variances.size(); ++i) {
        double v = rep.subspace_variances[i];
        if (i == 0 || v < lo) lo = v;
        if (i == 0 || v > hi) hi = v;
    }
    rep.covariance_nonsingular = lo > 0.0;
    if (rep.covariance_nonsingular) rep.condition = hi / lo;
    else {
        // Name the first dead axis to make the failure actionable.
        std::string axis;
        for (size_t i = 0; i < rep.subspace_variances.size(); ++i)
            if (rep.subspace_variances[i] <= 0.0) {
                auto& a = subspace.axes()[i];
                std::ostringstream s;
                s << a.k.x << ',' << a.k.y << ',' << a.k.z << ":" << a.pol;
                axis = s.str();
                break;
            }
        rep.failures.push_back(
            "projected noise covariance on the observation subspace is a "
            "singular matrix, the density equation requires a non-singular "
            "covariance (zero amplitude on axis " +
            axis + ")");
    }
    return rep;
}

} // namespace nsfp
