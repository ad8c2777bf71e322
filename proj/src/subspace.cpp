#include "nsfp/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nsfp/errors.hpp"

namespace nsfp {

namespace {
constexpr double kSqrt2 = 1.4142135623730950488;
}

Subspace::Subspace(std::vector<SubspaceAxis> axes) : axes_(std::move(axes)) {
    if (axes_.empty()) throw ValidationError("observation subspace must contain at least one axis");
    for (auto& a : axes_) {
        if (a.k.is_zero()) throw ValidationError("subspace axis with k = 0");
        if (!a.k.is_canonical())
            throw ValidationError("subspace axes must use the sign-canonical wavevector");
        if (a.pol != 1 && a.pol != 2)
            throw ValidationError("subspace axis polarization must be 1 or 2");
    }
    for (size_t i = 0; i < axes_.size(); ++i)
        for (size_t j = i + 1; j < axes_.size(); ++j)
            if (axes_[i] == axes_[j]) throw ValidationError("duplicate subspace axis");
}

std::vector<double> Subspace::project(const SpectralField& u) const {
    const ModeSet& m = u.modes();
    std::vector<double> q(axes_.size());
    for (size_t i = 0; i < axes_.size(); ++i) {
        size_t w = m.index_of(axes_[i].k);
        if (w == ModeSet::npos)
            throw ValidationError("subspace axis outside the field's mode set");
        Cplx c = u.coeff(w, axes_[i].pol);
        q[i] = kSqrt2 * (axes_[i].part == AxisPart::cos_part ? c.real() : c.imag());
    }
    return q;
}

void Subspace::embed(SpectralField& field, const std::vector<double>& coords) const {
    if (coords.size() != axes_.size())
        throw ValidationError("coordinate count does not match subspace dimension");
    const ModeSet& m = field.modes();
    for (size_t i = 0; i < axes_.size(); ++i) {
        size_t w = m.index_of(axes_[i].k);
        if (w == ModeSet::npos)
            throw ValidationError("subspace axis outside the field's mode set");
        Cplx c = field.coeff(w, axes_[i].pol);
        if (axes_[i].part == AxisPart::cos_part)
            c = Cplx(coords[i] / kSqrt2, c.imag());
        else
            c = Cplx(c.real(), coords[i] / kSqrt2);
        field.set_pair(w, axes_[i].pol, c);
    }
}

void Subspace::remove_component(SpectralField& field) const {
    embed(field, std::vector<double>(axes_.size(), 0.0));
}

std::vector<double> Subspace::stokes_eigenvalues() const {
    std::vector<double> eig(axes_.size());
    for (size_t i = 0; i < axes_.size(); ++i) eig[i] = double(axes_[i].k.norm2());
    return eig;
}

int Subspace::max_norm2() const {
    int64_t best = 0;
    for (auto& a : axes_) best = std::max(best, a.k.norm2());
    return int(best);
}

Subspace Subspace::parse(const std::string& text) {
    std::vector<SubspaceAxis> axes;
    std::stringstream groups(text);
    std::string group;
    while (std::getline(groups, group, ';')) {
        // Trim whitespace.
        auto l = group.find_first_not_of(" \t");
        auto r = group.find_last_not_of(" \t");
        if (l == std::string::npos) continue;
        group = group.substr(l, r - l + 1);

        std::stringstream parts(group);
        std::string kpart, polpart, partpart;
        if (!std::getline(parts, kpart, ':') || !std::getline(parts, polpart, ':'))
            throw ValidationError("subspace axis '" + group +
                                  "' must look like k1,k2,k3:pol[:both|cos|sin]");
        std::getline(parts, partpart, ':');
        if (partpart.empty()) partpart = "both";

        Vec3i k;
        char c1, c2;
        std::stringstream ks(kpart);
        if (!(ks >> k.x >> c1 >> k.y >> c2 >> k.z) || c1 != ',' || c2 != ',')
            throw ValidationError("bad wavevector '" + kpart + "' in subspace axis");
        int pol = 0;
        try {
            pol = std::stoi(polpart);
        } catch (...) {
            throw ValidationError("bad polarization '" + polpart + "' in subspace axis");
        }
        Vec3i kc = k.canonical();
        if (partpart == "both") {
            axes.push_back({kc, pol, AxisPart::cos_part});
            axes.push_back({kc, pol, AxisPart::sin_part});
        } else if (partpart == "cos") {
            axes.push_back({kc, pol, AxisPart::cos_part});
        } else if (partpart == "sin") {
            axes.push_back({kc, pol, AxisPart::sin_part});
        } else {
            throw ValidationError("subspace axis part must be both, cos or sin, got '" +
                                  partpart + "'");
        }
    }
    return Subspace(std::move(axes));
}

std::string Subspace::format() const {
    // Re-group cos/sin pairs into "both" where possible, preserving order.
    std::ostringstream out;
    bool first = true;
    for (size_t i = 0; i < axes_.size();) {
        const auto& a = axes_[i];
        bool pair = i + 1 < axes_.size() && axes_[i + 1].k == a.k &&
                    axes_[i + 1].pol == a.pol && a.part == AxisPart::cos_part &&
                    axes_[i + 1].part == AxisPart::sin_part;
        if (!first) out << "; ";
        first = false;
        out << a.k.x << ',' << a.k.y << ',' << a.k.z << ':' << a.pol << ':';
        if (pair) {
            out << "both";
            i += 2;
        } else {
            out << (a.part == AxisPart::cos_part ? "cos" : "sin");
            i += 1;
        }
    }
    return out.str();
}

} // namespace nsfp
