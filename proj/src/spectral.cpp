#include "nsfp/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "nsfp/errors.hpp"
#include <json.hpp>

namespace nsfp {

namespace {

// Dense packing of small integer vectors for the lookup table.
int64_t pack_key(Vec3i k) {
    auto enc = [](int64_t v) { return uint64_t(v + (1 << 20)) & 0x1FFFFF; };
    return int64_t(enc(k.x) | (enc(k.y) << 21) | (enc(k.z) << 42));
}

Vec3d sign_canonical(Vec3d v) {
    double lead = 0.0;
    if (std::abs(v.x) > 1e-14) lead = v.x;
    else if (std::abs(v.y) > 1e-14) lead = v.y;
    else lead = v.z;
    return lead < 0 ? -1.0 * v : v;
}

} // namespace

Frame polarization_frame(Vec3i k) {
    if (k.is_zero()) throw ValidationError("polarization frame requested for k = 0");
    Vec3i kc = k.canonical();
    Vec3d kd = to_vec3d(kc);

    // Axis least aligned with kc; ties go to the higher index.
    const Vec3d axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    int best = 0;
    double best_val = std::abs(kd.dot(axes[0]));
    for (int i = 1; i < 3; ++i) {
        double v = std::abs(kd.dot(axes[i]));
        if (v <= best_val) {
            best_val = v;
            best = i;
        }
    }

    Vec3d x1 = sign_canonical(kd.cross(axes[best]));
    x1 = (1.0 / x1.norm()) * x1;
    Vec3d x2 = (1.0 / kd.norm()) * kd.cross(x1);
    return {x1, x2};
}

ModeSet::ModeSet(int cutoff) : cutoff_(cutoff) {
    if (cutoff < 1)
        throw ValidationError("mode set cutoff must be a positive integer, got " +
                              std::to_string(cutoff));
    int64_t n2max = int64_t(cutoff) * cutoff;
    for (int64_t x = -cutoff; x <= cutoff; ++x)
        for (int64_t y = -cutoff; y <= cutoff; ++y)
            for (int64_t z = -cutoff; z <= cutoff; ++z) {
                Vec3i k{x, y, z};
                if (k.is_zero() || k.norm2() > n2max) continue;
                waves_.push_back(k);
            }
    std::sort(waves_.begin(), waves_.end());

    frames_.reserve(waves_.size());
    for (auto& k : waves_) frames_.push_back(polarization_frame(k));

    lookup_.reserve(2 * waves_.size());
    for (size_t i = 0; i < waves_.size(); ++i) lookup_[pack_key(waves_[i])] = i;

    conj_.resize(waves_.size());
    for (size_t i = 0; i < waves_.size(); ++i) {
        conj_[i] = lookup_.at(pack_key(-waves_[i]));
        if (waves_[i].is_canonical()) canon_.push_back(i);
    }
}

size_t ModeSet::index_of(Vec3i k) const {
    auto it = lookup_.find(pack_key(k));
    return it == lookup_.end() ? npos : it->second;
}

ModeSet build_mode_set(int cutoff) { return ModeSet(cutoff); }

void SpectralField::set_pair(size_t w, int pol, Cplx v) {
    set_coeff(w, pol, v);
    set_coeff(modes_->conjugate_index(w), pol, std::conj(v));
}

CVec3 SpectralField::vector_coeff(size_t w) const {
    const Frame& f = modes_->frame(w);
    Cplx c1 = coeff(w, 1), c2 = coeff(w, 2);
    return {c1 * f.x1.x + c2 * f.x2.x, c1 * f.x1.y + c2 * f.x2.y,
            c1 * f.x1.z + c2 * f.x2.z};
}

double SpectralField::norm_h_sq() const {
    double s = 0.0;
    for (const Cplx& c : c_) s += std::norm(c);
    return s;
}

double SpectralField::norm_v_sq() const {
    double s = 0.0;
    for (size_t i = 0; i < c_.size(); ++i)
        s += double(modes_->norm2(i / 2)) * std::norm(c_[i]);
    return s;
}

double SpectralField::reality_defect() const {
    double worst = 0.0;
    for (size_t w = 0; w < modes_->wavevector_count(); ++w) {
        size_t cw = modes_->conjugate_index(w);
        for (int pol = 1; pol <= 2; ++pol)
            worst = std::max(worst, std::abs(coeff(cw, pol) - std::conj(coeff(w, pol))));
    }
    return worst;
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    if (!compatible(o)) throw ValidationError("field addition across different mode sets");
    for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (auto& v : c_) v *= s;
    return *this;
}

SpectralField apply_stokes(const SpectralField& u) {
    SpectralField r = u;
    const ModeSet& m = u.modes();
    for (size_t w = 0; w < m.wavevector_count(); ++w)
        for (int pol = 1; pol <= 2; ++pol)
            r.set_coeff(w, pol, double(m.norm2(w)) * u.coeff(w, pol));
    return r;
}

std::string field_to_json(const SpectralField& u) {
    nlohmann::json j;
    j["cutoff"] = u.modes().cutoff();
    auto& arr = j["modes"] = nlohmann::json::array();
    const ModeSet& m = u.modes();
    for (size_t w = 0; w < m.wavevector_count(); ++w) {
        Vec3i k = m.wavevectors()[w];
        for (int pol = 1; pol <= 2; ++pol) {
            Cplx c = u.coeff(w, pol);
            arr.push_back({{"k", {k.x, k.y, k.z}},
                           {"pol", pol},
                           {"re", c.real()},
                           {"im", c.imag()}});
        }
    }
    return j.dump(2);
}

SpectralField field_from_json(const std::string& text, const ModeSet& modes) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw ValidationError(std::string("field JSON parse failure: ") + e.what());
    }
    if (!j.contains("cutoff") || !j.contains("modes"))
        throw ValidationError("field JSON must contain 'cutoff' and 'modes'");
    if (j["cutoff"].get<int>() != modes.cutoff())
        throw ValidationError("field JSON cutoff does not match the target mode set");
    SpectralField u(modes);
    for (auto& e : j["modes"]) {
        auto karr = e.at("k");
        Vec3i k{karr.at(0).get<int64_t>(), karr.at(1).get<int64_t>(), karr.at(2).get<int64_t>()};
        size_t w = modes.index_of(k);
        if (w == ModeSet::npos)
            throw ValidationError("field JSON contains a wavevector outside the mode set");
        int pol = e.at("pol").get<int>();
        if (pol != 1 && pol != 2)
            throw ValidationError("field JSON polarization index must be 1 or 2");
        u.set_coeff(w, pol, Cplx(e.at("re").get<double>(), e.at("im").get<double>()));
    }
    return u;
}

} // namespace nsfp
