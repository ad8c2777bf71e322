#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace nsfp {

using Cplx = std::complex<double>;

/// Integer wavevector on the three-dimensional lattice.
struct Vec3i {
    int64_t x = 0, y = 0, z = 0;

    friend Vec3i operator+(Vec3i a, Vec3i b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3i operator-(Vec3i a, Vec3i b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    Vec3i operator-() const { return {-x, -y, -z}; }
    friend bool operator==(const Vec3i& a, const Vec3i& b) = default;

    int64_t norm2() const { return x * x + y * y + z * z; }
    bool is_zero() const { return x == 0 && y == 0 && z == 0; }

    /// True when the first nonzero component is positive; exactly one of
    /// {k, -k} is canonical for k != 0.
    bool is_canonical() const {
        if (x != 0) return x > 0;
        if (y != 0) return y > 0;
        return z > 0;
    }
    Vec3i canonical() const { return is_canonical() ? *this : -*this; }

    /// Lexicographic order on (|k|^2, x, y, z).
    friend bool operator<(const Vec3i& a, const Vec3i& b) {
        if (a.norm2() != b.norm2()) return a.norm2() < b.norm2();
        if (a.x != b.x) return a.x < b.x;
        if (a.y != b.y) return a.y < b.y;
        return a.z < b.z;
    }
};

struct Vec3d {
    double x = 0, y = 0, z = 0;

    friend Vec3d operator+(Vec3d a, Vec3d b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3d operator-(Vec3d a, Vec3d b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3d operator*(double s, Vec3d a) { return {s * a.x, s * a.y, s * a.z}; }

    double dot(Vec3d o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }
    Vec3d cross(Vec3d o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
};

inline Vec3d to_vec3d(Vec3i k) {
    return {double(k.x), double(k.y), double(k.z)};
}

/// Complex 3-vector, used for the vector Fourier coefficient of a field.
using CVec3 = std::array<Cplx, 3>;

inline CVec3 cvec3_zero() { return {Cplx(0), Cplx(0), Cplx(0)}; }

/// Deterministic pairwise (tree) summation.  The reduction order depends only
/// on the element count, so repeated runs produce bit-identical sums.
inline double pairwise_sum(const double* v, size_t n) {
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = v[0];
        for (size_t i = 1; i < n; ++i) s += v[i];
        return s;
    }
    size_t half = n / 2;
    return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

inline double pairwise_sum(const std::vector<double>& v) {
    return pairwise_sum(v.data(), v.size());
}

/// Two-pass sample mean and unbiased variance with deterministic reductions.
struct MeanVar {
    double mean = 0.0;
    double var = 0.0;
};

inline MeanVar mean_var(const std::vector<double>& v) {
    MeanVar r;
    if (v.empty()) return r;
    r.mean = pairwise_sum(v) / double(v.size());
    if (v.size() < 2) return r;
    std::vector<double> sq(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
        double d = v[i] - r.mean;
        sq[i] = d * d;
    }
    r.var = pairwise_sum(sq) / double(v.size() - 1);
    return r;
}

} // namespace nsfp
