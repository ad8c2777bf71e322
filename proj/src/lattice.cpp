#include "nsfp/lattice.hpp"

#include <algorithm>
#include <cstdlib>

#include "nsfp/errors.hpp"

namespace nsfp {

namespace {

int64_t checked_mul(int64_t a, int64_t b) {
    int64_t r;
    if (__builtin_mul_overflow(a, b, &r))
        throw NumericalError("integer overflow in lattice reduction");
    return r;
}

int64_t checked_sub(int64_t a, int64_t b) {
    int64_t r;
    if (__builtin_sub_overflow(a, b, &r))
        throw NumericalError("integer overflow in lattice reduction");
    return r;
}

// Working matrix with 3 rows and m columns, plus the inverse of the
// accumulated row transform.  With U W0 V = D, the columns of W0 V equal
// U^-1 D, so d_i * col_i(U^-1) lies in the column span of W0 over Z.
struct Work {
    std::vector<std::array<int64_t, 3>> col; // column-major
    std::array<std::array<int64_t, 3>, 3> uinv = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};

    size_t cols() const { return col.size(); }
    int64_t& at(int r, size_t c) { return col[c][r]; }

    // Row op r_i -= q * r_j is U' = E U with E = I - q e_i e_j^T, hence
    // U'^-1 = U^-1 (I + q e_i e_j^T): column j of uinv gains q * column i.
    void row_axpy(int i, int64_t q, int j) {
        for (size_t c = 0; c < cols(); ++c)
            at(i, c) = checked_sub(at(i, c), checked_mul(q, at(j, c)));
        for (int r = 0; r < 3; ++r)
            uinv[r][j] = checked_sub(uinv[r][j], checked_mul(-q, uinv[r][i]));
    }
    void row_swap(int i, int j) {
        for (size_t c = 0; c < cols(); ++c) std::swap(at(i, c), at(j, c));
        for (int r = 0; r < 3; ++r) std::swap(uinv[r][i], uinv[r][j]);
    }
    void row_negate(int i) {
        for (size_t c = 0; c < cols(); ++c) at(i, c) = -at(i, c);
        for (int r = 0; r < 3; ++r) uinv[r][i] = -uinv[r][i];
    }
    void col_axpy(size_t i, int64_t q, size_t j) {
        for (int r = 0; r < 3; ++r)
            col[i][r] = checked_sub(col[i][r], checked_mul(q, col[j][r]));
    }
    void col_swap(size_t i, size_t j) { std::swap(col[i], col[j]); }
    void col_negate(size_t i) {
        for (int r = 0; r < 3; ++r) col[i][r] = -col[i][r];
    }
};

SmithResult reduce(Work& w) {
    SmithResult res;
    size_t m = w.cols();
    if (m == 0) return res;

    int t = 0;
    while (t < 3 && size_t(t) < m) {
        // Entry of smallest nonzero magnitude in the trailing block.
        int pr = -1;
        size_t pc = 0;
        int64_t best = 0;
        for (int r = t; r < 3; ++r)
            for (size_t c = t; c < m; ++c) {
                int64_t v = std::abs(w.at(r, c));
                if (v != 0 && (pr < 0 || v < best)) {
                    best = v;
                    pr = r;
                    pc = c;
                }
            }
        if (pr < 0) break;

        w.row_swap(t, pr);
        w.col_swap(t, pc);
        if (w.at(t, t) < 0) w.row_negate(t);

        bool dirty = true;
        while (dirty) {
            dirty = false;
            for (int r = t + 1; r < 3; ++r) {
                if (w.at(r, t) == 0) continue;
                int64_t q = w.at(r, t) / w.at(t, t);
                w.row_axpy(r, q, t);
                if (w.at(r, t) != 0) { // remainder is a smaller pivot
                    w.row_swap(t, r);
                    if (w.at(t, t) < 0) w.row_negate(t);
                    dirty = true;
                }
            }
            for (size_t c = t + 1; c < m; ++c) {
                if (w.at(t, c) == 0) continue;
                int64_t q = w.at(t, c) / w.at(t, t);
                w.col_axpy(c, q, t);
                if (w.at(t, c) != 0) {
                    w.col_swap(t, c);
                    if (w.at(t, t) < 0) w.col_negate(t);
                    dirty = true;
                }
            }
        }

        // Divisibility fix-up: fold any offending column into the pivot
        // column and redo the pivot, guaranteeing d1 | d2 | d3.
        bool redo = false;
        for (int r = t + 1; r < 3 && !redo; ++r)
            for (size_t c = t + 1; c < m && !redo; ++c)
                if (w.at(r, c) % w.at(t, t) != 0) {
                    w.col_axpy(t, -1, c);
                    redo = true;
                }
        if (!redo) ++t;
    }

    for (int i = 0; i < 3; ++i) {
        int64_t d = (size_t(i) < m) ? std::abs(w.at(i, i)) : 0;
        res.factors[i] = d;
        if (d != 0) ++res.rank;
    }
    return res;
}

} // namespace

SmithResult smith_normal_form(const std::vector<Vec3i>& generators) {
    Work w;
    for (auto& g : generators) w.col.push_back({g.x, g.y, g.z});
    return reduce(w);
}

LatticeGenReport generates_integer_lattice(const std::vector<Vec3i>& generators) {
    Work w;
    for (auto& g : generators) w.col.push_back({g.x, g.y, g.z});

    LatticeGenReport rep;
    rep.smith = reduce(w);
    rep.generates = rep.smith.rank == 3 && rep.smith.factors[0] == 1 &&
                    rep.smith.factors[1] == 1 && rep.smith.factors[2] == 1;

    for (int i = 0; i < rep.smith.rank; ++i) {
        int64_t d = rep.smith.factors[i];
        rep.witness.push_back(Vec3i{d * w.uinv[0][i], d * w.uinv[1][i], d * w.uinv[2][i]});
    }

    if (!rep.generates) {
        if (rep.smith.rank < 3)
            rep.obstruction = "generators span a rank-" + std::to_string(rep.smith.rank) +
                              " sublattice, not all of Z^3";
        else {
            int64_t bad = rep.smith.factors[0] != 1   ? rep.smith.factors[0]
                          : rep.smith.factors[1] != 1 ? rep.smith.factors[1]
                                                      : rep.smith.factors[2];
            rep.obstruction = "generated sublattice has index > 1 (invariant factor " +
                              std::to_string(bad) + ")";
        }
    }
    return rep;
}

} // namespace nsfp
