#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "parcx/common.hpp"
#include "parcx/smallmat.hpp"

namespace parcx {

using SparseVec = std::map<int, mpz_class>;

/* Sparse integer matrix, row-major. */
class SparseZ {
  public:
    SparseZ() : rows_(0), cols_(0) {}
    SparseZ(int rows, int cols) : rows_(rows), cols_(cols), row_(rows) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const SparseVec& row(int r) const { return row_[r]; }

    void set(int r, int c, const mpz_class& v) {
        if (v == 0)
            row_[r].erase(c);
        else
            row_[r][c] = v;
    }
    void add(int r, int c, const mpz_class& v) {
        if (v == 0) return;
        auto it = row_[r].find(c);
        if (it == row_[r].end()) {
            row_[r].emplace(c, v);
        } else {
            it->second += v;
            if (it->second == 0) row_[r].erase(it);
        }
    }
    mpz_class get(int r, int c) const {
        auto it = row_[r].find(c);
        return it == row_[r].end() ? mpz_class(0) : it->second;
    }

    long nnz() const {
        long n = 0;
        for (const auto& r : row_) n += static_cast<long>(r.size());
        return n;
    }

    static SparseZ identity(int n) {
        SparseZ m(n, n);
        for (int i = 0; i < n; ++i) m.set(i, i, 1);
        return m;
    }

    static SparseZ from_dense(const ZMat& d) {
        SparseZ m(d.rows(), d.cols());
        for (int r = 0; r < d.rows(); ++r)
            for (int c = 0; c < d.cols(); ++c)
                if (d(r, c) != 0) m.set(r, c, d(r, c));
        return m;
    }

    ZMat to_dense() const {
        ZMat d(rows_, cols_);
        for (int r = 0; r < rows_; ++r)
            for (const auto& [c, v] : row_[r]) d(r, c) = v;
        return d;
    }

    SparseZ transposed() const {
        SparseZ t(cols_, rows_);
        for (int r = 0; r < rows_; ++r)
            for (const auto& [c, v] : row_[r]) t.set(c, r, v);
        return t;
    }

    std::vector<mpz_class> apply(const std::vector<mpz_class>& x) const {
        check(static_cast<int>(x.size()) == cols_, "apply: size mismatch");
        std::vector<mpz_class> y(rows_);
        for (int r = 0; r < rows_; ++r)
            for (const auto& [c, v] : row_[r]) y[r] += v * x[c];
        return y;
    }

    SparseZ operator*(const SparseZ& rhs) const {
        check(cols_ == rhs.rows_, "sparse product shape mismatch");
        SparseZ out(rows_, rhs.cols_);
        for (int r = 0; r < rows_; ++r)
            for (const auto& [k, v] : row_[r])
                for (const auto& [c, w] : rhs.row_[k]) out.add(r, c, v * w);
        return out;
    }

    SparseZ operator-(const SparseZ& rhs) const {
        check(rows_ == rhs.rows_ && cols_ == rhs.cols_, "sparse difference shape mismatch");
        SparseZ out = *this;
        for (int r = 0; r < rows_; ++r)
            for (const auto& [c, v] : rhs.row_[r]) out.add(r, c, -v);
        return out;
    }

    bool is_zero() const {
        for (const auto& r : row_)
            if (!r.empty()) return false;
        return true;
    }

    /* columns picked out as a new matrix */
    SparseZ select_columns(const std::vector<int>& cols) const {
        std::map<int, int> pos;
        for (size_t i = 0; i < cols.size(); ++i) pos[cols[i]] = static_cast<int>(i);
        SparseZ out(rows_, static_cast<int>(cols.size()));
        for (int r = 0; r < rows_; ++r)
            for (const auto& [c, v] : row_[r]) {
                auto it = pos.find(c);
                if (it != pos.end()) out.set(r, it->second, v);
            }
        return out;
    }

    /* horizontal concatenation */
    static SparseZ hconcat(const SparseZ& a, const SparseZ& b) {
        check(a.rows() == b.rows(), "hconcat: row mismatch");
        SparseZ out(a.rows(), a.cols() + b.cols());
        for (int r = 0; r < a.rows(); ++r) {
            for (const auto& [c, v] : a.row(r)) out.set(r, c, v);
            for (const auto& [c, v] : b.row(r)) out.set(r, a.cols() + c, v);
        }
        return out;
    }

  private:
    int rows_, cols_;
    std::vector<SparseVec> row_;
};

struct SnfOptions {
    bool want_u = false;     // invariant: current = U * original * V
    bool want_uinv = false;
    bool want_v = false;
    bool want_vinv = false;
};

struct Snf {
    std::vector<mpz_class> diag;  // invariant factors (positive, divisibility chain), length = rank
    int rank = 0;
    std::optional<SparseZ> u, uinv, v, vinv;
};

/* Smith normal form by local pivoting: smallest entry, ties broken by least
 * fill (Markowitz count), so unit entries are consumed before coefficient
 * growth can start. */
inline Snf smith_normal_form(const SparseZ& input, SnfOptions opt = {}) {
    int nrows = input.rows(), ncols = input.cols();
    std::vector<SparseVec> row(nrows);
    for (int r = 0; r < nrows; ++r) row[r] = input.row(r);
    std::vector<std::set<int>> colsup(ncols);
    for (int r = 0; r < nrows; ++r)
        for (const auto& [c, v] : row[r]) colsup[c].insert(r);

    SparseZ U, Uinv, V, Vinv;
    if (opt.want_u) U = SparseZ::identity(nrows);
    if (opt.want_uinv) Uinv = SparseZ::identity(nrows);
    if (opt.want_v) V = SparseZ::identity(ncols);
    if (opt.want_vinv) Vinv = SparseZ::identity(ncols);
    // V and Vinv are stored column-major conceptually; we keep them as SparseZ
    // and apply column operations through a transposed representation.
    std::vector<SparseVec> vcol, vinvrow, ucol;  // vcol[j] = column j of V (row-index -> value)
    if (opt.want_v) {
        vcol.assign(ncols, {});
        for (int j = 0; j < ncols; ++j) vcol[j][j] = 1;
    }
    if (opt.want_vinv) {
        vinvrow.assign(ncols, {});
        for (int j = 0; j < ncols; ++j) vinvrow[j][j] = 1;
    }
    std::vector<SparseVec> urow, uinvcol;
    if (opt.want_u) {
        urow.assign(nrows, {});
        for (int i = 0; i < nrows; ++i) urow[i][i] = 1;
    }
    if (opt.want_uinv) {
        uinvcol.assign(nrows, {});
        for (int i = 0; i < nrows; ++i) uinvcol[i][i] = 1;
    }

    auto sv_axpy = [](SparseVec& dst, const mpz_class& q, const SparseVec& src) {
        // dst -= q * src
        if (q == 0) return;
        for (const auto& [k, v] : src) {
            auto it = dst.find(k);
            if (it == dst.end()) {
                dst.emplace(k, -q * v);
            } else {
                it->second -= q * v;
                if (it->second == 0) dst.erase(it);
            }
        }
    };

    auto row_entry = [&](int r, int c) -> mpz_class {
        auto it = row[r].find(c);
        return it == row[r].end() ? mpz_class(0) : it->second;
    };

    // row_i -= q * row_t (matrix); U: same; Uinv: col_t += q * col_i
    auto row_op = [&](int i, int t, const mpz_class& q) {
        if (q == 0) return;
        for (const auto& [c, v] : row[t]) {
            auto it = row[i].find(c);
            if (it == row[i].end()) {
                row[i].emplace(c, -q * v);
                colsup[c].insert(i);
            } else {
                it->second -= q * v;
                if (it->second == 0) {
                    row[i].erase(it);
                    colsup[c].erase(i);
                }
            }
        }
        if (opt.want_u) sv_axpy(urow[i], q, urow[t]);
        if (opt.want_uinv) {
            // col_t += q * col_i
            for (const auto& [k, v] : uinvcol[i]) {
                auto it = uinvcol[t].find(k);
                if (it == uinvcol[t].end()) {
                    uinvcol[t].emplace(k, q * v);
                } else {
                    it->second += q * v;
                    if (it->second == 0) uinvcol[t].erase(it);
                }
            }
        }
    };

    // col_j -= q * col_t; V: same column op; Vinv: row_t += q * row_j
    auto col_op = [&](int j, int t, const mpz_class& q) {
        if (q == 0) return;
        std::vector<int> affected(colsup[t].begin(), colsup[t].end());
        for (int r : affected) {
            mpz_class delta = -q * row[r].at(t);
            auto it = row[r].find(j);
            if (it == row[r].end()) {
                row[r].emplace(j, delta);
                colsup[j].insert(r);
            } else {
                it->second += delta;
                if (it->second == 0) {
                    row[r].erase(it);
                    colsup[j].erase(r);
                }
            }
        }
        if (opt.want_v) sv_axpy(vcol[j], q, vcol[t]);
        if (opt.want_vinv) {
            for (const auto& [k, v] : vinvrow[j]) {
                auto it = vinvrow[t].find(k);
                if (it == vinvrow[t].end()) {
                    vinvrow[t].emplace(k, q * v);
                } else {
                    it->second += q * v;
                    if (it->second == 0) vinvrow[t].erase(it);
                }
            }
        }
    };

    auto row_swap = [&](int i, int t) {
        if (i == t) return;
        for (const auto& [c, v] : row[i]) colsup[c].erase(i);
        for (const auto& [c, v] : row[t]) colsup[c].erase(t);
        std::swap(row[i], row[t]);
        for (const auto& [c, v] : row[i]) colsup[c].insert(i);
        for (const auto& [c, v] : row[t]) colsup[c].insert(t);
        if (opt.want_u) std::swap(urow[i], urow[t]);
        if (opt.want_uinv) std::swap(uinvcol[i], uinvcol[t]);
    };

    auto col_swap = [&](int j, int t) {
        if (j == t) return;
        std::set<int> both;
        for (int r : colsup[j]) both.insert(r);
        for (int r : colsup[t]) both.insert(r);
        for (int r : both) {
            auto a = row[r].find(j), b = row[r].find(t);
            mpz_class va = a == row[r].end() ? 0 : a->second;
            mpz_class vb = b == row[r].end() ? 0 : b->second;
            if (a != row[r].end()) row[r].erase(a);
            if ((b = row[r].find(t)) != row[r].end()) row[r].erase(b);
            if (vb != 0) row[r][j] = vb;
            if (va != 0) row[r][t] = va;
        }
        std::swap(colsup[j], colsup[t]);
        if (opt.want_v) std::swap(vcol[j], vcol[t]);
        if (opt.want_vinv) std::swap(vinvrow[j], vinvrow[t]);
    };

    auto negate_row = [&](int i) {
        for (auto& [c, v] : row[i]) v = -v;
        if (opt.want_u)
            for (auto& [c, v] : urow[i]) v = -v;
        if (opt.want_uinv)
            for (auto& [c, v] : uinvcol[i]) v = -v;
    };

    int t = 0;
    int bound = std::min(nrows, ncols);
    while (t < bound) {
        // pivot search in the active submatrix
        int pr = -1, pc = -1;
        mpz_class pval;
        long pscore = 0;
        for (int r = t; r < nrows; ++r) {
            for (const auto& [c, v] : row[r]) {
                if (c < t) continue;
                mpz_class a = abs(v);
                long score = (static_cast<long>(row[r].size()) - 1) *
                             (static_cast<long>(colsup[c].size()) - 1);
                if (pr < 0 || a < pval || (a == pval && score < pscore)) {
                    pr = r;
                    pc = c;
                    pval = a;
                    pscore = score;
                    if (pval == 1 && pscore == 0) break;
                }
            }
            if (pr >= 0 && pval == 1 && pscore == 0) break;
        }
        if (pr < 0) break;  // active submatrix is zero
        row_swap(pr, t);
        col_swap(pc, t);

        for (;;) {
            // clear column t by rounded division
            bool again = false;
            std::vector<int> rows_in_col(colsup[t].begin(), colsup[t].end());
            const mpz_class piv = row_entry(t, t);
            for (int r : rows_in_col) {
                if (r == t) continue;
                mpz_class q, rem;
                mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), row[r].at(t).get_mpz_t(),
                            piv.get_mpz_t());
                if (2 * rem > abs(piv)) q += (piv > 0 ? 1 : -1);
                row_op(r, t, q);
            }
            // clear row t
            std::vector<std::pair<int, mpz_class>> entries(row[t].begin(), row[t].end());
            for (const auto& [c, v] : entries) {
                if (c == t) continue;
                mpz_class q, rem;
                mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), v.get_mpz_t(), piv.get_mpz_t());
                if (2 * rem > abs(piv)) q += (piv > 0 ? 1 : -1);
                col_op(c, t, q);
            }
            // anything left in column or row means a smaller pivot emerged
            for (int r : colsup[t])
                if (r != t) {
                    again = true;
                    break;
                }
            if (!again && row[t].size() > 1) again = true;
            if (!again) break;
            // move the smallest remaining entry in row/col t to the pivot seat
            int br = t, bc = t;
            mpz_class best = abs(row_entry(t, t));
            for (int r : colsup[t])
                if (r != t && (best == 0 || abs(row[r].at(t)) < best)) {
                    best = abs(row[r].at(t));
                    br = r;
                    bc = t;
                }
            for (const auto& [c, v] : row[t])
                if (c != t && (best == 0 || abs(v) < best)) {
                    best = abs(v);
                    br = t;
                    bc = c;
                }
            row_swap(br, t);
            col_swap(bc, t);
        }
        if (row_entry(t, t) < 0) negate_row(t);
        ++t;
    }
    int rank = t;

    // enforce the divisibility chain
    for (int i = 0; i < rank; ++i) {
        for (int j = i + 1; j < rank; ++j) {
            mpz_class di = row_entry(i, i), dj = row_entry(j, j);
            if (dj % di == 0) continue;
            // col_i += col_j introduces d_j at (j,i); redo Euclid at seat i
            col_op(i, j, -1);
            for (;;) {
                mpz_class a = row_entry(i, i);
                std::vector<int> rows_in_col(colsup[i].begin(), colsup[i].end());
                bool clean = true;
                for (int r : rows_in_col) {
                    if (r == i) continue;
                    mpz_class q, rem;
                    mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), row[r].at(i).get_mpz_t(),
                                a.get_mpz_t());
                    if (2 * rem > abs(a)) q += (a > 0 ? 1 : -1);
                    row_op(r, i, q);
                }
                for (int r : colsup[i])
                    if (r != i) clean = false;
                std::vector<std::pair<int, mpz_class>> entries(row[i].begin(), row[i].end());
                for (const auto& [c, v] : entries) {
                    if (c == i) continue;
                    mpz_class q, rem;
                    mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), v.get_mpz_t(), a.get_mpz_t());
                    if (2 * rem > abs(a)) q += (a > 0 ? 1 : -1);
                    col_op(c, i, q);
                }
                if (row[i].size() > 1) clean = false;
                if (clean) break;
                int br = i, bc = i;
                mpz_class best = abs(row_entry(i, i));
                for (int r : colsup[i])
                    if (r != i && (best == 0 || abs(row[r].at(i)) < best)) {
                        best = abs(row[r].at(i));
                        br = r;
                        bc = i;
                    }
                for (const auto& [c, v] : row[i])
                    if (c != i && (best == 0 || abs(v) < best)) {
                        best = abs(v);
                        br = i;
                        bc = c;
                    }
                row_swap(br, i);
                col_swap(bc, i);
            }
            if (row_entry(i, i) < 0) negate_row(i);
        }
    }
    for (int i = 0; i < rank; ++i)
        if (row_entry(i, i) < 0) negate_row(i);

    Snf out;
    out.rank = rank;
    for (int i = 0; i < rank; ++i) out.diag.push_back(row_entry(i, i));
    auto pack_rows = [&](std::vector<SparseVec>& rows_vec, int n, int m) {
        SparseZ s(n, m);
        for (int r = 0; r < n; ++r)
            for (const auto& [c, v] : rows_vec[r]) s.set(r, c, v);
        return s;
    };
    if (opt.want_u) out.u = pack_rows(urow, nrows, nrows);
    if (opt.want_uinv) {
        SparseZ s(nrows, nrows);
        for (int c = 0; c < nrows; ++c)
            for (const auto& [r, v] : uinvcol[c]) s.set(r, c, v);
        out.uinv = s;
    }
    if (opt.want_v) {
        SparseZ s(ncols, ncols);
        for (int c = 0; c < ncols; ++c)
            for (const auto& [r, v] : vcol[c]) s.set(r, c, v);
        out.v = s;
    }
    if (opt.want_vinv) out.vinv = pack_rows(vinvrow, ncols, ncols);
    return out;
}

inline int rank_z(const SparseZ& a) { return smith_normal_form(a).rank; }

/* Integer kernel lattice basis (cols x k), columns form a basis. */
inline SparseZ kernel_lattice(const SparseZ& a) {
    Snf f = smith_normal_form(a, {.want_v = true});
    std::vector<int> free_cols;
    for (int j = f.rank; j < a.cols(); ++j) free_cols.push_back(j);
    return f.v->select_columns(free_cols);
}

/* Exact linear solver A x = b reusing one factorization. */
class ZSolver {
  public:
    explicit ZSolver(const SparseZ& a)
        : rows_(a.rows()), cols_(a.cols()),
          f_(smith_normal_form(a, {.want_u = true, .want_v = true})) {}

    int rank() const { return f_.rank; }

    /* least solution in V-coordinates; nullopt if unsolvable over Z */
    std::optional<std::vector<mpz_class>> solve(const std::vector<mpz_class>& b) const {
        std::vector<mpz_class> ub = f_.u->apply(b);
        std::vector<mpz_class> y(cols_);
        for (int i = 0; i < rows_; ++i) {
            if (i < f_.rank) {
                if (ub[i] % f_.diag[i] != 0) return std::nullopt;
                if (i < cols_) y[i] = ub[i] / f_.diag[i];
            } else if (ub[i] != 0) {
                return std::nullopt;
            }
        }
        return f_.v->apply(y);
    }

  private:
    int rows_, cols_;
    Snf f_;
};

}  // namespace parcx
