#pragma once

#include <cstdint>
#include <vector>

#include "parcx/common.hpp"
#include "parcx/snf.hpp"

namespace parcx {

/* Dense matrix over the prime field F_p, entries stored as canonical
 * representatives in [0, p). */
class FpMat {
  public:
    FpMat() : p_(2), rows_(0), cols_(0) {}
    FpMat(int p, int rows, int cols)
        : p_(p), rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0) {
        require(p >= 2, "modulus must be at least 2");
    }

    static FpMat identity(int p, int n) {
        FpMat m(p, n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static FpMat from_sparse(const SparseZ& s, int p) {
        FpMat m(p, s.rows(), s.cols());
        for (int r = 0; r < s.rows(); ++r)
            for (const auto& [c, v] : s.row(r)) {
                mpz_class red = v % p;
                if (red < 0) red += p;
                m(r, c) = static_cast<int32_t>(red.get_si());
            }
        return m;
    }

    SparseZ to_sparse() const {
        SparseZ s(rows_, cols_);
        for (int r = 0; r < rows_; ++r)
            for (int c = 0; c < cols_; ++c)
                if ((*this)(r, c) != 0) s.set(r, c, (*this)(r, c));
        return s;
    }

    int p() const { return p_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }

    int32_t& operator()(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
    int32_t operator()(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }

    bool operator==(const FpMat& o) const {
        return p_ == o.p_ && rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

    bool is_zero() const {
        for (int32_t v : a_)
            if (v != 0) return false;
        return true;
    }

    FpMat operator*(const FpMat& rhs) const {
        check(cols_ == rhs.rows_ && p_ == rhs.p_, "product shape/modulus mismatch");
        FpMat out(p_, rows_, rhs.cols_);
        for (int i = 0; i < rows_; ++i) {
            for (int k = 0; k < cols_; ++k) {
                int64_t v = (*this)(i, k);
                if (v == 0) continue;
                const size_t rrow = static_cast<size_t>(k) * rhs.cols_;
                const size_t orow = static_cast<size_t>(i) * rhs.cols_;
                for (int j = 0; j < rhs.cols_; ++j)
                    out.a_[orow + j] =
                        static_cast<int32_t>((out.a_[orow + j] + v * rhs.a_[rrow + j]) % p_);
            }
        }
        return out;
    }

    FpMat operator+(const FpMat& rhs) const {
        check(rows_ == rhs.rows_ && cols_ == rhs.cols_ && p_ == rhs.p_, "sum shape mismatch");
        FpMat out(p_, rows_, cols_);
        for (size_t i = 0; i < a_.size(); ++i)
            out.a_[i] = static_cast<int32_t>((a_[i] + rhs.a_[i]) % p_);
        return out;
    }

    FpMat operator-(const FpMat& rhs) const {
        check(rows_ == rhs.rows_ && cols_ == rhs.cols_ && p_ == rhs.p_,
              "difference shape mismatch");
        FpMat out(p_, rows_, cols_);
        for (size_t i = 0; i < a_.size(); ++i)
            out.a_[i] = static_cast<int32_t>(((a_[i] - rhs.a_[i]) % p_ + p_) % p_);
        return out;
    }

    FpMat scaled(int32_t s) const {
        int64_t t = ((s % p_) + p_) % p_;
        FpMat out(p_, rows_, cols_);
        for (size_t i = 0; i < a_.size(); ++i) out.a_[i] = static_cast<int32_t>((a_[i] * t) % p_);
        return out;
    }

    FpMat transposed() const {
        FpMat out(p_, cols_, rows_);
        for (int r = 0; r < rows_; ++r)
            for (int c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
        return out;
    }

    FpMat select_columns(const std::vector<int>& cols) const {
        FpMat out(p_, rows_, static_cast<int>(cols.size()));
        for (int r = 0; r < rows_; ++r)
            for (size_t j = 0; j < cols.size(); ++j) out(r, static_cast<int>(j)) = (*this)(r, cols[j]);
        return out;
    }

    static FpMat hconcat(const FpMat& a, const FpMat& b) {
        check(a.rows_ == b.rows_ && a.p_ == b.p_, "hconcat mismatch");
        FpMat out(a.p_, a.rows_, a.cols_ + b.cols_);
        for (int r = 0; r < a.rows_; ++r) {
            for (int c = 0; c < a.cols_; ++c) out(r, c) = a(r, c);
            for (int c = 0; c < b.cols_; ++c) out(r, a.cols_ + c) = b(r, c);
        }
        return out;
    }

  private:
    int p_, rows_, cols_;
    std::vector<int32_t> a_;
};

inline int32_t fp_inv_scalar(int32_t a, int p) {
    // extended Euclid
    int64_t t = 0, newt = 1, r = p, newr = ((a % p) + p) % p;
    while (newr != 0) {
        int64_t q = r / newr;
        int64_t tmp = t - q * newt;
        t = newt;
        newt = tmp;
        tmp = r - q * newr;
        r = newr;
        newr = tmp;
    }
    check(r == 1, "scalar not invertible mod p");
    return static_cast<int32_t>(((t % p) + p) % p);
}

namespace detail {
/* in-place row echelon; returns pivot columns */
inline std::vector<int> fp_echelon(FpMat& m) {
    const int p = m.p();
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
        int sel = -1;
        for (int i = r; i < m.rows(); ++i)
            if (m(i, c) != 0) {
                sel = i;
                break;
            }
        if (sel < 0) continue;
        if (sel != r)
            for (int j = 0; j < m.cols(); ++j) std::swap(m(sel, j), m(r, j));
        int64_t inv = fp_inv_scalar(m(r, c), p);
        for (int j = c; j < m.cols(); ++j)
            m(r, j) = static_cast<int32_t>((m(r, j) * inv) % p);
        for (int i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, c) == 0) continue;
            int64_t f = m(i, c);
            for (int j = c; j < m.cols(); ++j)
                m(i, j) = static_cast<int32_t>(((m(i, j) - f * m(r, j)) % p + p) % p);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}
}  // namespace detail

inline int fp_rank(FpMat m) { return static_cast<int>(detail::fp_echelon(m).size()); }

/* columns form a basis of the right nullspace */
inline FpMat fp_nullspace(FpMat m) {
    const int p = m.p();
    const int n = m.cols();
    std::vector<int> pivots = detail::fp_echelon(m);
    std::vector<bool> is_pivot(n, false);
    for (int c : pivots) is_pivot[c] = true;
    std::vector<int> free_cols;
    for (int c = 0; c < n; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);
    FpMat out(p, n, static_cast<int>(free_cols.size()));
    for (size_t j = 0; j < free_cols.size(); ++j) {
        int fc = free_cols[j];
        out(fc, static_cast<int>(j)) = 1;
        for (size_t i = 0; i < pivots.size(); ++i) {
            int32_t v = m(static_cast<int>(i), fc);
            if (v != 0) out(pivots[i], static_cast<int>(j)) = static_cast<int32_t>(p - v);
        }
    }
    return out;
}

/* solve A X = B for all columns at once; nullopt if inconsistent */
inline std::optional<FpMat> fp_solve(const FpMat& a, const FpMat& b) {
    FpMat aug = FpMat::hconcat(a, b);
    std::vector<int> piv = detail::fp_echelon(aug);
    FpMat x(a.p(), a.cols(), b.cols());
    for (size_t i = 0; i < piv.size(); ++i) {
        if (piv[i] >= a.cols()) return std::nullopt;
        for (int j = 0; j < b.cols(); ++j) x(piv[i], j) = aug(static_cast<int>(i), a.cols() + j);
    }
    return x;
}

inline FpMat fp_inverse(const FpMat& m) {
    check(m.rows() == m.cols(), "inverse of non-square matrix");
    auto x = fp_solve(m, FpMat::identity(m.p(), m.rows()));
    check(x.has_value() && fp_rank(m) == m.rows(), "matrix not invertible");
    return *x;
}

}  // namespace parcx
