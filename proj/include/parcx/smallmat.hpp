#pragma once

#include <gmpxx.h>

#include <vector>

#include "parcx/common.hpp"

namespace parcx {

/* Small dense matrices over Z with exact (GMP) arithmetic, used where
 * intermediate values can exceed 64 bits (determinants, lattice kernels
 * of matrices of size at most a few dozen). */
class ZMat {
  public:
    ZMat() : rows_(0), cols_(0) {}
    ZMat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

    static ZMat identity(int n) {
        ZMat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    mpz_class& operator()(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
    const mpz_class& operator()(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }

    ZMat transposed() const {
        ZMat t(cols_, rows_);
        for (int r = 0; r < rows_; ++r)
            for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    ZMat operator*(const ZMat& rhs) const {
        check(cols_ == rhs.rows_, "ZMat product shape mismatch");
        ZMat out(rows_, rhs.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const mpz_class& v = (*this)(i, k);
                if (v == 0) continue;
                for (int j = 0; j < rhs.cols_; ++j) out(i, j) += v * rhs(k, j);
            }
        return out;
    }

    bool operator==(const ZMat& rhs) const {
        return rows_ == rhs.rows_ && cols_ == rhs.cols_ && a_ == rhs.a_;
    }

  private:
    int rows_, cols_;
    std::vector<mpz_class> a_;
};

/* Determinant by fraction-free (Bareiss) elimination. */
inline mpz_class det(ZMat m) {
    check(m.rows() == m.cols(), "det needs a square matrix");
    int n = m.rows();
    if (n == 0) return 1;
    mpz_class prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m(k, k) == 0) {
            int piv = -1;
            for (int r = k + 1; r < n; ++r)
                if (m(r, k) != 0) {
                    piv = r;
                    break;
                }
            if (piv < 0) return 0;
            for (int c = k; c < n; ++c) swap(m(k, c), m(piv, c));
            sign = -sign;
        }
        for (int r = k + 1; r < n; ++r) {
            for (int c = k + 1; c < n; ++c) {
                m(r, c) = (m(k, k) * m(r, c) - m(r, k) * m(k, c)) / prev;
            }
            m(r, k) = 0;
        }
        prev = m(k, k);
    }
    return sign > 0 ? m(n - 1, n - 1) : -m(n - 1, n - 1);
}

inline int det_sign(const ZMat& m) {
    mpz_class d = det(m);
    return d == 0 ? 0 : (d > 0 ? 1 : -1);
}

/* Columns of `m` restricted to a maximal linearly independent subset
 * (over Q), chosen greedily from the left. */
inline ZMat column_space_basis(const ZMat& m) {
    std::vector<int> picked;
    ZMat work(m.rows(), 0);
    // Gaussian elimination over Q, fraction-free on a growing basis.
    std::vector<std::vector<mpq_class>> rowsq;
    for (int c = 0; c < m.cols(); ++c) {
        std::vector<mpq_class> v(m.rows());
        for (int r = 0; r < m.rows(); ++r) v[r] = mpq_class(m(r, c));
        // reduce against accepted echelon rows
        for (auto& e : rowsq) {
            int lead = -1;
            for (int r = 0; r < m.rows(); ++r)
                if (e[r] != 0) {
                    lead = r;
                    break;
                }
            if (lead >= 0 && v[lead] != 0) {
                mpq_class f = v[lead] / e[lead];
                for (int r = 0; r < m.rows(); ++r) v[r] -= f * e[r];
            }
        }
        bool nonzero = false;
        for (int r = 0; r < m.rows(); ++r)
            if (v[r] != 0) {
                nonzero = true;
                break;
            }
        if (nonzero) {
            rowsq.push_back(v);
            picked.push_back(c);
        }
    }
    ZMat out(m.rows(), static_cast<int>(picked.size()));
    for (size_t j = 0; j < picked.size(); ++j)
        for (int r = 0; r < m.rows(); ++r) out(r, static_cast<int>(j)) = m(r, picked[j]);
    return out;
}

}  // namespace parcx
