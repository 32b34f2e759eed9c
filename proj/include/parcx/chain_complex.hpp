#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <vector>

#include "parcx/common.hpp"
#include "parcx/fgab.hpp"
#include "parcx/fp_matrix.hpp"
#include "parcx/snf.hpp"

namespace parcx {

/* Bounded chain complex of finitely generated free Z-modules,
 *   C_top -> ... -> C_1 -> C_0 (-> Z if augmented).
 * boundary(q) maps degree q to degree q-1. */
class ChainComplexZ {
  public:
    explicit ChainComplexZ(std::vector<int> dims) : dims_(std::move(dims)) {
        bnd_.resize(dims_.size());
        for (size_t q = 1; q < dims_.size(); ++q) bnd_[q] = SparseZ(dims_[q - 1], dims_[q]);
    }

    int top() const { return static_cast<int>(dims_.size()) - 1; }
    int dim(int q) const {
        return (q >= 0 && q <= top()) ? dims_[static_cast<size_t>(q)] : 0;
    }

    void set_boundary(int q, SparseZ d) {
        check(q >= 1 && q <= top(), "boundary degree out of range");
        check(d.rows() == dim(q - 1) && d.cols() == dim(q), "boundary shape mismatch");
        bnd_[static_cast<size_t>(q)] = std::move(d);
    }

    /* boundary as stored for 1..top; zero map with the right shape otherwise */
    SparseZ boundary(int q) const {
        if (q >= 1 && q <= top()) return bnd_[static_cast<size_t>(q)];
        if (q == 0 && aug_) return *aug_;
        return SparseZ(q == 0 ? 0 : dim(q - 1), dim(q));
    }

    void set_augmentation(SparseZ a) {
        check(a.rows() == 1 && a.cols() == dim(0), "augmentation shape mismatch");
        aug_ = std::move(a);
    }
    /* standard augmentation: every degree-0 generator maps to 1 */
    void set_standard_augmentation() {
        SparseZ a(1, dim(0));
        for (int c = 0; c < dim(0); ++c) a.set(0, c, 1);
        aug_ = std::move(a);
    }
    bool augmented() const { return aug_.has_value(); }

    bool boundary_squares_to_zero() const {
        for (int q = 1; q < top(); ++q)
            if (!(boundary(q) * boundary(q + 1)).is_zero()) return false;
        if (aug_ && top() >= 1)
            if (!((*aug_) * boundary(1)).is_zero()) return false;
        return true;
    }

    /* H_q; with an augmentation, q = -1 is allowed and q = 0 is reduced */
    FGAbGroup homology(int q) const {
        if (q == -1) {
            if (!aug_) return FGAbGroup::zero();
            if (dims_.empty()) return FGAbGroup::free(1);
            return FGAbGroup::from_diag(1, smith_normal_form(*aug_).diag);
        }
        if (q < 0 || q > top()) return FGAbGroup::zero();
        // The cycle lattice is a saturated sublattice containing the image, so
        // the torsion of the quotient is read off the boundary alone.
        int zrank = dim(q) - smith_normal_form(boundary(q)).rank;
        Snf f = smith_normal_form(boundary(q + 1));
        check(f.rank <= zrank, "image rank exceeds cycle rank");
        FGAbGroup g;
        g.free_rank = zrank - f.rank;
        for (const auto& d : f.diag)
            if (d > 1) g.torsion.push_back(d);
        return g;
    }

    std::vector<FGAbGroup> all_homology() const {
        std::vector<FGAbGroup> out;
        for (int q = 0; q <= top(); ++q) out.push_back(homology(q));
        return out;
    }

    bool acyclic_reduced() const {
        check(aug_.has_value(), "reduced acyclicity needs an augmentation");
        if (!homology(-1).is_zero()) return false;
        for (int q = 0; q <= top(); ++q)
            if (!homology(q).is_zero()) return false;
        return true;
    }

    mpz_class euler_characteristic() const {
        mpz_class chi = 0;
        for (int q = 0; q <= top(); ++q) chi += (q % 2 == 0 ? 1 : -1) * mpz_class(dim(q));
        return chi;
    }
    mpz_class reduced_euler_characteristic() const { return euler_characteristic() - 1; }

  private:
    std::vector<int> dims_;
    std::vector<SparseZ> bnd_;
    std::optional<SparseZ> aug_;
};

/* Homology group of one degree together with explicit generating cycles and a
 * coordinate routine for arbitrary cycles in that degree. */
class HomologyClasses {
  public:
    HomologyClasses() = default;

    /* kernel/image data for degree q of the complex */
    HomologyClasses(const ChainComplexZ& c, int q) {
        ambient_ = c.dim(q);
        SparseZ k = kernel_lattice(c.boundary(q));
        kdim_ = k.cols();
        ksolver_ = std::make_shared<ZSolver>(k);
        kernel_ = k;
        // express the boundary image in kernel coordinates
        SparseZ dnext = c.boundary(q + 1);
        SparseZ y(kdim_, dnext.cols());
        for (int j = 0; j < dnext.cols(); ++j) {
            std::vector<mpz_class> col(ambient_);
            for (int r = 0; r < ambient_; ++r) col[r] = dnext.get(r, j);
            auto sol = ksolver_->solve(col);
            check(sol.has_value(), "boundary image must consist of cycles");
            for (int r = 0; r < kdim_; ++r) y.set(r, j, (*sol)[r]);
        }
        Snf f = smith_normal_form(y, {.want_u = true, .want_uinv = true});
        u_ = *f.u;
        SparseZ adapted = k * *f.uinv;  // adapted generating cycles for the kernel
        // keep generators that survive the quotient
        for (int i = 0; i < kdim_; ++i) {
            mpz_class d = i < f.rank ? f.diag[i] : mpz_class(0);
            if (d == 1) continue;  // killed by the image
            kept_.push_back(i);
            orders_.push_back(d);
        }
        gens_ = SparseZ(ambient_, static_cast<int>(kept_.size()));
        for (size_t j = 0; j < kept_.size(); ++j)
            for (int r = 0; r < ambient_; ++r) {
                mpz_class v = adapted.get(r, kept_[j]);
                if (v != 0) gens_.set(r, static_cast<int>(j), v);
            }
        for (const auto& d : orders_)
            if (d > 1) group_.torsion.push_back(d);
        group_.free_rank =
            static_cast<long>(std::count(orders_.begin(), orders_.end(), mpz_class(0)));
    }

    const FGAbGroup& group() const { return group_; }
    int ngens() const { return static_cast<int>(kept_.size()); }
    /* order of generator j: 0 for infinite order */
    const mpz_class& order(int j) const { return orders_[static_cast<size_t>(j)]; }
    /* representing cycle of generator j as an ambient vector */
    std::vector<mpz_class> generator(int j) const {
        std::vector<mpz_class> v(ambient_);
        for (int r = 0; r < ambient_; ++r) v[r] = gens_.get(r, j);
        return v;
    }
    int ambient_dim() const { return ambient_; }

    /* class of a cycle in generator coordinates (torsion coordinates are
     * well-defined modulo the generator order) */
    std::vector<mpz_class> express(const std::vector<mpz_class>& cycle) const {
        check(static_cast<int>(cycle.size()) == ambient_, "cycle dimension mismatch");
        auto y = ksolver_->solve(cycle);
        check(y.has_value(), "vector is not a cycle");
        std::vector<mpz_class> full = u_.apply(*y);
        std::vector<mpz_class> out;
        for (size_t j = 0; j < kept_.size(); ++j) {
            mpz_class v = full[kept_[j]];
            if (orders_[j] > 1) {
                v %= orders_[j];
                if (v < 0) v += orders_[j];
            }
            out.push_back(v);
        }
        return out;
    }

    /* presentation with one generator per class and diagonal relations */
    PresentedAb presentation() const {
        int ntor = 0;
        for (size_t j = 0; j < orders_.size(); ++j)
            if (orders_[j] > 1) ++ntor;
        SparseZ r(ngens(), ntor);
        int col = 0;
        for (size_t j = 0; j < orders_.size(); ++j)
            if (orders_[j] > 1) r.set(static_cast<int>(j), col++, orders_[j]);
        return PresentedAb(ngens(), r);
    }

  private:
    int ambient_ = 0, kdim_ = 0;
    SparseZ kernel_{0, 0}, gens_{0, 0}, u_{0, 0};
    std::shared_ptr<ZSolver> ksolver_;
    std::vector<int> kept_;
    std::vector<mpz_class> orders_;
    FGAbGroup group_;
};

/* matrix of the map induced on homology by a chain map in one degree */
inline SparseZ induced_on_homology(const HomologyClasses& src, const HomologyClasses& dst,
                                   const SparseZ& chain_map) {
    check(chain_map.cols() == src.ambient_dim() && chain_map.rows() == dst.ambient_dim(),
          "chain map shape mismatch");
    SparseZ m(dst.ngens(), src.ngens());
    for (int j = 0; j < src.ngens(); ++j) {
        std::vector<mpz_class> image = chain_map.apply(src.generator(j));
        std::vector<mpz_class> coords = dst.express(image);
        for (int r = 0; r < dst.ngens(); ++r) m.set(r, j, coords[r]);
    }
    return m;
}

/* Bounded chain complex over F_p. Reduced complexes are built structurally
 * (no augmentation slot): drop the relevant generator before construction. */
struct FpChainComplex {
    int p = 2;
    std::vector<int> dims;
    std::vector<FpMat> bnd;  // bnd[q]: C_q -> C_{q-1}, valid for q >= 1

    FpChainComplex() = default;
    FpChainComplex(int prime, std::vector<int> d) : p(prime), dims(std::move(d)) {
        bnd.resize(dims.size());
        for (size_t q = 1; q < dims.size(); ++q)
            bnd[q] = FpMat(p, dims[q - 1], dims[q]);
    }

    int top() const { return static_cast<int>(dims.size()) - 1; }
    int dim(int q) const { return (q >= 0 && q <= top()) ? dims[static_cast<size_t>(q)] : 0; }

    FpMat boundary(int q) const {
        if (q >= 1 && q <= top()) return bnd[static_cast<size_t>(q)];
        return FpMat(p, q <= 0 ? 0 : dim(q - 1), dim(q));
    }

    int betti(int q) const {
        if (q < 0 || q > top()) return 0;
        int zrank = dim(q) - fp_rank(boundary(q));
        int brank = fp_rank(boundary(q + 1));
        return zrank - brank;
    }

    bool boundary_squares_to_zero() const {
        for (int q = 1; q < top(); ++q)
            if (!(boundary(q) * boundary(q + 1)).is_zero()) return false;
        return true;
    }
};

/* Chain contraction of an F_p complex onto its homology:
 *   inc[r]  : H_r -> C_r      (columns are representing cycles)
 *   proj[r] : C_r -> H_r
 *   h[r]    : C_r -> C_{r+1}
 * with proj*inc = id and d h + h d = id - inc*proj, plus the side conditions
 * h*inc = 0, proj*h = 0, h*h = 0. */
struct FpContraction {
    std::vector<int> hdim;
    std::vector<FpMat> inc, proj, h;
};

inline FpContraction contract_fp_complex(const FpChainComplex& c) {
    const int p = c.p;
    const int top = c.top();
    FpContraction out;
    out.hdim.resize(top + 1);
    out.inc.resize(top + 1);
    out.proj.resize(top + 1);
    out.h.resize(top + 1);

    // pivot columns of each boundary map (echelon data reused per degree)
    std::vector<std::vector<int>> pivots(top + 2);
    for (int q = 1; q <= top; ++q) {
        FpMat e = c.boundary(q);
        pivots[q] = detail::fp_echelon(e);
    }
    pivots[top + 1] = {};

    for (int r = 0; r <= top; ++r) {
        const int n = c.dim(r);
        FpMat z = fp_nullspace(c.boundary(r));  // n x zdim; boundary(0) = 0 map
        if (r == 0) z = FpMat::identity(p, n);
        FpMat dn = c.boundary(r + 1);
        FpMat b = dn.select_columns(pivots[r + 1]);  // image basis, n x brank
        // complete b to a basis of the cycle space using z's columns
        FpMat bz = FpMat::hconcat(b, z);
        FpMat ech = bz;
        std::vector<int> piv = detail::fp_echelon(ech);
        std::vector<int> hbar_cols;
        for (int c2 : piv)
            if (c2 >= b.cols()) hbar_cols.push_back(c2 - b.cols());
        FpMat hbar = z.select_columns(hbar_cols);  // homology representatives
        // complement of the cycle space: unit vectors at pivot columns of d_r
        FpMat a(p, n, static_cast<int>(pivots[r].size()));
        for (size_t j = 0; j < pivots[r].size(); ++j) a(pivots[r][j], static_cast<int>(j)) = 1;
        FpMat basis = FpMat::hconcat(FpMat::hconcat(b, hbar), a);
        check(basis.rows() == basis.cols(), "contraction basis is not square");
        FpMat binv = fp_inverse(basis);
        const int nb = b.cols(), nh = hbar.cols();
        out.hdim[r] = nh;
        out.inc[r] = hbar;
        FpMat pr(p, nh, n), brows(p, nb, n);
        for (int i = 0; i < nh; ++i)
            for (int j = 0; j < n; ++j) pr(i, j) = binv(nb + i, j);
        for (int i = 0; i < nb; ++i)
            for (int j = 0; j < n; ++j) brows(i, j) = binv(i, j);
        out.proj[r] = pr;
        // h sends the image basis back up through the pivot columns of d_{r+1}
        FpMat s(p, c.dim(r + 1), nb);
        for (int j = 0; j < nb; ++j) s(pivots[r + 1][static_cast<size_t>(j)], j) = 1;
        out.h[r] = s * brows;
    }
    return out;
}

namespace detail {

/* whether every column of m lies in the integer column span of `span` */
inline bool columns_in_span(const SparseZ& m, const SparseZ& span) {
    check(m.rows() == span.rows(), "columns_in_span: row mismatch");
    bool any = false;
    for (int j = 0; j < m.cols() && !any; ++j)
        for (int r = 0; r < m.rows(); ++r)
            if (m.get(r, j) != 0) {
                any = true;
                break;
            }
    if (!any) return true;
    if (span.cols() == 0) return false;
    ZSolver solver(span);
    for (int j = 0; j < m.cols(); ++j) {
        std::vector<mpz_class> col(static_cast<size_t>(m.rows()));
        for (int r = 0; r < m.rows(); ++r) col[static_cast<size_t>(r)] = m.get(r, j);
        if (!solver.solve(col).has_value()) return false;
    }
    return true;
}

/* whether a - b maps into the relation span of the target presentation */
inline bool congruent_columns(const SparseZ& a, const SparseZ& b, const PresentedAb& target) {
    check(a.rows() == b.rows() && a.cols() == b.cols(), "congruent_columns: shape mismatch");
    check(a.rows() == target.gens, "congruent_columns: target mismatch");
    SparseZ diff = a;
    for (int r = 0; r < b.rows(); ++r)
        for (const auto& [c, v] : b.row(r)) diff.add(r, c, -v);
    return columns_in_span(diff, target.relations);
}

}  // namespace detail

/* Bounded chain complex of finitely presented abelian groups.  Degree q
 * holds group(q); boundary(q) is a generator-level matrix C_q -> C_{q-1}
 * that must carry relations into the relation span, and consecutive
 * boundaries must compose to zero modulo relations. */
class PresentedComplex {
  public:
    PresentedComplex() = default;
    explicit PresentedComplex(std::vector<PresentedAb> groups) : groups_(std::move(groups)) {
        bnd_.resize(groups_.size(), SparseZ(0, 0));
        for (size_t q = 1; q < groups_.size(); ++q)
            bnd_[q] = SparseZ(static_cast<int>(groups_[q - 1].gens),
                              static_cast<int>(groups_[q].gens));
    }

    int top() const { return static_cast<int>(groups_.size()) - 1; }
    long gens(int q) const {
        return (q >= 0 && q <= top()) ? groups_[static_cast<size_t>(q)].gens : 0;
    }
    const PresentedAb& group(int q) const {
        check(q >= 0 && q <= top(), "presented complex degree out of range");
        return groups_[static_cast<size_t>(q)];
    }

    void set_boundary(int q, SparseZ d) {
        check(q >= 1 && q <= top(), "presented complex boundary degree out of range");
        check(d.rows() == gens(q - 1) && d.cols() == gens(q),
              "presented complex boundary shape mismatch");
        bnd_[static_cast<size_t>(q)] = std::move(d);
    }

    SparseZ boundary(int q) const {
        if (q >= 1 && q <= top()) return bnd_[static_cast<size_t>(q)];
        return SparseZ(static_cast<int>(gens(q - 1)), static_cast<int>(gens(q)));
    }

    /* boundaries are maps of presented groups and compose to zero mod relations */
    bool well_formed() const {
        for (int q = 1; q <= top(); ++q) {
            if (!well_defined_map(boundary(q), group(q), group(q - 1))) return false;
            if (q >= 2) {
                SparseZ sq = boundary(q - 1) * boundary(q);
                SparseZ zero(sq.rows(), sq.cols());
                if (!detail::congruent_columns(sq, zero, group(q - 2))) return false;
            }
        }
        return true;
    }

    FGAbGroup homology(int q) const;

  private:
    std::vector<PresentedAb> groups_;
    std::vector<SparseZ> bnd_;
};

/* Homology of one degree of a presented complex, with generating relative
 * cycles and a coordinate routine; mirrors HomologyClasses with the group
 * relations folded into both the cycle condition and the killed subgroup. */
class PresentedHomology {
  public:
    PresentedHomology() = default;

    PresentedHomology(const PresentedComplex& c, int q) {
        ambient_ = static_cast<int>(c.gens(q));
        if (q < 0 || q > c.top() || ambient_ == 0) {
            lat_ = SparseZ(ambient_, 0);
            ldim_ = 0;
            lsolver_ = std::make_shared<ZSolver>(lat_);
            return;
        }
        // relative cycles: preimage of the target relation span
        lat_ = (q == 0) ? SparseZ::identity(ambient_)
                        : preimage_of_relations(c.boundary(q), c.group(q - 1));
        ldim_ = lat_.cols();
        lsolver_ = std::make_shared<ZSolver>(lat_);
        // kill boundaries from above and the degree's own relations
        SparseZ kill = SparseZ::hconcat(c.boundary(q + 1), c.group(q).relations);
        SparseZ y(ldim_, kill.cols());
        for (int j = 0; j < kill.cols(); ++j) {
            std::vector<mpz_class> col(static_cast<size_t>(ambient_));
            for (int r = 0; r < ambient_; ++r) col[static_cast<size_t>(r)] = kill.get(r, j);
            auto sol = lsolver_->solve(col);
            check(sol.has_value(), "killed vectors must be relative cycles");
            for (int r = 0; r < ldim_; ++r) y.set(r, j, (*sol)[static_cast<size_t>(r)]);
        }
        Snf f = smith_normal_form(y, {.want_u = true, .want_uinv = true});
        u_ = *f.u;
        SparseZ adapted = lat_ * *f.uinv;
        for (int i = 0; i < ldim_; ++i) {
            mpz_class d = i < f.rank ? f.diag[static_cast<size_t>(i)] : mpz_class(0);
            if (d == 1) continue;
            kept_.push_back(i);
            orders_.push_back(d);
        }
        gens_ = SparseZ(ambient_, static_cast<int>(kept_.size()));
        for (size_t j = 0; j < kept_.size(); ++j)
            for (int r = 0; r < ambient_; ++r) {
                mpz_class v = adapted.get(r, kept_[j]);
                if (v != 0) gens_.set(r, static_cast<int>(j), v);
            }
        for (const auto& d : orders_)
            if (d > 1) group_.torsion.push_back(d);
        group_.free_rank =
            static_cast<long>(std::count(orders_.begin(), orders_.end(), mpz_class(0)));
    }

    const FGAbGroup& group() const { return group_; }
    int ngens() const { return static_cast<int>(kept_.size()); }
    const mpz_class& order(int j) const { return orders_[static_cast<size_t>(j)]; }
    int ambient_dim() const { return ambient_; }

    std::vector<mpz_class> generator(int j) const {
        std::vector<mpz_class> v(static_cast<size_t>(ambient_));
        for (int r = 0; r < ambient_; ++r) v[static_cast<size_t>(r)] = gens_.get(r, j);
        return v;
    }

    /* class of a relative cycle in generator coordinates */
    std::vector<mpz_class> express(const std::vector<mpz_class>& cycle) const {
        check(static_cast<int>(cycle.size()) == ambient_, "cycle dimension mismatch");
        auto y = lsolver_->solve(cycle);
        check(y.has_value(), "vector is not a relative cycle");
        std::vector<mpz_class> full = u_.apply(*y);
        std::vector<mpz_class> out;
        for (size_t j = 0; j < kept_.size(); ++j) {
            mpz_class v = full[static_cast<size_t>(kept_[j])];
            if (orders_[j] > 1) {
                v %= orders_[j];
                if (v < 0) v += orders_[j];
            }
            out.push_back(v);
        }
        return out;
    }

    /* presentation with one generator per class and diagonal relations */
    PresentedAb presentation() const {
        int ntor = 0;
        for (size_t j = 0; j < orders_.size(); ++j)
            if (orders_[j] > 1) ++ntor;
        SparseZ r(ngens(), ntor);
        int col = 0;
        for (size_t j = 0; j < orders_.size(); ++j)
            if (orders_[j] > 1) r.set(static_cast<int>(j), col++, orders_[j]);
        return PresentedAb(ngens(), r);
    }

  private:
    int ambient_ = 0, ldim_ = 0;
    SparseZ lat_{0, 0}, gens_{0, 0}, u_{0, 0};
    std::shared_ptr<ZSolver> lsolver_;
    std::vector<int> kept_;
    std::vector<mpz_class> orders_;
    FGAbGroup group_;
};

inline FGAbGroup PresentedComplex::homology(int q) const {
    return PresentedHomology(*this, q).group();
}

/* matrix of the map induced on homology by a degreewise map of presented
 * complexes (generator-level matrix in one degree) */
inline SparseZ induced_on_presented(const PresentedHomology& src, const PresentedHomology& dst,
                                    const SparseZ& chain_map) {
    check(chain_map.cols() == src.ambient_dim() && chain_map.rows() == dst.ambient_dim(),
          "chain map shape mismatch");
    SparseZ m(dst.ngens(), src.ngens());
    for (int j = 0; j < src.ngens(); ++j) {
        std::vector<mpz_class> image = chain_map.apply(src.generator(j));
        std::vector<mpz_class> coords = dst.express(image);
        for (int r = 0; r < dst.ngens(); ++r) m.set(r, j, coords[r]);
    }
    return m;
}

/* exhaustive identity check, used by the test suite */
inline bool contraction_valid(const FpChainComplex& c, const FpContraction& k) {
    const int p = c.p;
    for (int r = 0; r <= c.top(); ++r) {
        const FpMat& i = k.inc[r];
        const FpMat& pr = k.proj[r];
        FpMat id_h = FpMat::identity(p, k.hdim[r]);
        if (!(pr * i == id_h)) return false;
        FpMat lhs = c.boundary(r + 1) * k.h[r];
        if (r >= 1) lhs = lhs + k.h[r - 1] * c.boundary(r);
        FpMat rhs = FpMat::identity(p, c.dim(r)) - i * pr;
        if (!(lhs == rhs)) return false;
        if (!(k.h[r] * i).is_zero()) return false;
        if (r + 1 <= c.top() && !(k.proj[r + 1] * k.h[r]).is_zero()) return false;
        if (r + 1 <= c.top() && !(k.h[r + 1] * k.h[r]).is_zero()) return false;
        if (r >= 1 && !(c.boundary(r) * i).is_zero()) return false;
    }
    return true;
}

}  // namespace parcx
