#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "parcx/chain_complex.hpp"
#include "parcx/common.hpp"
#include "parcx/fgab.hpp"
#include "parcx/fp_matrix.hpp"
#include "parcx/gcomplex.hpp"
#include "parcx/perm_group.hpp"
#include "parcx/snf.hpp"

namespace parcx {

/* elementary abelian p-group of rank k, as an abstract abelian group */
inline FGAbGroup fp_vector_group(int p, long k) {
    FGAbGroup g;
    for (long i = 0; i < k; ++i) g.torsion.push_back(p);
    return g;
}

namespace detail {

inline SparseZ sparse_mod(const SparseZ& m, int p) {
    SparseZ out(m.rows(), m.cols());
    for (int r = 0; r < m.rows(); ++r)
        for (const auto& [c, v] : m.row(r)) {
            mpz_class w = v % p;
            if (w < 0) w += p;
            if (w != 0) out.set(r, c, w);
        }
    return out;
}

inline bool sparse_equal(const SparseZ& a, const SparseZ& b, int characteristic) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    SparseZ d = a - b;
    if (characteristic > 0) d = sparse_mod(d, characteristic);
    return d.is_zero();
}

/* column views of a sparse matrix (SparseZ is stored row-major) */
inline std::vector<std::vector<std::pair<int, mpz_class>>> columns_of(const SparseZ& m) {
    std::vector<std::vector<std::pair<int, mpz_class>>> cols(m.cols());
    for (int r = 0; r < m.rows(); ++r)
        for (const auto& [c, v] : m.row(r)) cols[c].emplace_back(r, v);
    return cols;
}

}  // namespace detail

/* ------------------------------------------------------------------------
 * Modules over group rings
 * --------------------------------------------------------------------- */

/* A finitely generated module over Z[H] (characteristic 0, homological
 * output reported after localization at report_prime) or over F_p[H]
 * (characteristic p, matrices read modulo p).  One invertible action matrix
 * is stored per group element, acting on column vectors from the left.
 * Right-module structures are never stored; wherever a right action is
 * needed it is obtained through the antiautomorphism g -> g^{-1} at the
 * point of use. */
class GroupRingModule {
  public:
    GroupRingModule(PermGroup h, int characteristic, int report_prime,
                    std::vector<SparseZ> element_matrices)
        : group_(std::move(h)), char_(characteristic), rp_(report_prime) {
        require(char_ == 0 || char_ >= 2, "characteristic must be 0 or a prime");
        require(rp_ >= 2, "report prime must be at least 2");
        require(char_ == 0 || char_ == rp_,
                "a mod-p module reports at its own characteristic");
        require(static_cast<long>(element_matrices.size()) == group_.order(),
                "need one action matrix per group element");
        rank_ = element_matrices.empty() ? 0 : element_matrices[0].rows();
        act_.reserve(element_matrices.size());
        for (auto& m : element_matrices) {
            require(m.rows() == rank_ && m.cols() == rank_,
                    "action matrices must be square of the module rank");
            act_.push_back(char_ > 0 ? detail::sparse_mod(m, char_) : std::move(m));
        }
        check(coherent(), "action matrices do not define a module over the group ring");
    }

    /* Build the whole action from matrices for the generators (aligned with
     * group.generators()); every element's matrix is derived by composing
     * along words, and the result is checked for coherence. */
    static GroupRingModule from_generator_action(const PermGroup& h, int characteristic,
                                                 int report_prime, int rank,
                                                 const std::vector<SparseZ>& gen_mats) {
        require(gen_mats.size() == h.generators().size(),
                "need one matrix per group generator");
        const auto& elems = h.elements();
        const int n = static_cast<int>(elems.size());
        std::vector<SparseZ> mats(n);
        std::vector<char> have(n, 0);
        int e = h.element_index(Permutation::identity(h.degree()));
        mats[e] = SparseZ::identity(rank);
        have[e] = 1;
        std::vector<int> queue{e};
        for (size_t qi = 0; qi < queue.size(); ++qi) {
            int i = queue[qi];
            for (size_t s = 0; s < h.generators().size(); ++s) {
                int j = h.element_index(h.generators()[s] * elems[i]);
                if (have[j]) continue;
                SparseZ m = gen_mats[s] * mats[i];
                mats[j] = characteristic > 0 ? detail::sparse_mod(m, characteristic)
                                             : std::move(m);
                have[j] = 1;
                queue.push_back(j);
            }
        }
        for (int i = 0; i < n; ++i) check(have[i], "generators do not reach every element");
        return GroupRingModule(h, characteristic, report_prime, std::move(mats));
    }

    static GroupRingModule trivial(const PermGroup& h, int characteristic, int report_prime,
                                   int rank = 1) {
        std::vector<SparseZ> mats(h.order(), SparseZ::identity(rank));
        return GroupRingModule(h, characteristic, report_prime, std::move(mats));
    }

    /* rank-1 module where each permutation acts by its sign */
    static GroupRingModule sign(const PermGroup& h, int characteristic, int report_prime) {
        std::vector<SparseZ> mats;
        mats.reserve(h.order());
        for (const auto& g : h.elements()) {
            SparseZ m(1, 1);
            m.set(0, 0, g.sign());
            mats.push_back(std::move(m));
        }
        return GroupRingModule(h, characteristic, report_prime, std::move(mats));
    }

    /* the group ring itself, acting by left translation on its element basis */
    static GroupRingModule regular(const PermGroup& h, int characteristic, int report_prime) {
        const auto& elems = h.elements();
        const int n = static_cast<int>(elems.size());
        std::vector<SparseZ> mats;
        mats.reserve(n);
        for (const auto& g : elems) {
            SparseZ m(n, n);
            for (int j = 0; j < n; ++j) m.set(h.element_index(g * elems[j]), j, 1);
            mats.push_back(std::move(m));
        }
        return GroupRingModule(h, characteristic, report_prime, std::move(mats));
    }

    const PermGroup& group() const { return group_; }
    int characteristic() const { return char_; }
    int report_prime() const { return rp_; }
    int rank() const { return rank_; }

    const SparseZ& act_index(int i) const { return act_[static_cast<size_t>(i)]; }
    const SparseZ& act(const Permutation& g) const {
        int i = group_.element_index(g);
        require(i >= 0, "element does not belong to the module's group");
        return act_[static_cast<size_t>(i)];
    }

    std::vector<mpz_class> apply(const Permutation& g, const std::vector<mpz_class>& x) const {
        return act(g).apply(x);
    }

    /* the underlying coefficient group, as reported */
    FGAbGroup underlying_group() const {
        return char_ == 0 ? FGAbGroup::free(rank_) : fp_vector_group(char_, rank_);
    }

    /* exhaustive word verification: act is a homomorphism on all of H */
    bool coherent() const {
        int e = group_.element_index(Permutation::identity(group_.degree()));
        if (!detail::sparse_equal(act_[static_cast<size_t>(e)], SparseZ::identity(rank_), char_))
            return false;
        const auto& elems = group_.elements();
        for (const auto& s : group_.generators()) {
            const SparseZ& ms = act_[static_cast<size_t>(group_.element_index(s))];
            for (size_t i = 0; i < elems.size(); ++i) {
                int j = group_.element_index(s * elems[i]);
                if (!detail::sparse_equal(act_[static_cast<size_t>(j)], ms * act_[i], char_))
                    return false;
            }
        }
        return true;
    }

    FGAbGroup report(const FGAbGroup& g) const {
        return char_ == 0 ? g.p_localized(rp_) : g;
    }

  private:
    PermGroup group_;
    int char_, rp_, rank_ = 0;
    std::vector<SparseZ> act_;
};

inline void require_same_ring(const GroupRingModule& a, const GroupRingModule& b) {
    require(a.group().same_group(b.group()), "modules live over different groups");
    require(a.characteristic() == b.characteristic() && a.report_prime() == b.report_prime(),
            "modules use different coefficient conventions");
}

/* ------------------------------------------------------------------------
 * Tensor and Hom over the group ring
 * --------------------------------------------------------------------- */

/* A (x)_{Z[H]} B where A is read as a right module via g -> g^{-1}.
 * Presentation: generators e_i (x) e_j, relations
 * act_A(g^{-1}) e_i (x) e_j - e_i (x) act_B(g) e_j for every group
 * generator g (relations for longer words follow from these). */
inline FGAbGroup tensor_over_group_ring(const GroupRingModule& a, const GroupRingModule& b) {
    require_same_ring(a, b);
    const int ra = a.rank(), rb = b.rank();
    const int gens = ra * rb;
    const auto& word_gens = a.group().generators();
    SparseZ rel(gens, static_cast<int>(word_gens.size()) * gens);
    int col = 0;
    for (const auto& g : word_gens) {
        auto cols_a = detail::columns_of(a.act(g.inverse()));
        auto cols_b = detail::columns_of(b.act(g));
        for (int i = 0; i < ra; ++i)
            for (int j = 0; j < rb; ++j) {
                for (const auto& [r, v] : cols_a[i]) rel.add(r * rb + j, col, v);
                for (const auto& [s, v] : cols_b[j]) rel.add(i * rb + s, col, -v);
                ++col;
            }
    }
    if (a.characteristic() == 0)
        return FGAbGroup::from_diag(gens, smith_normal_form(rel).diag).p_localized(a.report_prime());
    const int p = a.characteristic();
    return fp_vector_group(p, gens - fp_rank(FpMat::from_sparse(rel, p)));
}

/* Hom_{Z[H]}(A, B): the lattice of matrices X with X act_A(g) = act_B(g) X
 * for every generator g.  Always torsion-free; reported as a free module. */
inline FGAbGroup hom_over_group_ring(const GroupRingModule& a, const GroupRingModule& b) {
    require_same_ring(a, b);
    const int ra = a.rank(), rb = b.rank();
    const int unknowns = rb * ra;  // X[i,j] at index i*ra + j
    const auto& word_gens = a.group().generators();
    SparseZ sys(static_cast<int>(word_gens.size()) * unknowns, unknowns);
    int row = 0;
    for (const auto& g : word_gens) {
        const SparseZ& ma = a.act(g);
        const SparseZ& mb = b.act(g);
        // equation (i,j): sum_k B[i,k] X[k,j] - sum_k X[i,k] A[k,j] = 0
        for (int i = 0; i < rb; ++i)
            for (int j = 0; j < ra; ++j) {
                for (const auto& [k, v] : mb.row(i)) sys.add(row, k * ra + j, v);
                for (int k = 0; k < ra; ++k) {
                    mpz_class v = ma.get(k, j);
                    if (v != 0) sys.add(row, i * ra + k, -v);
                }
                ++row;
            }
    }
    if (a.characteristic() == 0)
        return FGAbGroup::free(unknowns - rank_z(sys));
    const int p = a.characteristic();
    return fp_vector_group(p, unknowns - fp_rank(FpMat::from_sparse(sys, p)));
}

/* ------------------------------------------------------------------------
 * Free presentations and Tor
 * --------------------------------------------------------------------- */

/* Integer column lattice with p-local membership queries: contains(x) holds
 * iff m*x lies in the column span over Z for some m prime to p. */
class PLocalLattice {
  public:
    PLocalLattice(int ambient, int p) : n_(ambient), p_(p), cols_(ambient, 0) {}

    void add_columns(const SparseZ& m) {
        check(m.rows() == n_, "lattice column dimension mismatch");
        cols_ = SparseZ::hconcat(cols_, m);
        dirty_ = true;
    }

    bool contains(const std::vector<mpz_class>& x) {
        check(static_cast<int>(x.size()) == n_, "lattice vector dimension mismatch");
        refresh();
        std::vector<mpz_class> z = snf_.u->apply(x);
        for (int i = 0; i < n_; ++i) {
            if (i < snf_.rank) {
                mpz_class dp = 1, d = snf_.diag[static_cast<size_t>(i)];
                while (d % p_ == 0) {
                    dp *= p_;
                    d /= p_;
                }
                if (z[static_cast<size_t>(i)] % dp != 0) return false;
            } else if (z[static_cast<size_t>(i)] != 0) {
                return false;
            }
        }
        return true;
    }

  private:
    void refresh() {
        if (!dirty_ && snf_.u.has_value()) return;
        snf_ = smith_normal_form(cols_, {.want_u = true});
        dirty_ = false;
    }
    int n_, p_;
    SparseZ cols_;
    Snf snf_;
    bool dirty_ = true;
};

namespace detail {

/* mod-p column span with the same membership interface */
class FpSpan {
  public:
    FpSpan(int ambient, int p) : cols_(p, ambient, 0) {}
    void add_columns(const FpMat& m) {
        cols_ = FpMat::hconcat(cols_, m);
        rank_ = fp_rank(cols_);
    }
    bool contains(const FpMat& col) { return fp_rank(FpMat::hconcat(cols_, col)) == rank_; }

  private:
    FpMat cols_;
    int rank_ = 0;
};

}  // namespace detail

/* image of the basis index map (t, u) -> (t, g*u) on the free module R^s,
 * where the Z-basis of R^s is indexed by t*|H| + (element index of u) */
inline std::vector<int> free_module_translation(const PermGroup& h, const Permutation& g, int s) {
    const auto& elems = h.elements();
    const int n = static_cast<int>(elems.size());
    std::vector<int> img(static_cast<size_t>(s) * n);
    for (int u = 0; u < n; ++u) {
        int gu = h.element_index(g * elems[static_cast<size_t>(u)]);
        for (int t = 0; t < s; ++t) img[static_cast<size_t>(t) * n + u] = t * n + gu;
    }
    return img;
}

namespace detail {

inline SparseZ permute_rows(const SparseZ& m, const std::vector<int>& img) {
    SparseZ out(m.rows(), m.cols());
    for (int r = 0; r < m.rows(); ++r)
        for (const auto& [c, v] : m.row(r)) out.set(img[static_cast<size_t>(r)], c, v);
    return out;
}

}  // namespace detail

/* Three-step fragment R^{s2} -> R^{s1} -> R^{s0} -> A -> 0 of a free
 * resolution over R = Z[H], exact after localization at the report prime
 * (exact on the nose over F_p[H] in the mod-p case).  Free-module bases are
 * indexed generator-major: (t, u) -> t*|H| + element index of u. */
struct FreePresentation {
    std::vector<int> gen_rank;  // {s0, s1, s2}
    SparseZ generators;         // rank_A x s0, chosen module generators of A
    SparseZ f0;                 // rank_A x (s0*|H|), the covering map
    SparseZ phi_gens, phi;      // kernel generators and full map R^{s1} -> R^{s0}
    SparseZ psi_gens, psi;      // kernel generators and full map R^{s2} -> R^{s1}
};

namespace detail {

/* greedy choice of module generators for the p-local span of a lattice:
 * walk the candidate columns; keep one whenever it is not yet in the span of
 * the group translates of the columns kept so far */
inline std::vector<int> greedy_module_generators(const PermGroup& h,
                                                 const std::vector<int>& translations_dummy,
                                                 const SparseZ& candidates, int s_ambient,
                                                 int characteristic, int report_prime,
                                                 SparseZ* kept_out) {
    (void)translations_dummy;
    const int n = static_cast<int>(h.order());
    const int ambient = candidates.rows();
    auto cols = columns_of(candidates);
    std::vector<std::vector<int>> trans;
    trans.reserve(h.elements().size());
    for (const auto& g : h.elements())
        trans.push_back(free_module_translation(h, g, s_ambient));

    std::vector<int> chosen;
    SparseZ kept(ambient, 0);
    if (characteristic == 0) {
        PLocalLattice span(ambient, report_prime);
        for (int j = 0; j < candidates.cols(); ++j) {
            std::vector<mpz_class> x(ambient, 0);
            for (const auto& [r, v] : cols[static_cast<size_t>(j)]) x[static_cast<size_t>(r)] = v;
            if (span.contains(x)) continue;
            chosen.push_back(j);
            SparseZ one = candidates.select_columns({j});
            kept = SparseZ::hconcat(kept, one);
            SparseZ orbit(ambient, n);
            for (int u = 0; u < n; ++u) {
                const auto& img = trans[static_cast<size_t>(u)];
                for (const auto& [r, v] : cols[static_cast<size_t>(j)])
                    orbit.set(img[static_cast<size_t>(r)], u, v);
            }
            span.add_columns(orbit);
        }
    } else {
        const int p = characteristic;
        FpSpan span(ambient, p);
        for (int j = 0; j < candidates.cols(); ++j) {
            FpMat col(p, ambient, 1);
            for (const auto& [r, v] : cols[static_cast<size_t>(j)]) {
                mpz_class w = v % p;
                if (w < 0) w += p;
                col(r, 0) = static_cast<int32_t>(w.get_si());
            }
            if (span.contains(col)) continue;
            chosen.push_back(j);
            kept = SparseZ::hconcat(kept, candidates.select_columns({j}));
            SparseZ orbit(ambient, n);
            for (int u = 0; u < n; ++u) {
                const auto& img = trans[static_cast<size_t>(u)];
                for (const auto& [r, v] : cols[static_cast<size_t>(j)])
                    orbit.set(img[static_cast<size_t>(r)], u, v);
            }
            span.add_columns(FpMat::from_sparse(orbit, p));
        }
    }
    if (kept_out) *kept_out = kept;
    return chosen;
}

/* expand chosen columns w_1..w_s in R^{s_prev} to the full equivariant map
 * R^s -> R^{s_prev}: column (t, u) = u . w_t */
inline SparseZ equivariant_extension(const PermGroup& h, const SparseZ& kept, int s_prev) {
    const int n = static_cast<int>(h.order());
    const int s = kept.cols();
    SparseZ out(kept.rows(), s * n);
    auto cols = columns_of(kept);
    for (int u = 0; u < n; ++u) {
        auto img = free_module_translation(h, h.elements()[static_cast<size_t>(u)], s_prev);
        for (int t = 0; t < s; ++t)
            for (const auto& [r, v] : cols[static_cast<size_t>(t)])
                out.set(img[static_cast<size_t>(r)], t * n + u, v);
    }
    return out;
}

inline SparseZ integer_kernel(const SparseZ& m, int characteristic) {
    if (characteristic == 0) return kernel_lattice(m);
    FpMat k = fp_nullspace(FpMat::from_sparse(m, characteristic));
    return k.to_sparse();
}

}  // namespace detail

inline FreePresentation free_presentation(const GroupRingModule& a) {
    const PermGroup& h = a.group();
    const int n = static_cast<int>(h.order());
    const int ra = a.rank();
    FreePresentation out;

    // step 0: module generators of A among its basis vectors
    SparseZ basis = SparseZ::identity(ra);
    std::vector<std::vector<std::vector<std::pair<int, mpz_class>>>> act_cols(
        static_cast<size_t>(n));
    for (int u = 0; u < n; ++u) act_cols[static_cast<size_t>(u)] = detail::columns_of(a.act_index(u));
    std::vector<int> chosen;
    if (a.characteristic() == 0) {
        PLocalLattice span(ra, a.report_prime());
        for (int i = 0; i < ra; ++i) {
            std::vector<mpz_class> x(ra, 0);
            x[static_cast<size_t>(i)] = 1;
            if (span.contains(x)) continue;
            chosen.push_back(i);
            SparseZ orbit(ra, n);
            for (int u = 0; u < n; ++u)
                for (const auto& [r, v] : act_cols[static_cast<size_t>(u)][static_cast<size_t>(i)])
                    orbit.set(r, u, v);
            span.add_columns(orbit);
        }
    } else {
        detail::FpSpan span(ra, a.characteristic());
        for (int i = 0; i < ra; ++i) {
            FpMat col(a.characteristic(), ra, 1);
            col(i, 0) = 1;
            if (span.contains(col)) continue;
            chosen.push_back(i);
            SparseZ orbit(ra, n);
            for (int u = 0; u < n; ++u)
                for (const auto& [r, v] : act_cols[static_cast<size_t>(u)][static_cast<size_t>(i)])
                    orbit.set(r, u, v);
            span.add_columns(FpMat::from_sparse(orbit, a.characteristic()));
        }
    }
    const int s0 = static_cast<int>(chosen.size());
    out.generators = basis.select_columns(chosen);

    // the covering map f0: (t, u) -> act(u) e_{chosen[t]}
    out.f0 = SparseZ(ra, s0 * n);
    for (int u = 0; u < n; ++u)
        for (int t = 0; t < s0; ++t)
            for (const auto& [r, v] :
                 act_cols[static_cast<size_t>(u)][static_cast<size_t>(chosen[static_cast<size_t>(t)])])
                out.f0.set(r, t * n + u, v);

    // step 1: kernel of f0 and its module generators
    SparseZ k0 = detail::integer_kernel(out.f0, a.characteristic());
    detail::greedy_module_generators(h, {}, k0, s0, a.characteristic(), a.report_prime(),
                                     &out.phi_gens);
    out.phi = detail::equivariant_extension(h, out.phi_gens, s0);

    // step 2: kernel of phi and its module generators
    SparseZ k1 = detail::integer_kernel(out.phi, a.characteristic());
    detail::greedy_module_generators(h, {}, k1, out.phi_gens.cols(), a.characteristic(),
                                     a.report_prime(), &out.psi_gens);
    out.psi = detail::equivariant_extension(h, out.psi_gens, out.phi_gens.cols());

    out.gen_rank = {s0, out.phi_gens.cols(), out.psi_gens.cols()};
    return out;
}

namespace detail {

/* induced map F (x)_R B -> F' (x)_R B of a map R^{s} -> R^{s'} given by its
 * generator columns w_t in R^{s'}: block (t', t) = sum_u c_{t,u,t'} act_B(u^{-1}),
 * where w_t = sum c (t', u) */
inline SparseZ induced_on_tensor(const SparseZ& gen_cols, int s_target,
                                 const GroupRingModule& b) {
    const PermGroup& h = b.group();
    const int n = static_cast<int>(h.order());
    const int rb = b.rank();
    const int s = gen_cols.cols();
    SparseZ out(s_target * rb, s * rb);
    for (int r = 0; r < gen_cols.rows(); ++r) {
        const int t_target = r / n;
        const int u = r % n;
        const SparseZ& mb = b.act(h.elements()[static_cast<size_t>(u)].inverse());
        for (const auto& [t, c] : gen_cols.row(r))
            for (int br = 0; br < rb; ++br)
                for (const auto& [bc, bv] : mb.row(br))
                    out.add(t_target * rb + br, t * rb + bc, c * bv);
    }
    return out;
}

}  // namespace detail

struct TorData {
    FGAbGroup tor0, tor1;
    std::vector<int> presentation_ranks;
};

/* Tor_0 and Tor_1 over the group ring from a three-step free presentation of
 * A, with A read as a right module via g -> g^{-1}. */
inline TorData tor_over_group_ring(const GroupRingModule& a, const GroupRingModule& b) {
    require_same_ring(a, b);
    FreePresentation pres = free_presentation(a);
    const int rb = b.rank();
    TorData out;
    out.presentation_ranks = pres.gen_rank;
    SparseZ m1 = detail::induced_on_tensor(pres.phi_gens, pres.gen_rank[0], b);
    SparseZ m2 = detail::induced_on_tensor(pres.psi_gens, pres.gen_rank[1], b);
    std::vector<int> dims{pres.gen_rank[0] * rb, pres.gen_rank[1] * rb, pres.gen_rank[2] * rb};
    if (a.characteristic() == 0) {
        ChainComplexZ cc(dims);
        if (cc.top() >= 1) cc.set_boundary(1, m1);
        if (cc.top() >= 2) cc.set_boundary(2, m2);
        check(cc.boundary_squares_to_zero(), "presentation composite is nonzero");
        out.tor0 = cc.homology(0).p_localized(a.report_prime());
        out.tor1 = cc.homology(1).p_localized(a.report_prime());
    } else {
        const int p = a.characteristic();
        FpChainComplex cc(p, dims);
        if (cc.top() >= 1) cc.bnd[1] = FpMat::from_sparse(m1, p);
        if (cc.top() >= 2) cc.bnd[2] = FpMat::from_sparse(m2, p);
        check(cc.boundary_squares_to_zero(), "presentation composite is nonzero");
        out.tor0 = fp_vector_group(p, cc.betti(0));
        out.tor1 = fp_vector_group(p, cc.betti(1));
    }
    return out;
}

inline FGAbGroup tor1_over_group_ring(const GroupRingModule& a, const GroupRingModule& b) {
    return tor_over_group_ring(a, b).tor1;
}

/* ------------------------------------------------------------------------
 * Free resolutions of the trivial module over F_p[H]
 * --------------------------------------------------------------------- */

struct FreeResolution {
    PermGroup group;
    int p = 2;
    std::vector<int> ranks;       // s_0, ..., s_length over F_p[H]
    FpMat augmentation;           // 1 x (s_0 * |H|)
    std::vector<FpMat> boundary;  // boundary[i] : F_i -> F_{i-1}, valid for i >= 1

    int length() const { return static_cast<int>(ranks.size()) - 1; }

    bool composites_vanish() const {
        for (size_t i = 2; i < boundary.size(); ++i)
            if (!(boundary[i - 1] * boundary[i]).is_zero()) return false;
        if (boundary.size() >= 2 && !(augmentation * boundary[1]).is_zero()) return false;
        return true;
    }

    /* exactness at F_i for all i < length, by rank counting */
    bool exact() const {
        const int n = static_cast<int>(group.order());
        if (fp_rank(augmentation) != 1) return false;
        int ker = ranks[0] * n - 1;
        for (int i = 1; i <= length(); ++i) {
            if (fp_rank(boundary[static_cast<size_t>(i)]) != ker) return false;
            ker = ranks[static_cast<size_t>(i)] * n - ker;
        }
        return true;
    }
};

/* Builds F_length -> ... -> F_0 -> F_p -> 0 with F_i free over F_p[H].
 * Kernel generators are chosen by greedy sifting, so the resolution is valid
 * (exact) but not necessarily minimal. */
inline FreeResolution free_resolution_over_group_algebra(const PermGroup& h, int p, int length) {
    require(length >= 0, "resolution length must be nonnegative");
    require_capacity(h.order(), 24, "group order for free resolutions");
    require_capacity(length, 10, "free resolution length");
    const int n = static_cast<int>(h.order());
    FreeResolution out;
    out.group = h;
    out.p = p;
    out.ranks = {1};
    out.augmentation = FpMat(p, 1, n);
    for (int j = 0; j < n; ++j) out.augmentation(0, j) = 1;
    out.boundary.resize(1);  // index 0 unused

    FpMat prev = out.augmentation;
    int s_prev = 1;
    for (int i = 1; i <= length; ++i) {
        FpMat kernel = fp_nullspace(prev);
        detail::FpSpan span(s_prev * n, p);
        std::vector<FpMat> kept;
        for (int j = 0; j < kernel.cols(); ++j) {
            FpMat col = kernel.select_columns({j});
            if (span.contains(col)) continue;
            kept.push_back(col);
            FpMat orbit(p, s_prev * n, n);
            for (int u = 0; u < n; ++u) {
                auto img = free_module_translation(h, h.elements()[static_cast<size_t>(u)],
                                                   s_prev);
                for (int r = 0; r < col.rows(); ++r)
                    if (col(r, 0) != 0) orbit(img[static_cast<size_t>(r)], u) = col(r, 0);
            }
            span.add_columns(orbit);
        }
        const int s = static_cast<int>(kept.size());
        FpMat d(p, s_prev * n, s * n);
        for (int t = 0; t < s; ++t)
            for (int u = 0; u < n; ++u) {
                auto img = free_module_translation(h, h.elements()[static_cast<size_t>(u)],
                                                   s_prev);
                for (int r = 0; r < kept[static_cast<size_t>(t)].rows(); ++r)
                    if (kept[static_cast<size_t>(t)](r, 0) != 0)
                        d(img[static_cast<size_t>(r)], t * n + u) =
                            kept[static_cast<size_t>(t)](r, 0);
            }
        out.ranks.push_back(s);
        out.boundary.push_back(d);
        prev = d;
        s_prev = s;
    }
    check(out.composites_vanish(), "resolution boundaries do not compose to zero");
    check(out.exact(), "resolution failed its exactness count");
    return out;
}

/* ------------------------------------------------------------------------
 * Chain complexes of free Z[W]-modules and twisted coefficients
 * --------------------------------------------------------------------- */

/* A bounded chain complex of free Z[W]-modules with chosen orbit
 * representatives.  The Z-basis of C_q is (orbit o, element u) -> o*|W| + u,
 * where the basis vector is u . (o, e).  Only representative columns are
 * stored: rep_bnd[q] has one column per degree-q orbit, giving the boundary
 * of (o, e); the boundary of (o, u) is its u-translate. */
struct FreeWComplex {
    PermGroup w;
    std::vector<int> orbit_counts;
    std::vector<SparseZ> rep_bnd;  // rep_bnd[q] : (orbit_counts[q-1]*|W|) x orbit_counts[q]
    int valid_through = -1;        // last degree with untruncated homology; -1 = all of them

    int top() const { return static_cast<int>(orbit_counts.size()) - 1; }
    int orbits(int q) const {
        return (q >= 0 && q <= top()) ? orbit_counts[static_cast<size_t>(q)] : 0;
    }
    long dim(int q) const { return static_cast<long>(orbits(q)) * w.order(); }
    int homology_valid_through() const {
        return valid_through < 0 ? top() : valid_through;
    }

    /* d(d(o, e)) accumulates to zero, for every representative */
    bool boundary_squares_to_zero() const {
        const auto& elems = w.elements();
        for (int q = 2; q <= top(); ++q) {
            auto cols = detail::columns_of(rep_bnd[static_cast<size_t>(q)]);
            auto inner = detail::columns_of(rep_bnd[static_cast<size_t>(q) - 1]);
            const int nw = static_cast<int>(elems.size());
            for (int o = 0; o < orbits(q); ++o) {
                std::map<long, mpz_class> acc;
                for (const auto& [r, c] : cols[static_cast<size_t>(o)]) {
                    const int o1 = static_cast<int>(r / nw);
                    const Permutation& u1 = elems[static_cast<size_t>(r % nw)];
                    for (const auto& [r2, c2] : inner[static_cast<size_t>(o1)]) {
                        const int o2 = static_cast<int>(r2 / nw);
                        int v = w.element_index(u1 * elems[static_cast<size_t>(r2 % nw)]);
                        acc[static_cast<long>(o2) * nw + v] += c * c2;
                    }
                }
                for (const auto& [idx, v] : acc)
                    if (v != 0) return false;
            }
        }
        return true;
    }

    /* the full integer complex, materialized (small inputs only) */
    ChainComplexZ total() const {
        const auto& elems = w.elements();
        const int nw = static_cast<int>(elems.size());
        std::vector<int> dims;
        long total_cells = 0;
        for (int q = 0; q <= top(); ++q) {
            dims.push_back(static_cast<int>(dim(q)));
            total_cells += dim(q);
        }
        require_capacity(total_cells, kMaxSimplices, "materialized free complex size");
        ChainComplexZ cc(dims);
        for (int q = 1; q <= top(); ++q) {
            SparseZ d(static_cast<int>(dim(q - 1)), static_cast<int>(dim(q)));
            auto cols = detail::columns_of(rep_bnd[static_cast<size_t>(q)]);
            for (int o = 0; o < orbits(q); ++o)
                for (int u = 0; u < nw; ++u)
                    for (const auto& [r, c] : cols[static_cast<size_t>(o)]) {
                        const int o1 = static_cast<int>(r / nw);
                        int v = w.element_index(elems[static_cast<size_t>(u)] *
                                                elems[static_cast<size_t>(r % nw)]);
                        d.add(o1 * nw + v, o * nw + u, c);
                    }
            cc.set_boundary(q, std::move(d));
        }
        return cc;
    }
};

/* Reads a free-action equivariant complex into free Z[W]-module form.
 * Requires every simplex stabilizer to be trivial. */
inline FreeWComplex free_w_complex(const GComplex& x) {
    require(x.has_action(), "free module structure needs a group action");
    FreeWComplex out;
    out.w = x.group();
    const int nw = static_cast<int>(out.w.order());
    for (int q = 0; q <= x.dimension(); ++q) {
        const auto& od = x.orbits(q);
        for (const auto& s : od.stabilizers)
            require(s.order() == 1, "action on the complex is not free");
        out.orbit_counts.push_back(static_cast<int>(od.reps.size()));
    }
    out.rep_bnd.resize(static_cast<size_t>(x.dimension()) + 1);
    for (int q = 1; q <= x.dimension(); ++q) {
        const auto& od = x.orbits(q);
        const auto& fd = x.orbits(q - 1);
        SparseZ bm = x.boundary_matrix(q);
        SparseZ d(out.orbit_counts[static_cast<size_t>(q) - 1] * nw,
                  static_cast<int>(od.reps.size()));
        auto cols = detail::columns_of(bm);
        for (size_t o = 0; o < od.reps.size(); ++o) {
            int rep = od.reps[o];
            for (const auto& [face, sgn] : cols[static_cast<size_t>(rep)]) {
                int fo = fd.orbit_of[static_cast<size_t>(face)];
                int u = out.w.element_index(fd.transporter[static_cast<size_t>(face)]);
                check(u >= 0, "transporter not found in the acting group");
                d.add(fo * nw + u, static_cast<int>(o), sgn);
            }
        }
        out.rep_bnd[static_cast<size_t>(q)] = std::move(d);
    }
    out.valid_through = -1;
    return out;
}

/* Chains of (truncated free contractible W-space) x F with the diagonal
 * W-action, via the tensor-of-chain-complexes model.  The free contractible
 * space is modeled simplicially with q-simplices W^{q+1} (unnormalized),
 * truncated above degree n_trunc; homology of the result is valid in
 * degrees < n_trunc.  Orbit representatives are the pairs
 * ((e, u_1, ..., u_a), sigma) with sigma any simplex of F. */
inline FreeWComplex borel_model(const PermGroup& w, const GComplex& f, int n_trunc) {
    require(n_trunc >= 0, "truncation degree must be nonnegative");
    require(f.has_action() && f.group().same_group(w),
            "the complex must carry an action of the given group");
    require(f.total_simplices() > 0, "cannot form a model over an empty complex");
    const auto& elems = w.elements();
    const int nw = static_cast<int>(elems.size());
    {
        long size = f.total_simplices();
        for (int i = 0; i <= n_trunc; ++i) {
            size *= nw;
            require_capacity(size, kMaxSimplices, "free model size");
        }
    }
    const int eidx = w.element_index(Permutation::identity(w.degree()));
    std::vector<int> inv(static_cast<size_t>(nw));
    std::vector<std::vector<int>> mult(static_cast<size_t>(nw),
                                       std::vector<int>(static_cast<size_t>(nw)));
    for (int i = 0; i < nw; ++i) {
        inv[static_cast<size_t>(i)] = w.element_index(elems[static_cast<size_t>(i)].inverse());
        for (int j = 0; j < nw; ++j)
            mult[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                w.element_index(elems[static_cast<size_t>(i)] * elems[static_cast<size_t>(j)]);
    }
    // simplex translation tables: act_tab[u][b][sigma] = index of u . sigma
    std::vector<std::vector<std::vector<int>>> act_tab(static_cast<size_t>(nw));
    for (int u = 0; u < nw; ++u) {
        act_tab[static_cast<size_t>(u)].resize(static_cast<size_t>(f.dimension()) + 1);
        for (int b = 0; b <= f.dimension(); ++b) {
            auto& tab = act_tab[static_cast<size_t>(u)][static_cast<size_t>(b)];
            tab.resize(static_cast<size_t>(f.count(b)));
            for (int s = 0; s < f.count(b); ++s)
                tab[static_cast<size_t>(s)] = f.index_of(
                    b, f.act_simplex(elems[static_cast<size_t>(u)], f.simplex(b, s)));
        }
    }
    std::vector<std::vector<std::vector<std::pair<int, mpz_class>>>> fcols(
        static_cast<size_t>(f.dimension()) + 1);
    for (int b = 1; b <= f.dimension(); ++b)
        fcols[static_cast<size_t>(b)] = detail::columns_of(f.boundary_matrix(b));

    const int qtop = n_trunc + f.dimension();
    FreeWComplex out;
    out.w = w;
    out.valid_through = n_trunc - 1;
    // orbit offsets: offsets[q][a] = first orbit id of the (a, q-a) piece
    std::vector<long> pow_nw(static_cast<size_t>(n_trunc) + 2, 1);
    for (size_t i = 1; i < pow_nw.size(); ++i) pow_nw[i] = pow_nw[i - 1] * nw;
    std::vector<std::vector<long>> offsets(static_cast<size_t>(qtop) + 1);
    for (int q = 0; q <= qtop; ++q) {
        offsets[static_cast<size_t>(q)].assign(static_cast<size_t>(n_trunc) + 1, -1);
        long off = 0;
        for (int a = 0; a <= std::min(q, n_trunc); ++a) {
            int b = q - a;
            if (b > f.dimension()) continue;
            offsets[static_cast<size_t>(q)][static_cast<size_t>(a)] = off;
            off += pow_nw[static_cast<size_t>(a)] * f.count(b);
        }
        check(off <= INT32_MAX, "orbit count exceeds index range");
        out.orbit_counts.push_back(static_cast<int>(off));
    }
    auto orbit_id = [&](int q, int a, long tuple_rank, int sigma) -> long {
        int b = q - a;
        return offsets[static_cast<size_t>(q)][static_cast<size_t>(a)] +
               tuple_rank * f.count(b) + sigma;
    };

    out.rep_bnd.resize(static_cast<size_t>(qtop) + 1);
    for (int q = 1; q <= qtop; ++q) {
        SparseZ d(static_cast<int>(static_cast<long>(out.orbit_counts[static_cast<size_t>(q) - 1]) * nw),
                  out.orbit_counts[static_cast<size_t>(q)]);
        for (int a = 0; a <= std::min(q, n_trunc); ++a) {
            const int b = q - a;
            if (b > f.dimension()) continue;
            std::vector<int> tuple(static_cast<size_t>(a), 0);
            for (long trank = 0; trank < pow_nw[static_cast<size_t>(a)]; ++trank) {
                for (int sigma = 0; sigma < f.count(b); ++sigma) {
                    const long col = orbit_id(q, a, trank, sigma);
                    // faces inside the free factor
                    if (a >= 1) {
                        // dropping the leading identity: translate back by u_1
                        const int u1 = tuple[0];
                        const int u1i = inv[static_cast<size_t>(u1)];
                        long r2 = 0;
                        for (int k = 1; k < a; ++k)
                            r2 = r2 * nw +
                                 mult[static_cast<size_t>(u1i)][static_cast<size_t>(tuple[static_cast<size_t>(k)])];
                        const int sig2 =
                            act_tab[static_cast<size_t>(u1i)][static_cast<size_t>(b)]
                                   [static_cast<size_t>(sigma)];
                        d.add(static_cast<int>(orbit_id(q - 1, a - 1, r2, sig2) * nw + u1),
                              static_cast<int>(col), 1);
                        // dropping a later coordinate keeps the representative form
                        int sign = -1;
                        for (int i = 1; i <= a; ++i) {
                            long r3 = 0;
                            for (int k = 0; k < a; ++k)
                                if (k != i - 1) r3 = r3 * nw + tuple[static_cast<size_t>(k)];
                            d.add(static_cast<int>(orbit_id(q - 1, a - 1, r3, sigma) * nw + eidx),
                                  static_cast<int>(col), sign);
                            sign = -sign;
                        }
                    }
                    // faces inside F, with the degree-a sign
                    if (b >= 1) {
                        const int fsign = (a % 2 == 0) ? 1 : -1;
                        for (const auto& [r, v] :
                             fcols[static_cast<size_t>(b)][static_cast<size_t>(sigma)])
                            d.add(static_cast<int>(orbit_id(q - 1, a, trank, r) * nw + eidx),
                                  static_cast<int>(col), v * fsign);
                    }
                }
                // odometer step over (u_1, ..., u_a)
                for (int k = a - 1; k >= 0; --k) {
                    if (++tuple[static_cast<size_t>(k)] < nw) break;
                    tuple[static_cast<size_t>(k)] = 0;
                }
            }
        }
        out.rep_bnd[static_cast<size_t>(q)] = std::move(d);
    }
    return out;
}

/* (C (x)_{Z[W]} M) as a plain complex on degrees 0..min(qmax+1, top):
 * block (o', o) of the boundary is sum_u c_{o',u,o} act_M(u^{-1}). */
inline ChainComplexZ twisted_chain_complex(const FreeWComplex& c, const GroupRingModule& m,
                                           int qmax) {
    require(m.group().same_group(c.w), "module group does not match the acting group");
    require(qmax >= 0 && qmax <= c.homology_valid_through(),
            "requested degree exceeds the model's valid range");
    const int nw = static_cast<int>(c.w.order());
    const int rm = m.rank();
    const int d = std::min(qmax + 1, c.top());
    std::vector<int> dims;
    for (int q = 0; q <= d; ++q) dims.push_back(c.orbits(q) * rm);
    ChainComplexZ cc(dims);
    std::vector<int> inv(static_cast<size_t>(nw));
    for (int i = 0; i < nw; ++i)
        inv[static_cast<size_t>(i)] =
            c.w.element_index(c.w.elements()[static_cast<size_t>(i)].inverse());
    for (int q = 1; q <= d; ++q) {
        const SparseZ& rb = c.rep_bnd[static_cast<size_t>(q)];
        SparseZ out(c.orbits(q - 1) * rm, c.orbits(q) * rm);
        for (int r = 0; r < rb.rows(); ++r) {
            const int o1 = r / nw;
            const SparseZ& mm = m.act_index(inv[static_cast<size_t>(r % nw)]);
            for (const auto& [o, cval] : rb.row(r))
                for (int mr = 0; mr < rm; ++mr)
                    for (const auto& [mc, mv] : mm.row(mr))
                        out.add(o1 * rm + mr, o * rm + mc, cval * mv);
        }
        cc.set_boundary(q, std::move(out));
    }
    return cc;
}

/* homology of C (x)_{Z[W]} M in degrees 0..qmax, reported per the module's
 * coefficient convention */
inline std::vector<FGAbGroup> twisted_homology(const FreeWComplex& c, const GroupRingModule& m,
                                               int qmax) {
    ChainComplexZ cc = twisted_chain_complex(c, m, qmax);
    std::vector<FGAbGroup> out;
    if (m.characteristic() == 0) {
        for (int q = 0; q <= qmax; ++q) out.push_back(cc.homology(q).p_localized(m.report_prime()));
        return out;
    }
    const int p = m.characteristic();
    std::vector<int> dims;
    for (int q = 0; q <= cc.top(); ++q) dims.push_back(cc.dim(q));
    FpChainComplex fc(p, dims);
    for (int q = 1; q <= cc.top(); ++q) fc.bnd[static_cast<size_t>(q)] = FpMat::from_sparse(cc.boundary(q), p);
    for (int q = 0; q <= qmax; ++q) out.push_back(fp_vector_group(p, fc.betti(q)));
    return out;
}

/* cohomology of Hom_{Z[W]}(C, M) in degrees 0..qmax: the cochain block
 * (o, o') of the differential out of degree q is sum_u c_{o',u,o} act_M(u),
 * assembled as a reversed chain complex so the shared homology engine
 * applies. */
inline std::vector<FGAbGroup> twisted_cohomology(const FreeWComplex& c, const GroupRingModule& m,
                                                 int qmax) {
    require(m.group().same_group(c.w), "module group does not match the acting group");
    require(qmax >= 0 && qmax <= c.homology_valid_through(),
            "requested degree exceeds the model's valid range");
    const int nw = static_cast<int>(c.w.order());
    const int rm = m.rank();
    const int dtop = std::min(qmax + 1, c.top());
    // delta[q] : Hom(C_q, M) -> Hom(C_{q+1}, M) for q = 0..dtop-1
    std::vector<SparseZ> delta;
    for (int q = 0; q < dtop; ++q) {
        const SparseZ& rb = c.rep_bnd[static_cast<size_t>(q) + 1];
        SparseZ out(c.orbits(q + 1) * rm, c.orbits(q) * rm);
        for (int r = 0; r < rb.rows(); ++r) {
            const int o1 = r / nw;
            const SparseZ& mm = m.act_index(r % nw);
            for (const auto& [o, cval] : rb.row(r))
                for (int mr = 0; mr < rm; ++mr)
                    for (const auto& [mc, mv] : mm.row(mr))
                        out.add(o * rm + mr, o1 * rm + mc, cval * mv);
        }
        delta.push_back(std::move(out));
    }
    // reversed complex: E_i = Hom(C_{dtop-i}, M), boundary E_i -> E_{i-1} = delta[dtop-i]
    std::vector<int> dims;
    for (int i = 0; i <= dtop; ++i) dims.push_back(c.orbits(dtop - i) * rm);
    ChainComplexZ cc(dims);
    for (int i = 1; i <= dtop; ++i) cc.set_boundary(i, delta[static_cast<size_t>(dtop - i)]);
    std::vector<FGAbGroup> out;
    if (m.characteristic() == 0) {
        for (int q = 0; q <= qmax; ++q)
            out.push_back(cc.homology(dtop - q).p_localized(m.report_prime()));
        return out;
    }
    const int p = m.characteristic();
    FpChainComplex fc(p, dims);
    for (int q = 1; q <= cc.top(); ++q)
        fc.bnd[static_cast<size_t>(q)] = FpMat::from_sparse(cc.boundary(q), p);
    for (int q = 0; q <= qmax; ++q) out.push_back(fp_vector_group(p, fc.betti(dtop - q)));
    return out;
}

}  // namespace parcx
