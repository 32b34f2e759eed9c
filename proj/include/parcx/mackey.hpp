#pragma once

/* Coefficient systems and Mackey functors on a fixed finite permutation
 * group G.
 *
 * Data model
 *   - Subgroups are tracked up to conjugacy in a SubgroupClassTable.  Every
 *     stored datum lives on the class representative; a conjugating witness
 *     transports values for arbitrary subgroups.
 *   - A map of transitive G-sets G/H -> G/K is recorded as an OrbitMap with
 *     a witness g satisfying g^{-1} H g <= K; it sends xH to xgK and depends
 *     only on the coset gK.  Maps of general finite G-sets carry one leg per
 *     source orbit.
 *   - A CoefficientSystem stores one value group per subgroup class together
 *     with a covariant and a contravariant matrix kernel.  All matrices are
 *     written in canonical class coordinates: generator columns are the free
 *     generators of the value followed by its torsion generators.
 *   - A MackeyFunctor is a sequence of coefficient systems (a single entry
 *     when ungraded) sharing one class table; transfers, restrictions, and
 *     conjugations are the covariant/contravariant images of projections and
 *     self-maps.
 *
 * Built-in families: constant systems, fixed points of an integral or
 * modular representation, and homotopy-orbit coefficients of twisted
 * one-point compactified sphere models ("borel_mackey").
 *
 * Caches are write-once and filled on first use; callers must serialize
 * concurrent access to one object.
 */

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "parcx/chain_complex.hpp"
#include "parcx/common.hpp"
#include "parcx/fgab.hpp"
#include "parcx/fp_matrix.hpp"
#include "parcx/gcomplex.hpp"
#include "parcx/group_ring.hpp"
#include "parcx/perm_group.hpp"
#include "parcx/report.hpp"
#include "parcx/snf.hpp"

namespace parcx {

namespace detail {

inline bool is_prime_small(int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

/* A short generating set, extracted greedily from the sorted element list. */
inline std::vector<Permutation> small_generating_set(const PermGroup& d) {
    std::vector<Permutation> gens;
    PermGroup span = PermGroup::trivial(d.degree());
    for (const auto& x : d.elements()) {
        if (span.contains(x)) continue;
        gens.push_back(x);
        auto gg = span.generators();
        gg.push_back(x);
        span = PermGroup(d.degree(), gg);
        if (span.order() == d.order()) break;
    }
    return gens;
}

inline std::string describe_subgroup(const PermGroup& d) {
    if (d.order() == 1) return "1";
    std::string out = "<";
    bool first = true;
    for (const auto& g : small_generating_set(d)) {
        if (!first) out += ", ";
        out += g.to_cycle_string();
        first = false;
    }
    return out + ">";
}

inline PermGroup conjugate_subgroup(const PermGroup& d, const Permutation& w) {
    std::vector<Permutation> gens;
    gens.reserve(d.generators().size());
    for (const auto& s : d.generators()) gens.push_back(w.inverse() * s * w);
    return PermGroup(d.degree(), gens);
}

inline SparseZ sparse_sum(const SparseZ& a, const SparseZ& b) {
    check(a.rows() == b.rows() && a.cols() == b.cols(), "sparse_sum: shape mismatch");
    SparseZ out = a;
    for (int r = 0; r < b.rows(); ++r)
        for (const auto& [c, v] : b.row(r)) out.add(r, c, v);
    return out;
}

inline SparseZ scaled_identity(long n, long s) {
    SparseZ m(static_cast<int>(n), static_cast<int>(n));
    for (int i = 0; i < n; ++i) m.set(i, i, s);
    return m;
}

/* Modulus under which matrices into this value group are well defined:
 * q when the value is pure q^k-torsion for a single prime power base q,
 * otherwise 0 (exact comparison). */
inline int matrix_modulus(const FGAbGroup& v) {
    if (v.free_rank > 0 || v.torsion.empty()) return 0;
    for (int q = 2; q <= 64; ++q) {
        if (!is_prime_small(q)) continue;
        bool all = true;
        for (const auto& d : v.torsion) {
            mpz_class rest = d;
            while (rest % q == 0) rest /= q;
            if (rest != 1) {
                all = false;
                break;
            }
        }
        if (all) return q;
    }
    return 0;
}

inline FGAbGroup direct_sum_groups(const std::vector<FGAbGroup>& parts) {
    long free = 0;
    std::vector<mpz_class> tors;
    for (const auto& v : parts) {
        free += v.free_rank;
        for (const auto& d : v.torsion) tors.push_back(d);
    }
    if (tors.empty()) return FGAbGroup::free(free);
    SparseZ diag(static_cast<int>(tors.size()), static_cast<int>(tors.size()));
    for (size_t i = 0; i < tors.size(); ++i)
        diag.set(static_cast<int>(i), static_cast<int>(i), tors[i]);
    FGAbGroup out = FGAbGroup::from_diag(static_cast<long>(tors.size()),
                                         smith_normal_form(diag).diag);
    out.free_rank += free;
    return out;
}

}  // namespace detail

/* ------------------------------------------------------------------------
 * Subgroup class table
 * --------------------------------------------------------------------- */

class SubgroupClassTable {
  public:
    explicit SubgroupClassTable(PermGroup ambient) : g_(std::move(ambient)) {}

    struct Location {
        int cls = -1;
        Permutation witness;  // a with a^{-1} D a = rep(cls)
    };

    const PermGroup& group() const { return g_; }
    int count() const { return static_cast<int>(reps_.size()); }
    bool frozen() const { return frozen_; }
    void freeze() { frozen_ = true; }

    const PermGroup& rep(int cls) const {
        require(cls >= 0 && cls < count(), "subgroup class id out of range");
        return reps_[static_cast<size_t>(cls)];
    }
    const std::string& label(int cls) const {
        require(cls >= 0 && cls < count(), "subgroup class id out of range");
        return labels_[static_cast<size_t>(cls)];
    }

    /* class id without inserting; -1 when the subgroup was never located */
    int find(const PermGroup& d) const {
        auto it = memo_.find(element_key(d));
        return it == memo_.end() ? -1 : it->second.cls;
    }

    /* Locate d up to conjugacy, inserting a new class unless frozen. */
    Location locate(const PermGroup& d) {
        require(d.degree() == g_.degree() && g_.contains_group(d),
                "subgroup does not lie in the ambient group");
        std::vector<int> key = element_key(d);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;

        // canonical form: lexicographically minimal conjugate element key
        std::vector<int> best;
        Permutation best_a;
        for (const auto& a : g_.elements()) {
            std::vector<int> cand = conjugate_key(d, a);
            if (best.empty() || cand < best) {
                best = std::move(cand);
                best_a = a;
            }
        }
        auto cit = canon_.find(best);
        if (cit == canon_.end()) {
            if (frozen_)
                throw DomainError("stabilizer class missing from a frozen subgroup-class table");
            int cls = count();
            reps_.push_back(group_from_key(best));
            labels_.push_back(detail::describe_subgroup(reps_.back()));
            cit = canon_.emplace(std::move(best), cls).first;
        }
        Location loc{cit->second, best_a};
        memo_.emplace(std::move(key), loc);
        return loc;
    }

    /* Insert every subgroup of the ambient group (small groups only). */
    void populate_all_subgroups() {
        for (const auto& bits : detail::all_subgroups_of_small(g_))
            locate(group_from_bits(g_, bits));
    }

  private:
    std::vector<int> element_key(const PermGroup& d) const {
        std::vector<int> key;
        key.reserve(static_cast<size_t>(d.order()));
        for (const auto& x : d.elements()) {
            int i = g_.element_index(x);
            require(i >= 0, "subgroup element missing from the ambient group");
            key.push_back(i);
        }
        std::sort(key.begin(), key.end());
        return key;
    }

    std::vector<int> conjugate_key(const PermGroup& d, const Permutation& a) const {
        Permutation ai = a.inverse();
        std::vector<int> key;
        key.reserve(static_cast<size_t>(d.order()));
        for (const auto& x : d.elements()) key.push_back(g_.element_index(ai * x * a));
        std::sort(key.begin(), key.end());
        return key;
    }

    PermGroup group_from_key(const std::vector<int>& key) const {
        std::vector<Permutation> elems;
        elems.reserve(key.size());
        for (int i : key) elems.push_back(g_.elements()[static_cast<size_t>(i)]);
        return PermGroup::from_elements(g_.degree(), std::move(elems));
    }

    PermGroup g_;
    bool frozen_ = false;
    // deques so rep()/label() references stay valid while classes are added
    std::deque<PermGroup> reps_;
    std::deque<std::string> labels_;
    std::map<std::vector<int>, int> canon_;        // canonical key -> class
    std::map<std::vector<int>, Location> memo_;    // element key -> location
};

/* ------------------------------------------------------------------------
 * Orbit maps, finite G-sets, spans
 * --------------------------------------------------------------------- */

/* G/source -> G/target, xH |-> x*witness*K; requires witness^{-1} H witness <= K */
struct OrbitMap {
    PermGroup source, target;
    Permutation witness;
};

inline bool witness_subconjugates(const PermGroup& src, const Permutation& w,
                                  const PermGroup& dst) {
    Permutation wi = w.inverse();
    for (const auto& s : src.generators())
        if (!dst.contains(wi * s * w)) return false;
    return true;
}

inline OrbitMap compose_orbit_maps(const OrbitMap& f, const OrbitMap& g) {
    require(f.target.same_group(g.source), "orbit maps do not compose");
    return {f.source, g.target, f.witness * g.witness};
}

/* finite G-set, one stabilizer per orbit */
struct FiniteGSet {
    std::vector<PermGroup> stabilizers;
};

inline long gset_points(const PermGroup& g, const FiniteGSet& s) {
    long n = 0;
    for (const auto& h : s.stabilizers) n += g.order() / h.order();
    return n;
}

/* map of finite G-sets: orbit i of src lands in orbit legs[i].orbit of dst */
struct GSetMap {
    struct Leg {
        int orbit = 0;
        Permutation witness;
    };
    FiniteGSet src, dst;
    std::vector<Leg> legs;
};

/* span src <- apex -> dst, recorded as two maps out of a common apex */
struct GSpan {
    GSetMap left, right;
};

/* ------------------------------------------------------------------------
 * Coefficient systems
 * --------------------------------------------------------------------- */

class CoefficientSystem {
  public:
    using ValueMaker = std::function<FGAbGroup(int)>;
    using MapKernel = std::function<SparseZ(int, int, const Permutation&)>;

    CoefficientSystem(PermGroup ambient, std::shared_ptr<SubgroupClassTable> table,
                      ValueMaker values, MapKernel covariant_kernel, MapKernel contravariant_kernel,
                      int locality)
        : g_(std::move(ambient)),
          table_(std::move(table)),
          make_value_(std::move(values)),
          cov_(std::move(covariant_kernel)),
          contra_(std::move(contravariant_kernel)),
          locality_(locality) {
        require(table_ != nullptr, "coefficient system needs a class table");
        require(g_.same_group(table_->group()), "class table belongs to a different group");
        require(locality_ == 0 || detail::is_prime_small(locality_),
                "locality must be zero or a prime");
    }

    const PermGroup& group() const { return g_; }
    SubgroupClassTable& table() const { return *table_; }
    std::shared_ptr<SubgroupClassTable> table_ptr() const { return table_; }
    int locality() const { return locality_; }

    const FGAbGroup& value(int cls) const {
        auto it = values_.find(cls);
        if (it == values_.end()) {
            require(cls >= 0 && cls < table_->count(), "subgroup class id out of range");
            it = values_.emplace(cls, make_value_(cls)).first;
        }
        return it->second;
    }
    FGAbGroup value_of(const PermGroup& d) const { return value(table_->locate(d).cls); }
    long gens(int cls) const {
        const FGAbGroup& v = value(cls);
        return v.free_rank + static_cast<long>(v.torsion.size());
    }

    /* covariant structure matrix of f, in canonical class coordinates */
    SparseZ covariant(const OrbitMap& f) const { return structure_matrix(f, true); }
    /* contravariant structure matrix of f (from the target class to the source class) */
    SparseZ contravariant(const OrbitMap& f) const { return structure_matrix(f, false); }

  private:
    struct Canonical {
        int src = -1, dst = -1;
        Permutation witness;
    };

    Canonical canonicalize(const OrbitMap& f) const {
        require(g_.contains(f.witness), "orbit-map witness lies outside the ambient group");
        require(witness_subconjugates(f.source, f.witness, f.target),
                "orbit-map witness fails subconjugacy");
        auto ls = table_->locate(f.source);
        auto lt = table_->locate(f.target);
        return {ls.cls, lt.cls, ls.witness.inverse() * f.witness * lt.witness};
    }

    SparseZ structure_matrix(const OrbitMap& f, bool cov) const {
        Canonical c = canonicalize(f);
        // the map depends on the witness only through its target-class coset;
        // normalize to the minimal coset element
        Permutation wmin = c.witness;
        {
            const PermGroup& rj = table_->rep(c.dst);
            bool first = true;
            for (const auto& r : rj.elements()) {
                Permutation cand = c.witness * r;
                if (first || cand < wmin) {
                    wmin = cand;
                    first = false;
                }
            }
        }
        long wkey = g_.element_index(wmin);
        check(wkey >= 0, "canonical witness left the ambient group");
        auto& memo = cov ? cov_memo_ : contra_memo_;
        auto it = memo.find({c.src, c.dst, wkey});
        if (it != memo.end()) return it->second;
        SparseZ m = (cov ? cov_ : contra_)(c.src, c.dst, wmin);
        long rows = cov ? gens(c.dst) : gens(c.src);
        long cols = cov ? gens(c.src) : gens(c.dst);
        check(m.rows() == rows && m.cols() == cols, "structure matrix has the wrong shape");
        memo.emplace(std::make_tuple(c.src, c.dst, wkey), m);
        return m;
    }

    PermGroup g_;
    std::shared_ptr<SubgroupClassTable> table_;
    ValueMaker make_value_;
    MapKernel cov_, contra_;
    int locality_ = 0;
    mutable std::map<int, FGAbGroup> values_;
    mutable std::map<std::tuple<int, int, long>, SparseZ> cov_memo_, contra_memo_;
};

/* value of a coefficient system on a finite G-set (direct sum over orbits) */
inline FGAbGroup evaluate(const CoefficientSystem& cs, const FiniteGSet& s) {
    std::vector<FGAbGroup> parts;
    parts.reserve(s.stabilizers.size());
    for (const auto& h : s.stabilizers) parts.push_back(cs.value_of(h));
    return detail::direct_sum_groups(parts);
}

namespace detail {

inline std::vector<long> gset_offsets(const CoefficientSystem& cs, const FiniteGSet& s,
                                      long& total) {
    std::vector<long> off;
    off.reserve(s.stabilizers.size());
    total = 0;
    for (const auto& h : s.stabilizers) {
        off.push_back(total);
        total += cs.gens(cs.table().locate(h).cls);
    }
    return off;
}

inline void place_block(SparseZ& m, const SparseZ& blk, long r0, long c0) {
    for (int r = 0; r < blk.rows(); ++r)
        for (const auto& [c, v] : blk.row(r))
            m.add(static_cast<int>(r0) + r, static_cast<int>(c0) + c, v);
}

}  // namespace detail

/* matrix of the covariant image of a G-set map (one block per source orbit) */
inline SparseZ evaluate_covariant(const CoefficientSystem& cs, const GSetMap& f) {
    require(f.legs.size() == f.src.stabilizers.size(), "one leg per source orbit required");
    long nsrc = 0, ndst = 0;
    std::vector<long> soff = detail::gset_offsets(cs, f.src, nsrc);
    std::vector<long> doff = detail::gset_offsets(cs, f.dst, ndst);
    SparseZ m(static_cast<int>(ndst), static_cast<int>(nsrc));
    for (size_t i = 0; i < f.legs.size(); ++i) {
        const auto& leg = f.legs[i];
        require(leg.orbit >= 0 && leg.orbit < static_cast<int>(f.dst.stabilizers.size()),
                "leg points to a missing target orbit");
        SparseZ blk = cs.covariant(OrbitMap{f.src.stabilizers[i],
                                            f.dst.stabilizers[static_cast<size_t>(leg.orbit)],
                                            leg.witness});
        detail::place_block(m, blk, doff[static_cast<size_t>(leg.orbit)], soff[i]);
    }
    return m;
}

/* matrix of the contravariant image of a G-set map */
inline SparseZ evaluate_contravariant(const CoefficientSystem& cs, const GSetMap& f) {
    require(f.legs.size() == f.src.stabilizers.size(), "one leg per source orbit required");
    long nsrc = 0, ndst = 0;
    std::vector<long> soff = detail::gset_offsets(cs, f.src, nsrc);
    std::vector<long> doff = detail::gset_offsets(cs, f.dst, ndst);
    SparseZ m(static_cast<int>(nsrc), static_cast<int>(ndst));
    for (size_t i = 0; i < f.legs.size(); ++i) {
        const auto& leg = f.legs[i];
        require(leg.orbit >= 0 && leg.orbit < static_cast<int>(f.dst.stabilizers.size()),
                "leg points to a missing target orbit");
        SparseZ blk = cs.contravariant(OrbitMap{f.src.stabilizers[i],
                                                f.dst.stabilizers[static_cast<size_t>(leg.orbit)],
                                                leg.witness});
        detail::place_block(m, blk, soff[i], doff[static_cast<size_t>(leg.orbit)]);
    }
    return m;
}

inline void require_same_gset(const FiniteGSet& a, const FiniteGSet& b, const char* what) {
    require(a.stabilizers.size() == b.stabilizers.size(), what);
    for (size_t i = 0; i < a.stabilizers.size(); ++i)
        require(a.stabilizers[i].same_group(b.stabilizers[i]), what);
}

/* apply a span src <- apex -> dst: contravariant along the left leg followed
 * by covariant along the right leg */
inline SparseZ span_apply(const CoefficientSystem& cs, const GSpan& sp) {
    require_same_gset(sp.left.src, sp.right.src, "span legs must share the apex");
    return evaluate_covariant(cs, sp.right) * evaluate_contravariant(cs, sp.left);
}

/* composite of spans via the fiber-product of their middle objects */
inline GSpan compose_spans(const GSpan& a, const GSpan& b) {
    require_same_gset(a.left.src, a.right.src, "span legs must share the apex");
    require_same_gset(b.left.src, b.right.src, "span legs must share the apex");
    require_same_gset(a.right.dst, b.left.dst, "spans must meet in the same middle G-set");

    GSpan out;
    out.left.dst = a.left.dst;
    out.right.dst = b.right.dst;

    std::vector<PermGroup> apex_stabs;
    for (size_t vi = 0; vi < a.left.src.stabilizers.size(); ++vi) {
        const auto& legT = a.right.legs[vi];
        for (size_t wi = 0; wi < b.left.src.stabilizers.size(); ++wi) {
            const auto& legT2 = b.left.legs[wi];
            if (legT.orbit != legT2.orbit) continue;
            const PermGroup& A = a.left.src.stabilizers[vi];
            const PermGroup& B = b.left.src.stabilizers[wi];
            const PermGroup& C = a.right.dst.stabilizers[static_cast<size_t>(legT.orbit)];
            const Permutation& alpha = legT.witness;
            const Permutation beta_inv = legT2.witness.inverse();

            // fiber points over this orbit pair: cosets y*B with y in alpha*C*beta^{-1}
            auto coset_key = [&B](const Permutation& y) {
                Permutation best = y * B.elements()[0];
                for (const auto& x : B.elements()) {
                    Permutation cand = y * x;
                    if (cand < best) best = cand;
                }
                return best;
            };
            std::map<Permutation, Permutation> rep_of;  // coset key -> representative
            for (const auto& c : C.elements()) {
                Permutation y = alpha * c * beta_inv;
                rep_of.emplace(coset_key(y), y);
            }
            // orbits of A acting on the left
            std::set<Permutation> seen;
            for (const auto& entry : rep_of) {
                if (seen.count(entry.first)) continue;
                std::vector<Permutation> queue{entry.first};
                seen.insert(entry.first);
                Permutation min_key = entry.first;
                while (!queue.empty()) {
                    Permutation k = queue.back();
                    queue.pop_back();
                    const Permutation& y = rep_of.at(k);
                    for (const auto& s : A.generators()) {
                        Permutation k2 = coset_key(s * y);
                        if (seen.insert(k2).second) {
                            queue.push_back(k2);
                            if (k2 < min_key) min_key = k2;
                        }
                    }
                }
                const Permutation& yr = rep_of.at(min_key);
                // stabilizer of the coset yr*B inside A
                Permutation yri = yr.inverse();
                std::vector<Permutation> stab_elems;
                for (const auto& x : A.elements())
                    if (B.contains(yri * x * yr)) stab_elems.push_back(x);
                PermGroup stab = PermGroup::from_elements(A.degree(), std::move(stab_elems));

                apex_stabs.push_back(stab);
                out.left.legs.push_back({a.left.legs[vi].orbit, a.left.legs[vi].witness});
                out.right.legs.push_back(
                    {b.right.legs[wi].orbit, yr * b.right.legs[wi].witness});
            }
        }
    }
    out.left.src.stabilizers = apex_stabs;
    out.right.src.stabilizers = std::move(apex_stabs);
    return out;
}

/* ------------------------------------------------------------------------
 * Mackey functors
 * --------------------------------------------------------------------- */

class MackeyFunctor {
  public:
    explicit MackeyFunctor(CoefficientSystem cs) : graded_(false) {
        pieces_.push_back(std::move(cs));
    }
    MackeyFunctor(std::vector<CoefficientSystem> pieces, bool graded)
        : pieces_(std::move(pieces)), graded_(graded) {
        require(!pieces_.empty(), "a Mackey functor needs at least one graded piece");
        for (const auto& p : pieces_) {
            require(p.table_ptr() == pieces_[0].table_ptr(),
                    "graded pieces must share one class table");
            require(p.locality() == pieces_[0].locality(),
                    "graded pieces must agree on locality");
        }
    }

    bool graded() const { return graded_; }
    int grades() const { return static_cast<int>(pieces_.size()); }
    const CoefficientSystem& piece(int b = 0) const {
        require(b >= 0 && b < grades(), "grade outside the stored window");
        return pieces_[static_cast<size_t>(b)];
    }
    const PermGroup& group() const { return pieces_[0].group(); }
    int locality() const { return pieces_[0].locality(); }

    FGAbGroup value(const PermGroup& d, int b = 0) const { return piece(b).value_of(d); }

    /* transfer along the projection G/h -> G/k (h <= k) */
    SparseZ tr(const PermGroup& h, const PermGroup& k, int b = 0) const {
        require(k.contains_group(h), "transfer needs nested subgroups");
        return piece(b).covariant(OrbitMap{h, k, Permutation::identity(group().degree())});
    }
    /* restriction along the same projection */
    SparseZ res(const PermGroup& h, const PermGroup& k, int b = 0) const {
        require(k.contains_group(h), "restriction needs nested subgroups");
        return piece(b).contravariant(OrbitMap{h, k, Permutation::identity(group().degree())});
    }
    /* conjugation self-map of G/d with witness g normalizing d */
    SparseZ conj(const PermGroup& d, const Permutation& g, int b = 0) const {
        require(witness_subconjugates(d, g, d), "conjugation witness must normalize the subgroup");
        return piece(b).covariant(OrbitMap{d, d, g});
    }

  private:
    std::vector<CoefficientSystem> pieces_;
    bool graded_ = false;
};

/* ------------------------------------------------------------------------
 * Constant coefficient systems
 * --------------------------------------------------------------------- */

namespace detail {

inline CoefficientSystem constant_on_table(const PermGroup& g,
                                           std::shared_ptr<SubgroupClassTable> table,
                                           const FGAbGroup& a, int locality) {
    long n = a.free_rank + static_cast<long>(a.torsion.size());
    auto vm = [a](int) { return a; };
    auto kernel = [n](int, int, const Permutation&) {
        return SparseZ::identity(static_cast<int>(n));
    };
    return CoefficientSystem(g, std::move(table), vm, kernel, kernel, locality);
}

}  // namespace detail

/* every value is A and every structure map is the identity */
inline CoefficientSystem constant_system(const PermGroup& g, const FGAbGroup& a,
                                         int locality = 0) {
    auto table = std::make_shared<SubgroupClassTable>(g);
    table->locate(PermGroup::trivial(g.degree()));
    table->locate(g);
    return detail::constant_on_table(g, table, a, locality);
}

/* graded constant family: A in grade zero, zero above */
inline std::vector<CoefficientSystem> constant_system_graded(const PermGroup& g,
                                                             const FGAbGroup& a, int grades,
                                                             int locality = 0) {
    require(grades >= 1, "graded constant family needs at least one grade");
    auto table = std::make_shared<SubgroupClassTable>(g);
    table->locate(PermGroup::trivial(g.degree()));
    table->locate(g);
    std::vector<CoefficientSystem> out;
    out.reserve(static_cast<size_t>(grades));
    out.push_back(detail::constant_on_table(g, table, a, locality));
    for (int b = 1; b < grades; ++b)
        out.push_back(detail::constant_on_table(g, table, FGAbGroup::zero(), locality));
    return out;
}

/* ------------------------------------------------------------------------
 * Fixed-point Mackey functors of a module over the group
 * --------------------------------------------------------------------- */

namespace detail {

struct FixedPointCore {
    GroupRingModule m;
    std::shared_ptr<SubgroupClassTable> table;
    std::map<int, SparseZ> basis;  // characteristic 0: saturated fixed lattice
    std::map<int, FpMat> basis_p;  // characteristic p: fixed subspace

    explicit FixedPointCore(GroupRingModule mm)
        : m(std::move(mm)), table(std::make_shared<SubgroupClassTable>(m.group())) {
        table->locate(PermGroup::trivial(m.group().degree()));
        table->locate(m.group());
    }

    void ensure(int cls) {
        if (m.characteristic() == 0 ? basis.count(cls) > 0 : basis_p.count(cls) > 0) return;
        const PermGroup& r = table->rep(cls);
        const auto gens = r.generators();
        int rank = m.rank();
        if (m.characteristic() == 0) {
            if (gens.empty()) {
                basis.emplace(cls, SparseZ::identity(rank));
                return;
            }
            SparseZ stack(rank * static_cast<int>(gens.size()), rank);
            for (size_t gi = 0; gi < gens.size(); ++gi) {
                SparseZ d = m.act(gens[gi]) - SparseZ::identity(rank);
                for (int rr = 0; rr < rank; ++rr)
                    for (const auto& [c, v] : d.row(rr))
                        stack.set(static_cast<int>(gi) * rank + rr, c, v);
            }
            basis.emplace(cls, kernel_lattice(stack));
        } else {
            const int p = m.characteristic();
            if (gens.empty()) {
                basis_p.emplace(cls, FpMat::identity(p, rank));
                return;
            }
            FpMat stack(p, rank * static_cast<int>(gens.size()), rank);
            for (size_t gi = 0; gi < gens.size(); ++gi) {
                FpMat d = FpMat::from_sparse(m.act(gens[gi]), p);
                for (int rr = 0; rr < rank; ++rr)
                    for (int c = 0; c < rank; ++c) {
                        int v = d(rr, c) - (rr == c ? 1 : 0);
                        stack(static_cast<int>(gi) * rank + rr, c) = ((v % p) + p) % p;
                    }
            }
            basis_p.emplace(cls, fp_nullspace(stack));
        }
    }

    long dim(int cls) {
        ensure(cls);
        return m.characteristic() == 0 ? basis.at(cls).cols() : basis_p.at(cls).cols();
    }

    /* express the columns of img in the fixed basis of class cls */
    SparseZ express(int cls, const SparseZ& img) {
        const SparseZ& b = basis.at(cls);
        ZSolver solver(b);
        SparseZ x(b.cols(), img.cols());
        for (int j = 0; j < img.cols(); ++j) {
            std::vector<mpz_class> col(static_cast<size_t>(img.rows()));
            for (int rr = 0; rr < img.rows(); ++rr) col[static_cast<size_t>(rr)] = img.get(rr, j);
            auto sol = solver.solve(col);
            check(sol.has_value(), "image left the saturated fixed lattice");
            for (int rr = 0; rr < b.cols(); ++rr) x.set(rr, j, (*sol)[static_cast<size_t>(rr)]);
        }
        return x;
    }

    /* covariant map: v |-> sum over cosets k(w^{-1} R_i w) in R_j of (k w^{-1}) v */
    SparseZ cov(int i, int j, const Permutation& w) {
        ensure(i);
        ensure(j);
        const PermGroup& rj = table->rep(j);
        PermGroup dprime = conjugate_subgroup(table->rep(i), w);
        CosetTable ct = left_cosets(rj, dprime);
        Permutation wi = w.inverse();
        if (m.characteristic() == 0) {
            SparseZ acc(m.rank(), basis.at(i).cols());
            for (const auto& k : ct.reps) acc = sparse_sum(acc, m.act(k * wi) * basis.at(i));
            return express(j, acc);
        }
        const int p = m.characteristic();
        FpMat acc(p, m.rank(), basis_p.at(i).cols());
        for (const auto& k : ct.reps)
            acc = acc + FpMat::from_sparse(m.act(k * wi), p) * basis_p.at(i);
        auto x = fp_solve(basis_p.at(j), acc);
        check(x.has_value(), "image left the fixed subspace");
        return x->to_sparse();
    }

    /* contravariant map: v |-> w v */
    SparseZ contra(int i, int j, const Permutation& w) {
        ensure(i);
        ensure(j);
        if (m.characteristic() == 0) return express(i, m.act(w) * basis.at(j));
        const int p = m.characteristic();
        FpMat img = FpMat::from_sparse(m.act(w), p) * basis_p.at(j);
        auto x = fp_solve(basis_p.at(i), img);
        check(x.has_value(), "image left the fixed subspace");
        return x->to_sparse();
    }
};

}  // namespace detail

/* Fixed points D |-> M^D of a module M over the group, with transfers given
 * by coset sums.  The report locality defaults to the module's convention;
 * pass an explicit 0 to treat integral values without localization. */
inline MackeyFunctor fixed_point_mackey(const GroupRingModule& m,
                                        std::optional<int> locality = std::nullopt) {
    int loc = locality ? *locality
                       : (m.characteristic() == 0 ? m.report_prime() : m.characteristic());
    auto core = std::make_shared<detail::FixedPointCore>(m);
    auto vm = [core](int cls) {
        long d = core->dim(cls);
        return core->m.characteristic() == 0 ? FGAbGroup::free(d)
                                             : fp_vector_group(core->m.characteristic(), d);
    };
    auto cov = [core](int i, int j, const Permutation& w) { return core->cov(i, j, w); };
    auto contra = [core](int i, int j, const Permutation& w) { return core->contra(i, j, w); };
    return MackeyFunctor(
        CoefficientSystem(m.group(), core->table, vm, cov, contra, loc));
}

/* ------------------------------------------------------------------------
 * Homotopy-orbit coefficients of twisted sphere models
 * --------------------------------------------------------------------- */

namespace detail {

struct BorelCore {
    int n, p, j, bmax, topdim, length;
    PermGroup g;
    std::shared_ptr<SubgroupClassTable> table;
    std::vector<int> chi;                // degree character, indexed by g element index
    std::vector<FreeResolution> res;     // per class
    std::vector<FpChainComplex> vcx;     // per class: character-collapsed complex
    std::vector<FpContraction> ctr;      // per class
    // lifts keyed by (source class, target class, conjugator index, restricted flag)
    std::map<std::tuple<int, int, int, bool>, std::vector<FpMat>> lifts;

    BorelCore(int nn, int pp, int jj, int bb) : n(nn), p(pp), j(jj), bmax(bb) {
        require(n >= 1, "need at least one letter");
        require(p >= 2 && is_prime_small(p), "coefficient prime required");
        require(jj >= 1, "twist exponent must be positive");
        require(bmax >= 0, "degree window must be nonnegative");
        require(j % 2 == 1 || p == 2, "even twists need the even prime");
        require_capacity(j, 1, "sphere twist exponent");
        require_capacity(n, 4, "homotopy-orbit coefficients: symmetric degree");
        require_capacity(bmax, 8, "homotopy-orbit coefficients: degree window");

        g = PermGroup::symmetric(n);
        topdim = n * j;
        length = std::max(1, bmax - topdim + 1);
        table = std::make_shared<SubgroupClassTable>(g);
        table->populate_all_subgroups();
        compute_character();
        int nc = table->count();
        res.reserve(static_cast<size_t>(nc));
        vcx.resize(static_cast<size_t>(nc));
        ctr.resize(static_cast<size_t>(nc));
        for (int cls = 0; cls < nc; ++cls) {
            res.push_back(free_resolution_over_group_algebra(table->rep(cls), p, length));
            build_vcomplex(cls);
        }
    }

    /* scalar action of each group element on the single top homology class
     * of the sphere model */
    void compute_character() {
        GComplex sphere = sphere_model(n, j);
        check(sphere.dimension() == topdim, "sphere model has the wrong dimension");
        FpChainComplex cc = sphere.chain_complex_mod(p, true);
        FpMat z = fp_nullspace(cc.boundary(topdim));
        check(z.cols() == 1, "top homology of the sphere model must be one-dimensional");
        int nt = cc.dim(topdim);
        int c0 = -1;
        for (int r = 0; r < nt; ++r)
            if (z(r, 0) != 0) {
                c0 = r;
                break;
            }
        check(c0 >= 0, "top cycle vanished");

        chi.assign(static_cast<size_t>(g.order()), 1);
        for (size_t ui = 0; ui < g.elements().size(); ++ui) {
            const Permutation& u = g.elements()[ui];
            // simplices are stored as poset chains, so the action permutes the
            // basis without orientation signs; degrees show up through z itself
            std::vector<int> img(static_cast<size_t>(nt), 0);
            for (int s = 0; s < nt; ++s) {
                if (z(s, 0) == 0) continue;
                std::vector<int> verts = sphere.act_simplex(u, sphere.simplex(topdim, s));
                int t = sphere.index_of(topdim, verts);
                check(t >= 0, "group action left the simplex set");
                img[static_cast<size_t>(t)] = (img[static_cast<size_t>(t)] + z(s, 0)) % p;
            }
            int lam = (img[static_cast<size_t>(c0)] * fp_inv_scalar(z(c0, 0), p)) % p;
            check(lam > 0, "degree character must be invertible");
            for (int r = 0; r < nt; ++r)
                check(img[static_cast<size_t>(r)] == (lam * z(r, 0)) % p,
                      "top class is not an eigenvector of the action");
            chi[ui] = lam;
        }
        // multiplicativity
        for (size_t a2 = 0; a2 < g.elements().size(); ++a2)
            for (size_t b2 = 0; b2 < g.elements().size(); ++b2) {
                int ab = g.element_index(g.elements()[a2] * g.elements()[b2]);
                check(chi[static_cast<size_t>(ab)] == (chi[a2] * chi[b2]) % p,
                      "degree character fails multiplicativity");
            }
    }

    int chi_of(const Permutation& x) const {
        int i = g.element_index(x);
        check(i >= 0, "character argument left the group");
        return chi[static_cast<size_t>(i)];
    }

    /* collapse the free resolution of class cls along the degree character */
    void build_vcomplex(int cls) {
        const FreeResolution& R = res[static_cast<size_t>(cls)];
        const PermGroup& h = table->rep(cls);
        int nh = static_cast<int>(h.order());
        int e_idx = h.element_index(Permutation::identity(g.degree()));
        std::vector<int> dims(R.ranks.begin(), R.ranks.end());
        FpChainComplex vc(p, dims);
        // inverse-character weights per element of h
        std::vector<int> wgt(static_cast<size_t>(nh));
        for (int u = 0; u < nh; ++u)
            wgt[static_cast<size_t>(u)] =
                fp_inv_scalar(chi_of(h.elements()[static_cast<size_t>(u)]), p);
        for (int i = 1; i <= static_cast<int>(R.ranks.size()) - 1; ++i) {
            const FpMat& B = R.boundary[static_cast<size_t>(i)];
            FpMat b(p, R.ranks[static_cast<size_t>(i - 1)], R.ranks[static_cast<size_t>(i)]);
            for (int t = 0; t < R.ranks[static_cast<size_t>(i)]; ++t) {
                int colidx = t * nh + e_idx;
                for (int rr = 0; rr < B.rows(); ++rr) {
                    int v = B(rr, colidx);
                    if (v == 0) continue;
                    int tprime = rr / nh, uprime = rr % nh;
                    b(tprime, t) = (b(tprime, t) + v * wgt[static_cast<size_t>(uprime)]) % p;
                }
            }
            vc.bnd[static_cast<size_t>(i)] = std::move(b);
        }
        check(vc.boundary_squares_to_zero(), "character collapse broke the differential");
        vcx[static_cast<size_t>(cls)] = vc;
        ctr[static_cast<size_t>(cls)] = contract_fp_complex(vc);
    }

    long dim(int cls, int b) const {
        int deg = b - topdim;
        if (deg < 0 || deg >= length) return 0;
        return ctr[static_cast<size_t>(cls)].hdim[static_cast<size_t>(deg)];
    }

    /* Equivariant chain lift L: F(src) -> F(dst) over the subgroup `acting`
     * of rep(src), intertwining a |-> c^{-1} a c into rep(dst) and lifting
     * the identity of F_p through the augmentations.  Any choice of lift
     * induces the same maps on homology; this one is deterministic. */
    const std::vector<FpMat>& lift_for(int src_cls, int dst_cls, const PermGroup& acting,
                                       const Permutation& c, bool restricted) {
        int cidx = g.element_index(c);
        check(cidx >= 0, "conjugator left the group");
        auto key = std::make_tuple(src_cls, dst_cls, cidx, restricted);
        auto it = lifts.find(key);
        if (it != lifts.end()) return it->second;

        const FreeResolution& S = res[static_cast<size_t>(src_cls)];
        const FreeResolution& D = res[static_cast<size_t>(dst_cls)];
        const PermGroup& H = table->rep(src_cls);
        const PermGroup& K = table->rep(dst_cls);
        int nh = static_cast<int>(H.order());
        int nk = static_cast<int>(K.order());
        Permutation ci = c.inverse();
        int eK = K.element_index(Permutation::identity(g.degree()));
        check(eK >= 0, "identity missing from a class representative");

        // decompose H into right cosets acting*v (generators of the
        // restricted free structure)
        std::vector<int> acoset_of(static_cast<size_t>(nh), -1);
        std::vector<Permutation> areps;
        std::vector<int> aelt_of;  // element index of each coset representative
        for (int vi = 0; vi < nh; ++vi) {
            if (acoset_of[static_cast<size_t>(vi)] >= 0) continue;
            int id = static_cast<int>(areps.size());
            const Permutation& v = H.elements()[static_cast<size_t>(vi)];
            areps.push_back(v);
            aelt_of.push_back(vi);
            for (const auto& a : acting.elements())
                acoset_of[static_cast<size_t>(H.element_index(a * v))] = id;
        }
        int narep = static_cast<int>(areps.size());

        std::vector<FpMat> L(static_cast<size_t>(length) + 1);
        std::vector<FpMat> gencols(static_cast<size_t>(length) + 1);
        for (int deg = 0; deg <= length; ++deg) {
            int srank = S.ranks[static_cast<size_t>(deg)];
            int drank = D.ranks[static_cast<size_t>(deg)];
            int ngen = srank * narep;
            FpMat gc(p, drank * nk, ngen);
            if (deg == 0) {
                // every target basis vector has augmentation one; send each
                // generator to the identity-translate of target generator 0
                for (int col = 0; col < ngen; ++col) gc(eK, col) = 1;
            } else {
                // right-hand sides: L_{deg-1} applied to source boundaries of
                // the generator columns
                const FpMat& sb = S.boundary[static_cast<size_t>(deg)];
                FpMat rhs_in(p, S.ranks[static_cast<size_t>(deg - 1)] * nh, ngen);
                for (int t = 0; t < srank; ++t)
                    for (int vc2 = 0; vc2 < narep; ++vc2) {
                        int scol = t * nh + aelt_of[static_cast<size_t>(vc2)];
                        int gcol = t * narep + vc2;
                        for (int rr = 0; rr < rhs_in.rows(); ++rr)
                            rhs_in(rr, gcol) = sb(rr, scol);
                    }
                FpMat rhs = L[static_cast<size_t>(deg - 1)] * rhs_in;
                const FpMat& db = D.boundary[static_cast<size_t>(deg)];
                auto sol = fp_solve(db, rhs);
                check(sol.has_value(), "resolution comparison failed to lift");
                gc = *sol;
            }
            gencols[static_cast<size_t>(deg)] = gc;
            // extend to all columns by equivariance: column (t, v) with
            // v = a * v_c is the (c^{-1} a c)-translate of column (t, v_c)
            FpMat full(p, drank * nk, srank * nh);
            for (int t = 0; t < srank; ++t)
                for (int vi = 0; vi < nh; ++vi) {
                    const Permutation& v = H.elements()[static_cast<size_t>(vi)];
                    int cid = acoset_of[static_cast<size_t>(vi)];
                    Permutation a = v * areps[static_cast<size_t>(cid)].inverse();
                    Permutation ma = ci * a * c;
                    check(K.contains(ma), "conjugated translate left the target group");
                    std::vector<int> img = free_module_translation(K, ma, drank);
                    int gcol = t * narep + cid;
                    int fcol = t * nh + vi;
                    for (int rr = 0; rr < drank * nk; ++rr) {
                        int val = gc(rr, gcol);
                        if (val != 0) full(img[static_cast<size_t>(rr)], fcol) = val;
                    }
                }
            L[static_cast<size_t>(deg)] = std::move(full);
        }
        // spot-check chain compatibility on one translated column per degree
        for (int deg = 1; deg <= length; ++deg) {
            const FpMat& sb = S.boundary[static_cast<size_t>(deg)];
            const FpMat& db = D.boundary[static_cast<size_t>(deg)];
            FpMat lhs = L[static_cast<size_t>(deg - 1)] * sb;
            FpMat rhs = db * L[static_cast<size_t>(deg)];
            int colcheck = std::min(sb.cols() - 1, nh - 1);
            if (colcheck >= 0) {
                for (int rr = 0; rr < lhs.rows(); ++rr)
                    check(lhs(rr, colcheck) == rhs(rr, colcheck),
                          "equivariant extension broke the chain condition");
            }
        }
        return lifts.emplace(key, std::move(L)).first->second;
    }

    /* chain-level matrix of the covariant map on collapsed complexes */
    FpMat vmap_cov(int icls, int jcls, const Permutation& w, int deg) {
        const PermGroup& ri = table->rep(icls);
        const PermGroup& rj = table->rep(jcls);
        const auto& L = lift_for(icls, jcls, ri, w, false);
        const FpMat& Li = L[static_cast<size_t>(deg)];
        int nh = static_cast<int>(ri.order());
        int nk = static_cast<int>(rj.order());
        int eH = ri.element_index(Permutation::identity(g.degree()));
        int si = res[static_cast<size_t>(icls)].ranks[static_cast<size_t>(deg)];
        int sj = res[static_cast<size_t>(jcls)].ranks[static_cast<size_t>(deg)];
        Permutation wi = w.inverse();
        FpMat out(p, sj, si);
        for (int t = 0; t < si; ++t) {
            int col = t * nh + eH;
            for (int tp = 0; tp < sj; ++tp)
                for (int u = 0; u < nk; ++u) {
                    int v = Li(tp * nk + u, col);
                    if (v == 0) continue;
                    int weight =
                        chi_of((rj.elements()[static_cast<size_t>(u)]).inverse() * wi);
                    out(tp, t) = (out(tp, t) + v * weight) % p;
                }
        }
        return out;
    }

    /* chain-level matrix of the contravariant (coset-sum) map */
    FpMat vmap_contra(int icls, int jcls, const Permutation& w, int deg) {
        const PermGroup& ri = table->rep(icls);
        const PermGroup& rj = table->rep(jcls);
        PermGroup dprime = conjugate_subgroup(ri, w);
        const auto& L = lift_for(jcls, icls, dprime, w.inverse(), true);
        const FpMat& Li = L[static_cast<size_t>(deg)];
        int nh = static_cast<int>(ri.order());
        int nk = static_cast<int>(rj.order());
        int si = res[static_cast<size_t>(icls)].ranks[static_cast<size_t>(deg)];
        int sj = res[static_cast<size_t>(jcls)].ranks[static_cast<size_t>(deg)];
        CosetTable ct = left_cosets(rj, dprime);
        FpMat out(p, si, sj);
        for (const auto& k : ct.reps) {
            int kinv = rj.element_index(k.inverse());
            check(kinv >= 0, "coset representative left the group");
            Permutation wk = w * k.inverse();
            for (int tp = 0; tp < sj; ++tp) {
                int col = tp * nk + kinv;
                for (int t = 0; t < si; ++t)
                    for (int u = 0; u < nh; ++u) {
                        int v = Li(t * nh + u, col);
                        if (v == 0) continue;
                        int weight =
                            chi_of((ri.elements()[static_cast<size_t>(u)]).inverse() * wk);
                        out(t, tp) = (out(t, tp) + v * weight) % p;
                    }
            }
        }
        return out;
    }

    SparseZ cov(int icls, int jcls, const Permutation& w, int b) {
        int deg = b - topdim;
        if (deg < 0 || deg >= length)
            return SparseZ(static_cast<int>(dim(jcls, b)), static_cast<int>(dim(icls, b)));
        const FpContraction& cj = ctr[static_cast<size_t>(jcls)];
        const FpContraction& ci2 = ctr[static_cast<size_t>(icls)];
        FpMat m = cj.proj[static_cast<size_t>(deg)] * vmap_cov(icls, jcls, w, deg) *
                  ci2.inc[static_cast<size_t>(deg)];
        return m.to_sparse();
    }

    SparseZ contra(int icls, int jcls, const Permutation& w, int b) {
        int deg = b - topdim;
        if (deg < 0 || deg >= length)
            return SparseZ(static_cast<int>(dim(icls, b)), static_cast<int>(dim(jcls, b)));
        const FpContraction& cj = ctr[static_cast<size_t>(jcls)];
        const FpContraction& ci2 = ctr[static_cast<size_t>(icls)];
        FpMat m = ci2.proj[static_cast<size_t>(deg)] * vmap_contra(icls, jcls, w, deg) *
                  cj.inc[static_cast<size_t>(deg)];
        return m.to_sparse();
    }
};

}  // namespace detail

/* Graded coefficients Gamma_b(G/D) of the D-homotopy-orbit chains of the
 * n-fold smash of a j-sphere, with its symmetric-group action, over F_p. */
inline MackeyFunctor borel_mackey(int n, int p, int j, int b_max) {
    auto core = std::make_shared<detail::BorelCore>(n, p, j, b_max);
    std::vector<CoefficientSystem> pieces;
    pieces.reserve(static_cast<size_t>(b_max) + 1);
    for (int b = 0; b <= b_max; ++b) {
        auto vm = [core, b](int cls) { return fp_vector_group(core->p, core->dim(cls, b)); };
        auto cov = [core, b](int i, int jj, const Permutation& w) {
            return core->cov(i, jj, w, b);
        };
        auto contra = [core, b](int i, int jj, const Permutation& w) {
            return core->contra(i, jj, w, b);
        };
        pieces.emplace_back(core->g, core->table, vm, cov, contra, p);
    }
    return MackeyFunctor(std::move(pieces), true);
}

/* ------------------------------------------------------------------------
 * Verification routines
 * --------------------------------------------------------------------- */

/* invertibility of an endomorphism matrix on a value group, over Z when
 * locality is 0 and over the locality-local integers otherwise */
inline bool is_invertible_endomorphism(const SparseZ& x, const FGAbGroup& value, int locality) {
    long n = value.free_rank + static_cast<long>(value.torsion.size());
    require(x.rows() == n && x.cols() == n, "endomorphism shape mismatch");
    if (n == 0) return true;
    SparseZ rel(static_cast<int>(n), static_cast<int>(value.torsion.size()));
    for (size_t t = 0; t < value.torsion.size(); ++t)
        rel.set(static_cast<int>(value.free_rank + static_cast<long>(t)), static_cast<int>(t),
                value.torsion[t]);
    PresentedAb pres(static_cast<int>(n), rel);
    if (locality > 0) return is_p_local_iso(x, pres, pres, locality);
    return well_defined_map(x, pres, pres) && cokernel_presented(x, pres).is_zero() &&
           kernel_presented(x, pres, pres).is_zero();
}

namespace detail {

struct MapDesc {
    int i = -1, j = -1;
    Permutation w;
};

/* minimal witness embedding class i into class j, when one exists */
inline std::optional<Permutation> canonical_class_witness(const PermGroup& g,
                                                          const SubgroupClassTable& tab, int i,
                                                          int j) {
    for (const auto& x : g.elements())
        if (witness_subconjugates(tab.rep(i), x, tab.rep(j))) return x;
    return std::nullopt;
}

/* double cosets J x H inside K, with per-coset intersection data */
struct DoubleCosetTerm {
    Permutation rep;
    PermGroup l;  // J cap rep H rep^{-1}
    PermGroup a;  // rep^{-1} J rep cap H
};

inline std::vector<DoubleCosetTerm> double_coset_terms(const PermGroup& k, const PermGroup& jgrp,
                                                       const PermGroup& hgrp) {
    const auto& elems = k.elements();
    std::vector<char> visited(elems.size(), 0);
    std::vector<DoubleCosetTerm> out;
    for (size_t start = 0; start < elems.size(); ++start) {
        if (visited[start]) continue;
        // orbit of elems[start] under left J- and right H-multiplication
        std::vector<int> queue{static_cast<int>(start)};
        visited[start] = 1;
        int min_idx = static_cast<int>(start);
        while (!queue.empty()) {
            int cur = queue.back();
            queue.pop_back();
            const Permutation& x = elems[static_cast<size_t>(cur)];
            auto push = [&](const Permutation& y) {
                int idx = k.element_index(y);
                check(idx >= 0, "double coset left the group");
                if (!visited[static_cast<size_t>(idx)]) {
                    visited[static_cast<size_t>(idx)] = 1;
                    queue.push_back(idx);
                    if (idx < min_idx) min_idx = idx;
                }
            };
            for (const auto& s : jgrp.generators()) push(s * x);
            for (const auto& s : hgrp.generators()) push(x * s);
        }
        DoubleCosetTerm term;
        term.rep = elems[static_cast<size_t>(min_idx)];
        Permutation gi = term.rep.inverse();
        std::vector<Permutation> lelems, aelems;
        for (const auto& x : jgrp.elements())
            if (hgrp.contains(gi * x * term.rep)) lelems.push_back(x);
        for (const auto& x : hgrp.elements())
            if (jgrp.contains(term.rep * x * gi)) aelems.push_back(x);
        term.l = PermGroup::from_elements(k.degree(), std::move(lelems));
        term.a = PermGroup::from_elements(k.degree(), std::move(aelems));
        out.push_back(std::move(term));
    }
    return out;
}

}  // namespace detail

/* Structural axioms: functoriality of both variances, triviality of inner
 * automorphisms, orbitwise additivity, conjugation coherence, and the double
 * coset relation over all class triples. */
inline VerificationReport check_mackey_axioms(const MackeyFunctor& mf) {
    VerificationReport rep("Mackey functor axioms");
    const PermGroup& g = mf.group();
    SubgroupClassTable& tab = mf.piece(0).table();
    Permutation id = Permutation::identity(g.degree());
    int nc = tab.count();

    // grade-independent combinatorics
    std::vector<std::vector<std::optional<Permutation>>> wit(
        static_cast<size_t>(nc), std::vector<std::optional<Permutation>>(static_cast<size_t>(nc)));
    for (int i = 0; i < nc; ++i)
        for (int j2 = 0; j2 < nc; ++j2)
            wit[static_cast<size_t>(i)][static_cast<size_t>(j2)] =
                detail::canonical_class_witness(g, tab, i, j2);

    std::vector<detail::MapDesc> corpus;
    for (int i = 0; i < nc; ++i)
        for (int j2 = 0; j2 < nc; ++j2)
            if (i != j2 && wit[static_cast<size_t>(i)][static_cast<size_t>(j2)])
                corpus.push_back({i, j2, *wit[static_cast<size_t>(i)][static_cast<size_t>(j2)]});
    for (int i = 0; i < nc; ++i) {
        PermGroup norm = g.normalizer(tab.rep(i));
        for (const auto& ngen : norm.generators()) corpus.push_back({i, i, ngen});
    }

    struct DcCase {
        int k, i, j;
        PermGroup hp, jp;
        std::vector<detail::DoubleCosetTerm> terms;
    };
    std::vector<DcCase> dc_cases;
    for (int k = 0; k < nc; ++k) {
        const PermGroup& rk = tab.rep(k);
        for (int i = 0; i < nc; ++i) {
            if (!wit[static_cast<size_t>(i)][static_cast<size_t>(k)]) continue;
            PermGroup hp = detail::conjugate_subgroup(
                tab.rep(i), *wit[static_cast<size_t>(i)][static_cast<size_t>(k)]);
            for (int j2 = 0; j2 < nc; ++j2) {
                if (!wit[static_cast<size_t>(j2)][static_cast<size_t>(k)]) continue;
                PermGroup jp = detail::conjugate_subgroup(
                    tab.rep(j2), *wit[static_cast<size_t>(j2)][static_cast<size_t>(k)]);
                dc_cases.push_back({k, i, j2, hp, jp, detail::double_coset_terms(rk, jp, hp)});
            }
        }
    }

    for (int b = 0; b < mf.grades(); ++b) {
        const CoefficientSystem& cs = mf.piece(b);
        std::string sfx = mf.graded() ? " [b=" + std::to_string(b) + "]" : "";
        auto modulus = [&](int cls) { return detail::matrix_modulus(cs.value(cls)); };

        {  // inner automorphisms act trivially
            bool ok = true;
            std::string det;
            for (int i = 0; i < nc && ok; ++i) {
                SparseZ ident = SparseZ::identity(static_cast<int>(cs.gens(i)));
                for (const auto& s : tab.rep(i).generators()) {
                    SparseZ m = cs.covariant(OrbitMap{tab.rep(i), tab.rep(i), s});
                    if (!detail::sparse_equal(m, ident, modulus(i))) {
                        ok = false;
                        det = "class " + tab.label(i) + ", element " + s.to_cycle_string();
                        break;
                    }
                }
            }
            rep.add("inner automorphisms act trivially" + sfx, ok, det);
        }

        {  // functoriality on composable pairs from the corpus
            bool okc = true, okx = true;
            std::string detc, detx;
            long tested = 0;
            for (const auto& f1 : corpus)
                for (const auto& f2 : corpus) {
                    if (f1.j != f2.i) continue;
                    ++tested;
                    OrbitMap m1{tab.rep(f1.i), tab.rep(f1.j), f1.w};
                    OrbitMap m2{tab.rep(f2.i), tab.rep(f2.j), f2.w};
                    OrbitMap m12{tab.rep(f1.i), tab.rep(f2.j), f1.w * f2.w};
                    if (okc &&
                        !detail::sparse_equal(cs.covariant(m12),
                                              cs.covariant(m2) * cs.covariant(m1),
                                              modulus(f2.j))) {
                        okc = false;
                        detc = "classes " + tab.label(f1.i) + " -> " + tab.label(f1.j) + " -> " +
                               tab.label(f2.j);
                    }
                    if (okx &&
                        !detail::sparse_equal(cs.contravariant(m12),
                                              cs.contravariant(m1) * cs.contravariant(m2),
                                              modulus(f1.i))) {
                        okx = false;
                        detx = "classes " + tab.label(f1.i) + " -> " + tab.label(f1.j) + " -> " +
                               tab.label(f2.j);
                    }
                }
            rep.add("covariant functoriality (" + std::to_string(tested) + " pairs)" + sfx, okc,
                    detc);
            rep.add("contravariant functoriality (" + std::to_string(tested) + " pairs)" + sfx,
                    okx, detx);
        }

        {  // additivity over a two-orbit set (definitional; recorded)
            bool ok = true;
            std::string det;
            tab.locate(g);  // ensure the full group is present
            int pairs = std::min(nc, 3);
            for (int i = 0; i < pairs && ok; ++i)
                for (int j2 = 0; j2 < pairs && ok; ++j2) {
                    FiniteGSet s{{tab.rep(i), tab.rep(j2)}};
                    FGAbGroup whole = evaluate(cs, s);
                    FGAbGroup expect =
                        detail::direct_sum_groups({cs.value(i), cs.value(j2)});
                    if (whole != expect) {
                        ok = false;
                        det = "classes " + tab.label(i) + ", " + tab.label(j2);
                        break;
                    }
                    GSetMap fold{s, FiniteGSet{{g}}, {{0, id}, {0, id}}};
                    SparseZ m = evaluate_covariant(cs, fold);
                    SparseZ lhs = cs.covariant(OrbitMap{tab.rep(i), g, id});
                    SparseZ rhs = cs.covariant(OrbitMap{tab.rep(j2), g, id});
                    if (!detail::sparse_equal(m, SparseZ::hconcat(lhs, rhs),
                                              modulus(tab.locate(g).cls))) {
                        ok = false;
                        det = "fold of " + tab.label(i) + ", " + tab.label(j2);
                    }
                }
            rep.add("additivity over orbit decompositions" + sfx, ok, det);
        }

        {  // conjugation coherence
            bool ok = true;
            std::string det;
            for (int i = 0; i < nc && ok; ++i) {
                auto ngens = g.normalizer(tab.rep(i)).generators();
                for (const auto& n1 : ngens) {
                    OrbitMap f1{tab.rep(i), tab.rep(i), n1};
                    OrbitMap f1inv{tab.rep(i), tab.rep(i), n1.inverse()};
                    if (!detail::sparse_equal(cs.contravariant(f1), cs.covariant(f1inv),
                                              modulus(i))) {
                        ok = false;
                        det = "class " + tab.label(i) + ", witness " + n1.to_cycle_string();
                        break;
                    }
                    for (const auto& n2 : ngens) {
                        OrbitMap f2{tab.rep(i), tab.rep(i), n2};
                        OrbitMap f12{tab.rep(i), tab.rep(i), n1 * n2};
                        if (!detail::sparse_equal(cs.covariant(f12),
                                                  cs.covariant(f2) * cs.covariant(f1),
                                                  modulus(i))) {
                            ok = false;
                            det = "class " + tab.label(i);
                            break;
                        }
                    }
                    if (!ok) break;
                }
            }
            rep.add("conjugation coherence" + sfx, ok, det);
        }

        {  // double coset relation
            bool ok = true;
            std::string det;
            for (const auto& dc : dc_cases) {
                const PermGroup& rk = tab.rep(dc.k);
                SparseZ lhs = cs.contravariant(OrbitMap{dc.jp, rk, id}) *
                              cs.covariant(OrbitMap{dc.hp, rk, id});
                SparseZ rhs(lhs.rows(), lhs.cols());
                for (const auto& term : dc.terms) {
                    SparseZ part = cs.covariant(OrbitMap{term.l, dc.jp, id}) *
                                   cs.covariant(OrbitMap{term.a, term.l, term.rep.inverse()}) *
                                   cs.contravariant(OrbitMap{term.a, dc.hp, id});
                    rhs = detail::sparse_sum(rhs, part);
                }
                if (!detail::sparse_equal(lhs, rhs, modulus(dc.j))) {
                    ok = false;
                    det = "K=" + tab.label(dc.k) + " H=" + tab.label(dc.i) +
                          " J=" + tab.label(dc.j);
                    break;
                }
            }
            rep.add("double coset formula (" + std::to_string(dc_cases.size()) + " class triples)" +
                        sfx,
                    ok, det);
        }
    }
    return rep;
}

/* Local constraint survey: reports the sufficient condition (cohomological
 * plus p-locally valued) and a bounded search over spans S <- S -> T with T
 * transitive, fibers prime to p, and |S| bounded.  The overall verdict is
 * the conjunction of both routes. */
inline VerificationReport check_p_constrained(const MackeyFunctor& mf, int p,
                                              long size_bound = 0) {
    require(detail::is_prime_small(p), "constraint prime must be prime");
    VerificationReport rep("p-local constraint survey");
    const PermGroup& g = mf.group();
    SubgroupClassTable& tab = mf.piece(0).table();
    Permutation id = Permutation::identity(g.degree());
    if (size_bound <= 0) size_bound = 3L * g.degree();
    int nc = tab.count();

    {  // route one, part one: values are p-local
        bool ok = mf.locality() == p;
        std::string det = ok ? "" : "declared locality is not the survey prime";
        for (int b = 0; b < mf.grades() && ok; ++b)
            for (int i = 0; i < nc && ok; ++i) {
                const FGAbGroup& v = mf.piece(b).value(i);
                for (const auto& d : v.torsion) {
                    mpz_class rest = d;
                    while (rest % p == 0) rest /= p;
                    if (rest != 1) {
                        ok = false;
                        det = "class " + tab.label(i) + " has torsion prime to " +
                              std::to_string(p);
                        break;
                    }
                }
            }
        rep.add("values are p-local", ok, det);
    }

    {  // route one, part two: transfer after restriction is the index
        bool ok = true;
        std::string det;
        for (int k = 0; k < nc && ok; ++k) {
            const PermGroup& rk = tab.rep(k);
            for (int i = 0; i < nc && ok; ++i) {
                auto w = detail::canonical_class_witness(g, tab, i, k);
                if (!w) continue;
                PermGroup hp = detail::conjugate_subgroup(tab.rep(i), *w);
                long index = rk.order() / hp.order();
                for (int b = 0; b < mf.grades(); ++b) {
                    const CoefficientSystem& cs = mf.piece(b);
                    SparseZ m = cs.covariant(OrbitMap{hp, rk, id}) *
                                cs.contravariant(OrbitMap{hp, rk, id});
                    SparseZ expect = detail::scaled_identity(cs.gens(k), index);
                    if (!detail::sparse_equal(m, expect,
                                              detail::matrix_modulus(cs.value(k)))) {
                        ok = false;
                        det = "pair " + tab.label(i) + " <= " + tab.label(k) + " at grade " +
                              std::to_string(b);
                        break;
                    }
                }
            }
        }
        rep.add("transfer after restriction is the index (cohomological)", ok, det);
    }

    bool sufficient = rep.pass();
    rep.add("sufficient condition (cohomological and p-locally valued)", sufficient, "");

    {  // route two: bounded search over spans
        bool ok = true;
        std::string det;
        long tested = 0;
        for (int k = 0; k < nc && ok; ++k) {
            const PermGroup& rk = tab.rep(k);
            // distinct subgroups of the target stabilizer
            std::vector<PermGroup> subs;
            for (const auto& bits : detail::all_subgroups_of_small(rk))
                subs.push_back(group_from_bits(rk, bits));
            std::sort(subs.begin(), subs.end(), [&](const PermGroup& x, const PermGroup& y) {
                if (x.order() != y.order()) return x.order() > y.order();
                return x.elements() < y.elements();
            });
            // span composites depend only on the subgroup, one per grade
            std::vector<std::vector<SparseZ>> composite(subs.size());
            std::vector<long> weight(subs.size()), fiber(subs.size());
            for (size_t s = 0; s < subs.size(); ++s) {
                weight[s] = g.order() / subs[s].order();
                fiber[s] = rk.order() / subs[s].order();
                for (int b = 0; b < mf.grades(); ++b) {
                    const CoefficientSystem& cs = mf.piece(b);
                    composite[s].push_back(cs.covariant(OrbitMap{subs[s], rk, id}) *
                                           cs.contravariant(OrbitMap{subs[s], rk, id}));
                }
            }
            // multisets with total weight within the size bound
            std::vector<size_t> stackv;
            std::function<void(size_t, long, long, std::vector<SparseZ>&)> dfs =
                [&](size_t from, long budget, long fib, std::vector<SparseZ>& acc) {
                    if (!ok) return;
                    if (!stackv.empty() && fib % p != 0) {
                        ++tested;
                        require_capacity(tested, 100000, "span multiset enumeration");
                        for (int b = 0; b < mf.grades() && ok; ++b) {
                            if (!is_invertible_endomorphism(acc[static_cast<size_t>(b)],
                                                            mf.piece(b).value(k),
                                                            mf.locality())) {
                                ok = false;
                                std::string orders;
                                for (size_t s : stackv)
                                    orders += (orders.empty() ? "" : ",") +
                                              std::to_string(subs[s].order());
                                det = "class " + tab.label(k) + ": stabilizer orders {" + orders +
                                      "} give a non-invertible span action at grade " +
                                      std::to_string(b);
                            }
                        }
                    }
                    for (size_t s = from; s < subs.size() && ok; ++s) {
                        if (weight[s] > budget) continue;
                        stackv.push_back(s);
                        std::vector<SparseZ> next;
                        next.reserve(acc.size());
                        for (int b = 0; b < mf.grades(); ++b)
                            next.push_back(detail::sparse_sum(acc[static_cast<size_t>(b)],
                                                              composite[s][static_cast<size_t>(b)]));
                        dfs(s, budget - weight[s], fib + fiber[s], next);
                        stackv.pop_back();
                    }
                };
            std::vector<SparseZ> zero;
            for (int b = 0; b < mf.grades(); ++b) {
                long nk2 = mf.piece(b).gens(k);
                zero.emplace_back(static_cast<int>(nk2), static_cast<int>(nk2));
            }
            dfs(0, size_bound, 0, zero);
        }
        rep.add("bounded search over spans (|S| <= " + std::to_string(size_bound) + ", " +
                    std::to_string(tested) + " multisets)",
                ok, det);
    }
    return rep;
}

namespace detail {

/* elementary abelian p-subgroups acting freely and non-transitively,
 * including the trivial subgroup whenever n > 1 */
inline std::vector<PermGroup> qualifying_isotropy(const PermGroup& g, int n, int p) {
    std::vector<PermGroup> out;
    for (const auto& sc : p_subgroup_classes(g, p)) {
        if (!sc.rep.is_elementary_abelian(p)) continue;
        ActionSummary s = classify_action(sc.rep, n);
        if (!s.free || s.transitive) continue;
        out.push_back(sc.rep);
    }
    return out;
}

}  // namespace detail

/* For each qualifying isotropy class D, every element of the kernel of
 * Cen(D) -> pi_0 of the real centralizer must act as the identity. */
inline VerificationReport check_centralizer_condition(const MackeyFunctor& mf, int n, int p) {
    require(detail::is_prime_small(p), "condition prime must be prime");
    require_capacity(n, 6, "centralizer condition: symmetric degree");
    require(mf.group().same_group(PermGroup::symmetric(n)),
            "centralizer condition needs the full symmetric group");
    VerificationReport rep("centralizer kernel condition");
    SubgroupClassTable& tab = mf.piece(0).table();
    for (const auto& d : detail::qualifying_isotropy(mf.group(), n, p)) {
        PermGroup ker = kernel_to_pi0_real_centralizer(d, n, p);
        bool ok = true;
        std::string det;
        int cls = tab.locate(d).cls;
        for (const auto& c : ker.elements()) {
            if (c.is_identity()) continue;
            for (int b = 0; b < mf.grades(); ++b) {
                const CoefficientSystem& cs = mf.piece(b);
                SparseZ m = cs.covariant(OrbitMap{d, d, c});
                SparseZ ident = SparseZ::identity(static_cast<int>(cs.gens(cls)));
                if (!detail::sparse_equal(m, ident, detail::matrix_modulus(cs.value(cls)))) {
                    ok = false;
                    det = "kernel element " + c.to_cycle_string() + " acts nontrivially at grade " +
                          std::to_string(b);
                    break;
                }
            }
            if (!ok) break;
        }
        rep.add("kernel acts trivially at D = " + detail::describe_subgroup(d), ok, det);
    }
    return rep;
}

/* For each qualifying isotropy class D, every odd involution centralizing D
 * must act as minus the identity.  Defined for odd primes only. */
inline VerificationReport check_involution_condition(const MackeyFunctor& mf, int n, int p) {
    require(p != 2, "the involution condition needs an odd prime");
    require(detail::is_prime_small(p), "condition prime must be prime");
    require_capacity(n, 6, "involution condition: symmetric degree");
    require(mf.group().same_group(PermGroup::symmetric(n)),
            "involution condition needs the full symmetric group");
    VerificationReport rep("odd involution condition");
    SubgroupClassTable& tab = mf.piece(0).table();
    for (const auto& d : detail::qualifying_isotropy(mf.group(), n, p)) {
        PermGroup cen = mf.group().centralizer(d);
        auto taus = odd_involutions(cen);
        bool ok = true;
        std::string det;
        int cls = tab.locate(d).cls;
        for (const auto& tau : taus) {
            for (int b = 0; b < mf.grades(); ++b) {
                const CoefficientSystem& cs = mf.piece(b);
                SparseZ m = cs.covariant(OrbitMap{d, d, tau});
                SparseZ minus = detail::scaled_identity(cs.gens(cls), -1);
                if (!detail::sparse_equal(m, minus, detail::matrix_modulus(cs.value(cls)))) {
                    ok = false;
                    det = "involution " + tau.to_cycle_string() + " fails at grade " +
                          std::to_string(b);
                    break;
                }
            }
            if (!ok) break;
        }
        rep.add("odd involutions negate the value at D = " + detail::describe_subgroup(d) +
                    (taus.empty() ? " (no odd involutions)" : ""),
                ok, det);
    }
    return rep;
}

/* ------------------------------------------------------------------------
 * Serialization
 * --------------------------------------------------------------------- */

namespace detail {

inline nlohmann::json json_matrix(const SparseZ& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < m.cols(); ++c) {
            mpz_class v = m.get(r, c);
            check(v.fits_slong_p(), "matrix entry too large to serialize");
            row.push_back(static_cast<long>(v.get_si()));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace detail

/* JSON bundle: the class table, value groups per grade, and the canonical
 * transfer/restriction/conjugation matrices.  Deterministic for a given
 * object state. */
inline nlohmann::json mackey_to_json(const MackeyFunctor& mf) {
    const PermGroup& g = mf.group();
    SubgroupClassTable& tab = mf.piece(0).table();
    int nc = tab.count();
    Permutation id = Permutation::identity(g.degree());

    nlohmann::json out;
    out["group_degree"] = g.degree();
    out["group_order"] = g.order();
    out["locality"] = mf.locality();
    out["graded"] = mf.graded();

    nlohmann::json classes = nlohmann::json::array();
    for (int i = 0; i < nc; ++i) {
        nlohmann::json c;
        c["id"] = i;
        c["label"] = tab.label(i);
        c["order"] = tab.rep(i).order();
        c["index"] = g.order() / tab.rep(i).order();
        classes.push_back(std::move(c));
    }
    out["classes"] = std::move(classes);

    // canonical embeddings between distinct classes
    std::vector<detail::MapDesc> pairs;
    for (int i = 0; i < nc; ++i)
        for (int j2 = 0; j2 < nc; ++j2) {
            if (i == j2) continue;
            auto w = detail::canonical_class_witness(g, tab, i, j2);
            if (w) pairs.push_back({i, j2, *w});
        }

    nlohmann::json grades = nlohmann::json::array();
    for (int b = 0; b < mf.grades(); ++b) {
        const CoefficientSystem& cs = mf.piece(b);
        nlohmann::json gr;
        gr["b"] = b;
        nlohmann::json vals = nlohmann::json::array();
        for (int i = 0; i < nc; ++i) vals.push_back(cs.value(i).to_string());
        gr["values"] = std::move(vals);

        nlohmann::json trs = nlohmann::json::array();
        nlohmann::json rss = nlohmann::json::array();
        for (const auto& pr : pairs) {
            PermGroup hp = detail::conjugate_subgroup(tab.rep(pr.i), pr.w);
            if (!tab.rep(pr.j).contains_group(hp)) continue;
            nlohmann::json t;
            t["from"] = pr.i;
            t["to"] = pr.j;
            t["matrix"] = detail::json_matrix(cs.covariant(OrbitMap{hp, tab.rep(pr.j), id}));
            trs.push_back(std::move(t));
            nlohmann::json r;
            r["from"] = pr.j;
            r["to"] = pr.i;
            r["matrix"] = detail::json_matrix(cs.contravariant(OrbitMap{hp, tab.rep(pr.j), id}));
            rss.push_back(std::move(r));
        }
        gr["transfers"] = std::move(trs);
        gr["restrictions"] = std::move(rss);

        nlohmann::json conjs = nlohmann::json::array();
        for (int i = 0; i < nc; ++i) {
            PermGroup norm = g.normalizer(tab.rep(i));
            for (const auto& ngen : norm.generators()) {
                nlohmann::json c;
                c["cls"] = i;
                c["witness"] = ngen.to_cycle_string();
                c["matrix"] =
                    detail::json_matrix(cs.covariant(OrbitMap{tab.rep(i), tab.rep(i), ngen}));
                conjs.push_back(std::move(c));
            }
        }
        gr["conjugations"] = std::move(conjs);
        grades.push_back(std::move(gr));
    }
    out["grades"] = std::move(grades);
    return out;
}

}  // namespace parcx
