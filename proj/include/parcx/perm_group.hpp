#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "parcx/common.hpp"
#include "parcx/permutation.hpp"
#include "parcx/smallmat.hpp"

namespace parcx {

/* A finite permutation group, materialized on demand.  Element order is
 * canonical (lexicographic by image list), so every enumeration in the
 * library is deterministic. */
class PermGroup {
  public:
    PermGroup() : degree_(0) {}
    PermGroup(int degree, std::vector<Permutation> generators) : degree_(degree) {
        for (auto& g : generators) {
            require(g.degree() == degree, "generator degree mismatch");
            if (!g.is_identity()) gens_.push_back(g);
        }
        std::sort(gens_.begin(), gens_.end());
        gens_.erase(std::unique(gens_.begin(), gens_.end()), gens_.end());
    }

    static PermGroup trivial(int degree) { return PermGroup(degree, {}); }

    static PermGroup symmetric(int n) {
        require(n >= 1, "symmetric_group needs n >= 1");
        require_capacity(n, kMaxSymmetricDegree, "symmetric group degree");
        std::vector<Permutation> gens;
        if (n >= 2) {
            gens.push_back(Permutation::from_cycles(n, {{0, 1}}));
            std::vector<int> cyc(n);
            for (int i = 0; i < n; ++i) cyc[i] = i;
            gens.push_back(Permutation::from_cycles(n, {cyc}));
        }
        return PermGroup(n, std::move(gens));
    }

    int degree() const { return degree_; }
    const std::vector<Permutation>& generators() const { return gens_; }

    const std::vector<Permutation>& elements() const {
        materialize();
        return elems_;
    }

    long order() const { return static_cast<long>(elements().size()); }

    /* Index of g in the sorted element list; -1 if absent. */
    int element_index(const Permutation& g) const {
        materialize();
        auto it = index_.find(key_of(g));
        return it == index_.end() ? -1 : it->second;
    }

    bool contains(const Permutation& g) const {
        return g.degree() == degree_ && element_index(g) >= 0;
    }

    bool contains_group(const PermGroup& h) const {
        if (h.degree() != degree_) return false;
        for (const auto& g : h.generators())
            if (!contains(g)) return false;
        return true;
    }

    bool same_group(const PermGroup& h) const {
        return contains_group(h) && order() == h.order();
    }

    PermGroup centralizer(const PermGroup& d) const {
        require(d.degree() == degree_, "centralizer: degree mismatch");
        std::vector<Permutation> elems;
        for (const auto& g : elements()) {
            bool ok = true;
            for (const auto& s : d.generators())
                if (!(g * s == s * g)) {
                    ok = false;
                    break;
                }
            if (ok) elems.push_back(g);
        }
        return from_elements(degree_, std::move(elems));
    }

    PermGroup normalizer(const PermGroup& d) const {
        require(d.degree() == degree_, "normalizer: degree mismatch");
        std::set<Permutation> dset(d.elements().begin(), d.elements().end());
        std::vector<Permutation> elems;
        for (const auto& g : elements()) {
            bool ok = true;
            for (const auto& s : d.generators())
                if (!dset.count(conjugate(g, s))) {
                    ok = false;
                    break;
                }
            if (ok) elems.push_back(g);
        }
        return from_elements(degree_, std::move(elems));
    }

    /* Wrap an explicit element list as a group (validates closure). */
    static PermGroup from_elements(int degree, std::vector<Permutation> elems) {
        std::sort(elems.begin(), elems.end());
        elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
        PermGroup g(degree, elems);
        long expected = elems.empty() ? 1 : static_cast<long>(elems.size());
        check(g.order() == expected, "from_elements: input is not closed under multiplication");
        return g;
    }

    bool is_p_group(int p) const {
        long n = order();
        while (n % p == 0) n /= p;
        return n == 1;
    }

    bool is_elementary_abelian(int p) const {
        const auto& es = elements();
        for (const auto& a : es) {
            if (!a.is_identity() && a.order() != p) return false;
            for (const auto& b : gens_)
                if (!(a * b == b * a)) return false;
        }
        return true;
    }

    std::vector<std::vector<int>> orbits() const {
        std::vector<std::vector<int>> out;
        std::vector<char> seen(degree_, 0);
        for (int s = 0; s < degree_; ++s) {
            if (seen[s]) continue;
            std::vector<int> orb{s};
            seen[s] = 1;
            for (size_t i = 0; i < orb.size(); ++i)
                for (const auto& g : gens_) {
                    int y = g(orb[i]);
                    if (!seen[y]) {
                        seen[y] = 1;
                        orb.push_back(y);
                    }
                }
            std::sort(orb.begin(), orb.end());
            out.push_back(std::move(orb));
        }
        return out;
    }

    bool acts_freely() const {
        for (const auto& g : elements())
            if (!g.is_identity() && !g.fixes_nothing()) return false;
        return true;
    }

    bool is_transitive() const { return orbits().size() == 1; }

  private:
    static std::string key_of(const Permutation& g) {
        std::string k;
        k.reserve(g.degree());
        for (int v : g.images()) k.push_back(static_cast<char>(v));
        return k;
    }

    void materialize() const {
        if (!elems_.empty()) return;
        std::vector<Permutation> pool{Permutation::identity(degree_)};
        std::set<std::string> seen{key_of(pool[0])};
        for (size_t i = 0; i < pool.size(); ++i) {
            for (const auto& g : gens_) {
                Permutation h = g * pool[i];
                auto k = key_of(h);
                if (seen.insert(k).second) {
                    require_capacity(static_cast<long>(pool.size()) + 1, kMaxGroupOrder,
                                     "group order");
                    pool.push_back(std::move(h));
                }
            }
        }
        std::sort(pool.begin(), pool.end());
        elems_ = std::move(pool);
        for (size_t i = 0; i < elems_.size(); ++i) index_[key_of(elems_[i])] = static_cast<int>(i);
    }

    int degree_;
    std::vector<Permutation> gens_;
    mutable std::vector<Permutation> elems_;
    mutable std::unordered_map<std::string, int> index_;
};

/* ----- subgroup bitsets relative to an ambient group ----- */

using SubBits = std::vector<uint64_t>;

inline SubBits empty_bits(long n) { return SubBits((n + 63) / 64, 0); }
inline void set_bit(SubBits& b, int i) { b[i >> 6] |= (uint64_t{1} << (i & 63)); }
inline bool get_bit(const SubBits& b, int i) { return (b[i >> 6] >> (i & 63)) & 1; }
inline long popcount_bits(const SubBits& b) {
    long n = 0;
    for (uint64_t w : b) n += __builtin_popcountll(w);
    return n;
}

inline SubBits subgroup_bits(const PermGroup& ambient, const PermGroup& sub) {
    SubBits b = empty_bits(ambient.order());
    for (const auto& g : sub.elements()) {
        int i = ambient.element_index(g);
        require(i >= 0, "subgroup element not contained in ambient group");
        set_bit(b, i);
    }
    return b;
}

inline PermGroup group_from_bits(const PermGroup& ambient, const SubBits& b) {
    std::vector<Permutation> elems;
    const auto& es = ambient.elements();
    for (size_t i = 0; i < es.size(); ++i)
        if (get_bit(b, static_cast<int>(i))) elems.push_back(es[i]);
    return PermGroup::from_elements(ambient.degree(), std::move(elems));
}

/* Per-element conjugation table: row g gives i -> index of g x_i g^{-1}. */
class ConjTables {
  public:
    explicit ConjTables(const PermGroup& g) : g_(&g) {}

    const std::vector<int>& table(int gi) const {
        auto it = tables_.find(gi);
        if (it != tables_.end()) return it->second;
        const auto& es = g_->elements();
        const Permutation& c = es[gi];
        Permutation cinv = c.inverse();
        std::vector<int> t(es.size());
        for (size_t i = 0; i < es.size(); ++i) t[i] = g_->element_index(c * es[i] * cinv);
        return tables_.emplace(gi, std::move(t)).first->second;
    }

    SubBits conjugate_bits(const SubBits& b, int gi) const {
        const auto& t = table(gi);
        SubBits out = empty_bits(static_cast<long>(t.size()));
        for (size_t i = 0; i < t.size(); ++i)
            if (get_bit(b, static_cast<int>(i))) set_bit(out, t[i]);
        return out;
    }

  private:
    const PermGroup* g_;
    mutable std::map<int, std::vector<int>> tables_;
};

/* ----- action classification ----- */

struct ActionSummary {
    bool free = false;
    bool transitive = false;
    std::vector<std::vector<int>> orbits;
};

inline ActionSummary classify_action(const PermGroup& d, int n) {
    require(d.degree() == n, "classify_action: degree mismatch");
    ActionSummary s;
    s.orbits = d.orbits();
    s.transitive = s.orbits.size() == 1;
    s.free = d.acts_freely();
    return s;
}

inline std::vector<Permutation> odd_involutions(const PermGroup& g) {
    std::vector<Permutation> out;
    for (const auto& e : g.elements())
        if (!e.is_identity() && e.order() == 2 && e.sign() == -1) out.push_back(e);
    return out;
}

/* ----- Weyl data ----- */

struct WeylData {
    PermGroup d;             // the subgroup
    PermGroup n;             // its normalizer in the ambient group
    PermGroup w;             // n/d acting faithfully on left cosets of d
    std::vector<int> projection;       // index into n.elements() -> index into w.elements()
    std::vector<Permutation> section;  // index into w.elements() -> a coset representative in n
};

inline WeylData normalizer_weyl(const PermGroup& g, const PermGroup& d) {
    WeylData wd;
    wd.d = d;
    wd.n = g.normalizer(d);
    const auto& ne = wd.n.elements();
    long dorder = d.order();
    long ncosets = wd.n.order() / dorder;
    require_capacity(ncosets, kMaxGroupOrder, "Weyl group order");

    // Left cosets n*D, keyed by the minimal element index they contain.
    std::vector<int> coset_of(ne.size(), -1);
    std::vector<Permutation> reps;
    for (size_t i = 0; i < ne.size(); ++i) {
        if (coset_of[i] >= 0) continue;
        int id = static_cast<int>(reps.size());
        reps.push_back(ne[i]);  // minimal element of the coset, since ne is sorted
        for (const auto& dd : d.elements()) coset_of[wd.n.element_index(ne[i] * dd)] = id;
    }
    check(static_cast<long>(reps.size()) == ncosets, "coset count mismatch");

    // Action of n on cosets by left multiplication.
    std::vector<Permutation> wperms(ne.size());
    for (size_t i = 0; i < ne.size(); ++i) {
        std::vector<int> img(reps.size());
        for (size_t c = 0; c < reps.size(); ++c)
            img[c] = coset_of[wd.n.element_index(ne[i] * reps[c])];
        wperms[i] = Permutation(std::move(img));
    }
    wd.w = PermGroup(static_cast<int>(reps.size()), wperms);
    check(wd.w.order() == ncosets, "Weyl action is not faithful");

    wd.projection.resize(ne.size());
    wd.section.assign(wd.w.order(), Permutation());
    std::vector<char> have(wd.w.order(), 0);
    for (size_t i = 0; i < ne.size(); ++i) {
        int widx = wd.w.element_index(wperms[i]);
        check(widx >= 0, "Weyl projection fell outside the quotient");
        wd.projection[i] = widx;
        if (!have[widx]) {
            have[widx] = 1;
            wd.section[widx] = ne[i];
        }
    }
    return wd;
}

/* ----- regular embedding of (Z/p)^k in Sigma_{p^k} ----- */

struct RegularEmbedding {
    int p = 0, k = 0, n = 0;
    PermGroup delta;

    /* little-endian digits: point x corresponds to (x mod p, (x/p) mod p, ...) */
    std::vector<int> digits(int point) const {
        std::vector<int> v(k);
        for (int i = 0; i < k; ++i) {
            v[i] = point % p;
            point /= p;
        }
        return v;
    }
    int point(const std::vector<int>& digitsv) const {
        int x = 0;
        for (int i = k - 1; i >= 0; --i) x = x * p + digitsv[i];
        return x;
    }
};

inline RegularEmbedding regular_embedding(int k, int p) {
    require(k >= 1 && p >= 2, "regular_embedding needs k >= 1, p >= 2");
    long n = 1;
    for (int i = 0; i < k; ++i) n *= p;
    require(n <= 9, "regular_embedding supports p^k <= 9");
    RegularEmbedding re;
    re.p = p;
    re.k = k;
    re.n = static_cast<int>(n);
    std::vector<Permutation> gens;
    for (int i = 0; i < k; ++i) {
        std::vector<int> img(re.n);
        for (int x = 0; x < re.n; ++x) {
            auto d = re.digits(x);
            d[i] = (d[i] + 1) % p;
            img[x] = re.point(d);
        }
        gens.emplace_back(std::move(img));
    }
    re.delta = PermGroup(re.n, gens);
    check(re.delta.order() == n, "translation subgroup has wrong order");
    return re;
}

/* ----- p-subgroup enumeration ----- */

struct SubgroupClass {
    PermGroup rep;        // canonical representative (minimal element bitset)
    long class_size = 0;  // number of conjugates in the ambient group
};

namespace detail {

/* All subgroups of a small group, as bitsets over its own element list. */
inline std::vector<SubBits> all_subgroups_of_small(const PermGroup& p) {
    const auto& es = p.elements();
    int n = static_cast<int>(es.size());
    require_capacity(n, 512, "subgroup enumeration base order");
    std::vector<std::vector<int>> mult(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) mult[i][j] = p.element_index(es[i] * es[j]);
    int e = p.element_index(Permutation::identity(p.degree()));

    auto closure = [&](SubBits seed) {
        std::vector<int> members;
        for (int i = 0; i < n; ++i)
            if (get_bit(seed, i)) members.push_back(i);
        for (size_t a = 0; a < members.size(); ++a)
            for (size_t b = 0; b < members.size(); ++b) {
                int c = mult[members[a]][members[b]];
                if (!get_bit(seed, c)) {
                    set_bit(seed, c);
                    members.push_back(c);
                }
            }
        return seed;
    };

    std::set<SubBits> found;
    SubBits triv = empty_bits(n);
    set_bit(triv, e);
    found.insert(triv);
    std::vector<SubBits> queue{triv};
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        SubBits h = queue[qi];
        for (int g = 0; g < n; ++g) {
            if (get_bit(h, g)) continue;
            SubBits bigger = h;
            set_bit(bigger, g);
            bigger = closure(bigger);
            if (found.insert(bigger).second) queue.push_back(bigger);
        }
    }
    return {found.begin(), found.end()};
}

}  // namespace detail

/* A Sylow p-subgroup, built by repeatedly extending a p-subgroup inside
 * its normalizer. */
inline PermGroup sylow_subgroup(const PermGroup& g, int p) {
    long target = 1;
    {
        long n = g.order();
        while (n % p == 0) {
            n /= p;
            target *= p;
        }
    }
    PermGroup cur = PermGroup::trivial(g.degree());
    while (cur.order() < target) {
        PermGroup norm = g.normalizer(cur);
        bool extended = false;
        for (const auto& x : norm.elements()) {
            if (cur.contains(x)) continue;
            int o = x.order();
            bool ppower = true;
            while (o > 1) {
                if (o % p) {
                    ppower = false;
                    break;
                }
                o /= p;
            }
            if (!ppower) continue;
            std::vector<Permutation> gens = cur.generators();
            gens.push_back(x);
            PermGroup bigger(g.degree(), gens);
            if (bigger.is_p_group(p)) {
                cur = bigger;
                extended = true;
                break;
            }
        }
        check(extended, "Sylow construction stalled");
    }
    return cur;
}

/* Conjugacy classes of p-subgroups of g (trivial subgroup included).
 * Every p-subgroup is conjugate into a fixed Sylow subgroup, so the
 * subgroups of one Sylow meet every class; classes are then fused under
 * conjugation by g. */
inline std::vector<SubgroupClass> p_subgroup_classes(const PermGroup& g, int p) {
    PermGroup syl = sylow_subgroup(g, p);
    auto subs_local = detail::all_subgroups_of_small(syl);

    ConjTables conj(g);
    std::vector<int> gen_idx;
    for (const auto& gen : g.generators()) gen_idx.push_back(g.element_index(gen));

    std::set<SubBits> seen;
    std::vector<SubgroupClass> classes;
    for (const auto& local : subs_local) {
        // lift to ambient indexing
        SubBits b = empty_bits(g.order());
        const auto& se = syl.elements();
        for (size_t i = 0; i < se.size(); ++i)
            if (get_bit(local, static_cast<int>(i))) set_bit(b, g.element_index(se[i]));
        if (seen.count(b)) continue;
        // full conjugacy class
        std::set<SubBits> orbit{b};
        std::vector<SubBits> queue{b};
        for (size_t qi = 0; qi < queue.size(); ++qi)
            for (int gi : gen_idx) {
                SubBits c = conj.conjugate_bits(queue[qi], gi);
                if (orbit.insert(c).second) queue.push_back(c);
            }
        SubgroupClass cls;
        cls.class_size = static_cast<long>(orbit.size());
        cls.rep = group_from_bits(g, *orbit.begin());  // minimal bitset = canonical rep
        classes.push_back(std::move(cls));
        for (const auto& o : orbit) seen.insert(o);
    }
    std::sort(classes.begin(), classes.end(), [&](const SubgroupClass& a, const SubgroupClass& b) {
        if (a.rep.order() != b.rep.order()) return a.rep.order() < b.rep.order();
        return subgroup_bits(g, a.rep) < subgroup_bits(g, b.rep);
    });
    return classes;
}

/* Every p-subgroup of g (not just class representatives); trivial excluded. */
inline std::vector<PermGroup> all_nontrivial_p_subgroups(const PermGroup& g, int p) {
    PermGroup syl = sylow_subgroup(g, p);
    auto subs_local = detail::all_subgroups_of_small(syl);
    ConjTables conj(g);
    std::vector<int> gen_idx;
    for (const auto& gen : g.generators()) gen_idx.push_back(g.element_index(gen));

    std::set<SubBits> all;
    for (const auto& local : subs_local) {
        SubBits b = empty_bits(g.order());
        const auto& se = syl.elements();
        for (size_t i = 0; i < se.size(); ++i)
            if (get_bit(local, static_cast<int>(i))) set_bit(b, g.element_index(se[i]));
        if (popcount_bits(b) == 1) continue;
        if (all.count(b)) continue;
        std::vector<SubBits> queue{b};
        all.insert(b);
        for (size_t qi = 0; qi < queue.size(); ++qi)
            for (int gi : gen_idx) {
                SubBits c = conj.conjugate_bits(queue[qi], gi);
                if (all.insert(c).second) queue.push_back(c);
            }
    }
    std::vector<PermGroup> out;
    for (const auto& b : all) out.push_back(group_from_bits(g, b));
    return out;
}

/* ----- left cosets xN of a subgroup, with decomposition ----- */

struct CosetTable {
    PermGroup g, n;
    std::vector<Permutation> reps;  // minimal element of each coset
    std::vector<int> coset_of;      // index into g.elements() -> coset id

    long count() const { return static_cast<long>(reps.size()); }

    int coset(const Permutation& x) const {
        int i = g.element_index(x);
        require(i >= 0, "coset: element not in the group");
        return coset_of[static_cast<size_t>(i)];
    }

    /* x * reps[c] = reps[c'] * m with m in the subgroup; returns (c', m) */
    std::pair<int, Permutation> translate(const Permutation& x, int c) const {
        Permutation moved = x * reps[static_cast<size_t>(c)];
        int c2 = coset(moved);
        Permutation m = reps[static_cast<size_t>(c2)].inverse() * moved;
        check(n.contains(m), "coset decomposition left the subgroup");
        return {c2, m};
    }
};

inline CosetTable left_cosets(const PermGroup& g, const PermGroup& n) {
    require(g.contains_group(n), "left_cosets: subgroup is not contained in the group");
    CosetTable t;
    t.g = g;
    t.n = n;
    const auto& ge = g.elements();
    t.coset_of.assign(ge.size(), -1);
    for (size_t i = 0; i < ge.size(); ++i) {
        if (t.coset_of[i] >= 0) continue;
        int id = static_cast<int>(t.reps.size());
        t.reps.push_back(ge[i]);  // minimal element, since ge is sorted
        for (const auto& m : n.elements())
            t.coset_of[static_cast<size_t>(g.element_index(ge[i] * m))] = id;
    }
    check(t.count() * n.order() == g.order(), "coset count mismatch");
    return t;
}

/* ----- kernel of Cen_{Sigma_n}(D) -> pi_0 Cen_{GL_n(R)}(D) -----
 *
 * D acts on R^n by permutation matrices.  The centralizer in GL_n(R) is a
 * product of general linear groups over R (one per real-type isotypic
 * component) and over C (complex-type components, which are connected).
 * A permutation c centralizing D lies in the identity component exactly
 * when det(c | V_chi) > 0 for every real-type isotypic component V_chi:
 * all characters chi: D -> {+-1} when p = 2, only the trivial character
 * when p is odd.  Determinant signs are computed exactly over Z via
 * sign det(B^T c B) with B an integer basis of V_chi. */
inline PermGroup kernel_to_pi0_real_centralizer(const PermGroup& d, int n, int p) {
    require(d.degree() == n, "kernel_to_pi0: degree mismatch");
    require(d.is_elementary_abelian(p), "kernel_to_pi0 needs an elementary abelian p-group");
    PermGroup sym = PermGroup::symmetric(n);
    PermGroup cen = sym.centralizer(d);

    // Independent generators of D as an F_p vector space.
    std::vector<Permutation> basis;
    {
        PermGroup span = PermGroup::trivial(n);
        for (const auto& x : d.elements()) {
            if (span.contains(x)) continue;
            auto gens = span.generators();
            gens.push_back(x);
            span = PermGroup(n, gens);
            basis.push_back(x);
        }
        check(span.order() == d.order(), "basis extraction failed");
    }
    int rank = static_cast<int>(basis.size());

    // Express each element of D in that basis (exponent vectors mod p).
    std::map<std::string, std::vector<int>> expo;
    {
        std::vector<std::pair<Permutation, std::vector<int>>> pool{
            {Permutation::identity(n), std::vector<int>(rank, 0)}};
        auto key = [](const Permutation& g) {
            std::string k;
            for (int v : g.images()) k.push_back(static_cast<char>(v));
            return k;
        };
        expo[key(pool[0].first)] = pool[0].second;
        for (size_t i = 0; i < pool.size(); ++i)
            for (int b = 0; b < rank; ++b) {
                Permutation h = basis[b] * pool[i].first;
                auto k = key(h);
                if (!expo.count(k)) {
                    auto e = pool[i].second;
                    e[b] = (e[b] + 1) % p;
                    expo[k] = e;
                    pool.emplace_back(h, e);
                }
            }
        check(expo.size() == static_cast<size_t>(d.order()), "exponent table incomplete");
    }
    auto exponents = [&](const Permutation& g) {
        std::string k;
        for (int v : g.images()) k.push_back(static_cast<char>(v));
        return expo.at(k);
    };

    // Real-type characters as sign vectors on the basis.
    std::vector<std::vector<int>> characters;  // sign (+1/-1) per basis generator
    if (p == 2) {
        for (int mask = 0; mask < (1 << rank); ++mask) {
            std::vector<int> chi(rank);
            for (int b = 0; b < rank; ++b) chi[b] = (mask >> b) & 1 ? -1 : 1;
            characters.push_back(chi);
        }
    } else {
        characters.emplace_back(rank, 1);  // trivial character only
    }

    std::vector<Permutation> kernel;
    for (const auto& c : cen.elements()) {
        bool inside = true;
        for (const auto& chi : characters) {
            // projection |D| * P_chi = sum_d chi(d^{-1}) rho(d), integer entries
            ZMat proj(n, n);
            for (const auto& dd : d.elements()) {
                auto e = exponents(dd);
                int val = 1;
                for (int b = 0; b < rank; ++b)
                    if (e[b] % 2) val *= chi[b];  // chi(d) = chi(d^{-1}) for order-2 values
                for (int x = 0; x < n; ++x) proj(dd(x), x) += val;
            }
            ZMat b = column_space_basis(proj);
            if (b.cols() == 0) continue;  // character does not occur
            ZMat cb(n, b.cols());
            for (int j = 0; j < b.cols(); ++j)
                for (int r = 0; r < n; ++r) cb(c(r), j) = b(r, j);
            int s = det_sign(b.transposed() * cb);
            check(s != 0, "centralizer element is singular on an isotypic component");
            if (s < 0) {
                inside = false;
                break;
            }
        }
        if (inside) kernel.push_back(c);
    }
    return PermGroup::from_elements(n, std::move(kernel));
}

}  // namespace parcx
