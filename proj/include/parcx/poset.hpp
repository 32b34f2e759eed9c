#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "parcx/common.hpp"
#include "parcx/linear_groups.hpp"
#include "parcx/perm_group.hpp"
#include "parcx/set_partition.hpp"

namespace parcx {

/* Group action on poset elements by order automorphisms. */
struct PosetAction {
    PermGroup group;
    std::function<int(const Permutation&, int)> act;
};

/* Finite poset: elements are indices 0..size-1 with a strict order matrix.
 * Elements may carry display labels and an optional group action. */
class Poset {
  public:
    Poset() = default;
    explicit Poset(int n) : n_(n), lt_(n, std::vector<char>(n, 0)) {
        require_capacity(n, kMaxPosetElements, "poset size");
    }

    int size() const { return n_; }
    bool lt(int a, int b) const { return lt_[static_cast<size_t>(a)][static_cast<size_t>(b)]; }
    bool leq(int a, int b) const { return a == b || lt(a, b); }

    void set_lt(int a, int b) {
        check(a != b, "strict order cannot relate an element to itself");
        lt_[static_cast<size_t>(a)][static_cast<size_t>(b)] = 1;
    }

    /* take the transitive closure of the relations added so far */
    void close_transitively() {
        for (int k = 0; k < n_; ++k)
            for (int a = 0; a < n_; ++a) {
                if (!lt(a, k)) continue;
                for (int b = 0; b < n_; ++b)
                    if (lt(k, b)) lt_[static_cast<size_t>(a)][static_cast<size_t>(b)] = 1;
            }
    }

    void set_labels(std::vector<std::string> labels) {
        check(static_cast<int>(labels.size()) == n_, "label count mismatch");
        labels_ = std::move(labels);
    }
    const std::string& label(int i) const {
        static const std::string empty;
        return labels_.empty() ? empty : labels_[static_cast<size_t>(i)];
    }
    bool has_labels() const { return !labels_.empty(); }

    void set_action(PosetAction a) { action_ = std::move(a); }
    bool has_action() const { return action_.has_value(); }
    const PosetAction& action() const {
        require(action_.has_value(), "poset has no group action");
        return *action_;
    }
    int act(const Permutation& g, int x) const { return action().act(g, x); }

    long relation_count() const {
        long c = 0;
        for (int a = 0; a < n_; ++a)
            for (int b = 0; b < n_; ++b) c += lt(a, b);
        return c;
    }

    /* covering pairs a < b with nothing strictly between */
    std::vector<std::pair<int, int>> covers() const {
        std::vector<std::pair<int, int>> out;
        for (int a = 0; a < n_; ++a)
            for (int b = 0; b < n_; ++b) {
                if (!lt(a, b)) continue;
                bool cover = true;
                for (int c = 0; c < n_; ++c)
                    if (lt(a, c) && lt(c, b)) {
                        cover = false;
                        break;
                    }
                if (cover) out.emplace_back(a, b);
            }
        return out;
    }

    /* strict order, transitivity, and action generators as automorphisms */
    bool validate() const {
        for (int a = 0; a < n_; ++a)
            if (lt(a, a)) return false;
        for (int a = 0; a < n_; ++a)
            for (int b = 0; b < n_; ++b) {
                if (!lt(a, b)) continue;
                if (lt(b, a)) return false;
                for (int c = 0; c < n_; ++c)
                    if (lt(b, c) && !lt(a, c)) return false;
            }
        if (action_) {
            for (const auto& g : action_->group.generators()) {
                std::vector<int> img(static_cast<size_t>(n_));
                std::vector<char> hit(static_cast<size_t>(n_), 0);
                for (int x = 0; x < n_; ++x) {
                    int y = action_->act(g, x);
                    if (y < 0 || y >= n_ || hit[static_cast<size_t>(y)]) return false;
                    hit[static_cast<size_t>(y)] = 1;
                    img[static_cast<size_t>(x)] = y;
                }
                for (int a = 0; a < n_; ++a)
                    for (int b = 0; b < n_; ++b)
                        if (lt(a, b) != lt(img[static_cast<size_t>(a)], img[static_cast<size_t>(b)]))
                            return false;
            }
        }
        return true;
    }

  private:
    int n_ = 0;
    std::vector<std::vector<char>> lt_;
    std::vector<std::string> labels_;
    std::optional<PosetAction> action_;
};

/* ----- the partition poset ----- */

struct PartitionPoset {
    Poset poset;
    std::vector<SetPartition> elements;
    std::shared_ptr<std::map<SetPartition, int>> index;

    int index_of(const SetPartition& p) const {
        auto it = index->find(p);
        return it == index->end() ? -1 : it->second;
    }
};

/* Proper nontrivial partitions of {0..n-1} under refinement; smaller means
 * finer.  The symmetric group acts for n <= 7. */
inline PartitionPoset partition_poset(int n) {
    require(n >= 2, "partition poset needs n >= 2");
    require_capacity(n, 9, "partition poset ground set");
    PartitionPoset pp;
    for (const auto& p : all_partitions(n))
        if (p.is_proper() && p.is_nontrivial()) pp.elements.push_back(p);
    int m = static_cast<int>(pp.elements.size());
    pp.poset = Poset(m);
    pp.index = std::make_shared<std::map<SetPartition, int>>();
    std::vector<std::string> labels;
    for (int i = 0; i < m; ++i) {
        (*pp.index)[pp.elements[static_cast<size_t>(i)]] = i;
        labels.push_back(pp.elements[static_cast<size_t>(i)].to_string());
    }
    pp.poset.set_labels(std::move(labels));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            if (a != b && pp.elements[static_cast<size_t>(a)].refines(pp.elements[static_cast<size_t>(b)]))
                pp.poset.set_lt(a, b);
    if (n <= 8) {
        auto elems = std::make_shared<std::vector<SetPartition>>(pp.elements);
        auto idx = pp.index;
        PosetAction act;
        act.group = PermGroup::symmetric(n);
        act.act = [elems, idx](const Permutation& g, int x) {
            return idx->at((*elems)[static_cast<size_t>(x)].apply(g));
        };
        pp.poset.set_action(std::move(act));
    }
    return pp;
}

/* ----- the poset of proper nontrivial subspaces ----- */

struct SubspacePoset {
    Poset poset;
    VectorSpaceFp space{2, 1};
    std::vector<uint64_t> elements;  // point bitmasks
    std::shared_ptr<std::map<uint64_t, int>> index;
};

/* Subspaces of F_p^k of dimension 1..k-1 under inclusion, with the general
 * linear group acting through its permutation action on points. */
inline SubspacePoset subgroup_poset_B(int k, int p) {
    SubspacePoset sp;
    sp.space = VectorSpaceFp(p, k);
    for (uint64_t s : all_subspaces(sp.space)) {
        int d = subspace_dim(s, sp.space);
        if (d >= 1 && d <= k - 1) sp.elements.push_back(s);
    }
    std::sort(sp.elements.begin(), sp.elements.end(),
              [&](uint64_t a, uint64_t b) {
                  int da = subspace_dim(a, sp.space), db = subspace_dim(b, sp.space);
                  if (da != db) return da < db;
                  return a < b;
              });
    int m = static_cast<int>(sp.elements.size());
    sp.poset = Poset(m);
    sp.index = std::make_shared<std::map<uint64_t, int>>();
    std::vector<std::string> labels;
    for (int i = 0; i < m; ++i) {
        (*sp.index)[sp.elements[static_cast<size_t>(i)]] = i;
        std::string lab = "{";
        for (int c = 1; c < sp.space.n; ++c)
            if ((sp.elements[static_cast<size_t>(i)] >> c) & 1) {
                if (lab.size() > 1) lab += ",";
                lab += std::to_string(c);
            }
        lab += "}";
        labels.push_back(lab);
    }
    sp.poset.set_labels(std::move(labels));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            uint64_t sa = sp.elements[static_cast<size_t>(a)], sb = sp.elements[static_cast<size_t>(b)];
            if (a != b && (sa & sb) == sa && sa != sb) sp.poset.set_lt(a, b);
        }
    {
        auto elems = std::make_shared<std::vector<uint64_t>>(sp.elements);
        auto idx = sp.index;
        VectorSpaceFp space = sp.space;
        PosetAction act;
        act.group = general_linear_group(k, p);
        act.act = [elems, idx, space](const Permutation& g, int x) {
            return idx->at(apply_to_subspace(g, (*elems)[static_cast<size_t>(x)], space));
        };
        sp.poset.set_action(std::move(act));
    }
    return sp;
}

/* ----- derived posets ----- */

/* elements fixed by every generator of h, with the induced order; labels are
 * carried over, the action is dropped (reattach one if needed) */
inline Poset fixed_subposet(const Poset& p, const PermGroup& h,
                            std::vector<int>* source_indices = nullptr) {
    require(p.has_action(), "fixed_subposet needs an action");
    require(p.action().group.contains_group(h), "fixed_subposet: subgroup not in acting group");
    std::vector<int> keep;
    for (int x = 0; x < p.size(); ++x) {
        bool fixed = true;
        for (const auto& g : h.generators())
            if (p.act(g, x) != x) {
                fixed = false;
                break;
            }
        if (fixed) keep.push_back(x);
    }
    Poset out(static_cast<int>(keep.size()));
    std::vector<std::string> labels;
    for (size_t i = 0; i < keep.size(); ++i) {
        for (size_t j = 0; j < keep.size(); ++j)
            if (p.lt(keep[i], keep[j])) out.set_lt(static_cast<int>(i), static_cast<int>(j));
        if (p.has_labels()) labels.push_back(p.label(keep[i]));
    }
    if (!labels.empty()) out.set_labels(std::move(labels));
    if (source_indices) *source_indices = keep;
    return out;
}

/* Unreduced suspension at the poset level: two fresh incomparable minimal
 * elements are appended (indices size and size+1, labeled "s" and "t"); any
 * action is extended to fix both.  The nerve is the unreduced suspension of
 * the nerve, and "s" is the conventional basepoint. */
inline Poset suspended_poset(const Poset& p) {
    int n = p.size();
    Poset out(n + 2);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (p.lt(a, b)) out.set_lt(a, b);
    for (int b = 0; b < n; ++b) {
        out.set_lt(n, b);
        out.set_lt(n + 1, b);
    }
    {
        std::vector<std::string> labels;
        for (int a = 0; a < n; ++a) labels.push_back(p.label(a));
        labels.push_back("s");
        labels.push_back("t");
        out.set_labels(std::move(labels));
    }
    if (p.has_action()) {
        PosetAction act;
        act.group = p.action().group;
        auto inner = p.action().act;
        act.act = [inner, n](const Permutation& g, int x) {
            return x >= n ? x : inner(g, x);
        };
        out.set_action(std::move(act));
    }
    return out;
}

/* product poset with componentwise order; optional diagonal action built from
 * the two factors' actions (which must share the acting group) */
inline Poset product_poset(const Poset& a, const Poset& b, bool with_action = false) {
    long total = static_cast<long>(a.size()) * b.size();
    require_capacity(total, kMaxPosetElements, "product poset size");
    Poset out(static_cast<int>(total));
    auto id = [&](int x, int y) { return x * b.size() + y; };
    for (int x = 0; x < a.size(); ++x)
        for (int y = 0; y < b.size(); ++y)
            for (int x2 = 0; x2 < a.size(); ++x2)
                for (int y2 = 0; y2 < b.size(); ++y2)
                    if (a.leq(x, x2) && b.leq(y, y2) && !(x == x2 && y == y2))
                        out.set_lt(id(x, y), id(x2, y2));
    if (a.has_labels() || b.has_labels()) {
        std::vector<std::string> labels;
        for (int x = 0; x < a.size(); ++x)
            for (int y = 0; y < b.size(); ++y)
                labels.push_back("(" + a.label(x) + "," + b.label(y) + ")");
        out.set_labels(std::move(labels));
    }
    if (with_action) {
        require(a.has_action() && b.has_action(), "product action needs both factors acted on");
        require(a.action().group.same_group(b.action().group),
                "product action needs a common acting group");
        PosetAction act;
        act.group = a.action().group;
        auto fa = a.action().act;
        auto fb = b.action().act;
        int bsize = b.size();
        act.act = [fa, fb, bsize](const Permutation& g, int z) {
            return fa(g, z / bsize) * bsize + fb(g, z % bsize);
        };
        out.set_action(std::move(act));
    }
    return out;
}

/* Levelwise join poset on the elements of w: pairs (element of w, level),
 * ordered by strict level comparison alone.  Its nerve is the (m+1)-fold
 * join of copies of w as a discrete set, so it is contractible through
 * degrees below m, and w acts freely by left translation. */
inline Poset join_levels_poset(const PermGroup& w, int m) {
    long n = w.order() * (m + 1);
    require_capacity(n, kMaxPosetElements, "join poset size");
    Poset out(static_cast<int>(n));
    long wsize = w.order();
    auto id = [&](int wi, int lev) { return static_cast<int>(lev * wsize + wi); };
    for (int l1 = 0; l1 <= m; ++l1)
        for (int l2 = l1 + 1; l2 <= m; ++l2)
            for (int w1 = 0; w1 < wsize; ++w1)
                for (int w2 = 0; w2 < wsize; ++w2) out.set_lt(id(w1, l1), id(w2, l2));
    PosetAction act;
    act.group = w;
    auto wp = std::make_shared<PermGroup>(w);
    act.act = [wp, wsize](const Permutation& g, int z) {
        long lev = z / wsize, wi = z % wsize;
        int moved = wp->element_index(g * wp->elements()[static_cast<size_t>(wi)]);
        return static_cast<int>(lev * wsize + moved);
    };
    out.set_action(std::move(act));
    return out;
}

/* Induction of an n-poset to the full group along left cosets: elements are
 * (coset, element of q); the order only relates elements within a coset. */
inline Poset induced_poset(const CosetTable& cosets, const Poset& q) {
    require(q.has_action(), "induced_poset needs an action on the fiber poset");
    require(q.action().group.contains_group(cosets.n), "fiber action must cover the subgroup");
    long total = cosets.count() * q.size();
    require_capacity(total, kMaxPosetElements, "induced poset size");
    Poset out(static_cast<int>(total));
    int qsize = q.size();
    for (int c = 0; c < cosets.count(); ++c)
        for (int x = 0; x < qsize; ++x)
            for (int y = 0; y < qsize; ++y)
                if (q.lt(x, y)) out.set_lt(c * qsize + x, c * qsize + y);
    PosetAction act;
    act.group = cosets.g;
    auto table = std::make_shared<CosetTable>(cosets);
    auto qact = q.action().act;
    act.act = [table, qact, qsize](const Permutation& g, int z) {
        int c = z / qsize, x = z % qsize;
        auto [c2, m] = table->translate(g, c);
        return c2 * qsize + qact(m, x);
    };
    out.set_action(std::move(act));
    return out;
}

/* ----- face poset of the boundary of a cross-polytope ----- */

struct CrossPolytopeFaces {
    Poset poset;
    int axes = 0;  // nj axes; vertex set is {+-e_a}
    // each face is a pair of disjoint bitmasks (positive axes, negative axes)
    std::vector<std::pair<uint32_t, uint32_t>> faces;
    std::shared_ptr<std::map<std::pair<uint32_t, uint32_t>, int>> index;
};

/* Proper faces of the boundary of the (axes)-dimensional cross-polytope:
 * nonempty sets of vertices with no antipodal pair, ordered by inclusion.
 * With n and j split, the symmetric group on n letters permutes axis blocks
 * of size j. */
inline CrossPolytopeFaces cross_polytope_faces(int n, int j) {
    require(n >= 1 && j >= 1, "cross polytope needs n, j >= 1");
    int axes = n * j;
    require_capacity(axes, 6, "cross polytope axes (n*j)");
    CrossPolytopeFaces cp;
    cp.axes = axes;
    for (uint32_t pos = 0; pos < (1u << axes); ++pos)
        for (uint32_t neg = 0; neg < (1u << axes); ++neg) {
            if (pos & neg) continue;
            if (!(pos | neg)) continue;
            cp.faces.emplace_back(pos, neg);
        }
    std::sort(cp.faces.begin(), cp.faces.end(),
              [](const std::pair<uint32_t, uint32_t>& a, const std::pair<uint32_t, uint32_t>& b) {
                  int ca = __builtin_popcount(a.first | a.second);
                  int cb = __builtin_popcount(b.first | b.second);
                  if (ca != cb) return ca < cb;
                  return a < b;
              });
    int m = static_cast<int>(cp.faces.size());
    cp.poset = Poset(m);
    cp.index = std::make_shared<std::map<std::pair<uint32_t, uint32_t>, int>>();
    for (int i = 0; i < m; ++i) (*cp.index)[cp.faces[static_cast<size_t>(i)]] = i;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            if (a == b) continue;
            auto [pa, na] = cp.faces[static_cast<size_t>(a)];
            auto [pb, nb] = cp.faces[static_cast<size_t>(b)];
            if ((pa & pb) == pa && (na & nb) == na && !(pa == pb && na == nb))
                cp.poset.set_lt(a, b);
        }
    {
        auto faces = std::make_shared<std::vector<std::pair<uint32_t, uint32_t>>>(cp.faces);
        auto idx = cp.index;
        PosetAction act;
        act.group = PermGroup::symmetric(n);
        int jj = j;
        int ax = axes;
        act.act = [faces, idx, jj, ax](const Permutation& g, int x) {
            auto [pos, neg] = (*faces)[static_cast<size_t>(x)];
            uint32_t np = 0, nn = 0;
            for (int a = 0; a < ax; ++a) {
                int i = a / jj, t = a % jj;
                int a2 = g(i) * jj + t;
                if ((pos >> a) & 1) np |= 1u << a2;
                if ((neg >> a) & 1) nn |= 1u << a2;
            }
            return idx->at({np, nn});
        };
        cp.poset.set_action(std::move(act));
    }
    return cp;
}

/* Left cosets of h in g as an antichain with the translation action. */
inline Poset coset_poset(const PermGroup& g, const PermGroup& h) {
    CosetTable table = left_cosets(g, h);
    Poset out(table.count());
    {
        std::vector<std::string> labels;
        for (int c = 0; c < table.count(); ++c)
            labels.push_back(table.reps[static_cast<size_t>(c)].to_cycle_string());
        out.set_labels(std::move(labels));
    }
    PosetAction act;
    act.group = g;
    auto shared = std::make_shared<CosetTable>(std::move(table));
    act.act = [shared](const Permutation& x, int c) { return shared->translate(x, c).first; };
    out.set_action(std::move(act));
    return out;
}

/* Disjoint union with the second copy's indices offset by a.size().  When
 * both factors carry actions they must share the acting group; the union
 * then acts componentwise.  Order never relates the two copies. */
inline Poset disjoint_union_poset(const Poset& a, const Poset& b) {
    int na = a.size(), nb = b.size();
    require_capacity(static_cast<long>(na) + nb, kMaxPosetElements, "union poset size");
    Poset out(na + nb);
    for (int x = 0; x < na; ++x)
        for (int y = 0; y < na; ++y)
            if (a.lt(x, y)) out.set_lt(x, y);
    for (int x = 0; x < nb; ++x)
        for (int y = 0; y < nb; ++y)
            if (b.lt(x, y)) out.set_lt(na + x, na + y);
    {
        std::vector<std::string> labels;
        for (int x = 0; x < na; ++x) labels.push_back(a.label(x) + "#0");
        for (int x = 0; x < nb; ++x) labels.push_back(b.label(x) + "#1");
        out.set_labels(std::move(labels));
    }
    if (a.has_action() && b.has_action()) {
        require(a.action().group.same_group(b.action().group),
                "union factors must share the acting group");
        PosetAction act;
        act.group = a.action().group;
        auto fa = a.action().act;
        auto fb = b.action().act;
        act.act = [fa, fb, na](const Permutation& g, int x) {
            return x < na ? fa(g, x) : na + fb(g, x - na);
        };
        out.set_action(std::move(act));
    }
    return out;
}

/* Fiber product of two poset maps into a common base: pairs with equal
 * images, ordered componentwise, with the diagonal action.  Both maps must
 * be equivariant; chains here are exactly the matching pairs of chains. */
struct PosetPullback {
    Poset poset;
    std::vector<int> to_left, to_right;  // element projections
};

inline PosetPullback pullback_poset(const Poset& a, const std::vector<int>& fa, const Poset& b,
                                    const std::vector<int>& fb, const Poset& base) {
    require(static_cast<int>(fa.size()) >= a.size() && static_cast<int>(fb.size()) >= b.size(),
            "pullback maps must cover their posets");
    for (int x = 0; x < a.size(); ++x)
        require(fa[static_cast<size_t>(x)] >= 0 && fa[static_cast<size_t>(x)] < base.size(),
                "pullback: left map leaves the base");
    for (int z = 0; z < b.size(); ++z)
        require(fb[static_cast<size_t>(z)] >= 0 && fb[static_cast<size_t>(z)] < base.size(),
                "pullback: right map leaves the base");
    require(a.has_action() && b.has_action() && base.has_action(),
            "pullback needs actions on all three posets");
    require(a.action().group.same_group(b.action().group) &&
                a.action().group.same_group(base.action().group),
            "pullback factors must share the acting group");
    for (const auto& g : a.action().group.generators()) {
        for (int x = 0; x < a.size(); ++x)
            require(fa[static_cast<size_t>(a.act(g, x))] == base.act(g, fa[static_cast<size_t>(x)]),
                    "pullback: left map is not equivariant");
        for (int z = 0; z < b.size(); ++z)
            require(fb[static_cast<size_t>(b.act(g, z))] == base.act(g, fb[static_cast<size_t>(z)]),
                    "pullback: right map is not equivariant");
    }

    PosetPullback out;
    std::vector<std::pair<int, int>> pairs;
    for (int x = 0; x < a.size(); ++x)
        for (int z = 0; z < b.size(); ++z)
            if (fa[static_cast<size_t>(x)] == fb[static_cast<size_t>(z)]) pairs.emplace_back(x, z);
    require_capacity(static_cast<long>(pairs.size()), kMaxPosetElements, "pullback poset size");
    std::map<std::pair<int, int>, int> index;
    for (size_t i = 0; i < pairs.size(); ++i) index[pairs[i]] = static_cast<int>(i);

    out.poset = Poset(static_cast<int>(pairs.size()));
    for (size_t i = 0; i < pairs.size(); ++i)
        for (size_t j = 0; j < pairs.size(); ++j)
            if (a.lt(pairs[i].first, pairs[j].first) && b.lt(pairs[i].second, pairs[j].second))
                out.poset.set_lt(static_cast<int>(i), static_cast<int>(j));
    {
        std::vector<std::string> labels;
        for (const auto& [x, z] : pairs) labels.push_back(a.label(x) + "*" + b.label(z));
        out.poset.set_labels(std::move(labels));
    }
    for (const auto& [x, z] : pairs) {
        out.to_left.push_back(x);
        out.to_right.push_back(z);
    }
    {
        PosetAction act;
        act.group = a.action().group;
        auto fa2 = a.action().act;
        auto fb2 = b.action().act;
        auto prs = std::make_shared<std::vector<std::pair<int, int>>>(std::move(pairs));
        auto idx = std::make_shared<std::map<std::pair<int, int>, int>>(std::move(index));
        act.act = [fa2, fb2, prs, idx](const Permutation& g, int i) {
            const auto& [x, z] = (*prs)[static_cast<size_t>(i)];
            return idx->at({fa2(g, x), fb2(g, z)});
        };
        out.poset.set_action(std::move(act));
    }
    return out;
}

}  // namespace parcx
