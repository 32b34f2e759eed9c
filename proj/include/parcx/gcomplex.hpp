#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "parcx/chain_complex.hpp"
#include "parcx/common.hpp"
#include "parcx/poset.hpp"

namespace parcx {

/* Action on a complex: a group together with its action on vertex ids. */
struct ComplexAction {
    PermGroup group;
    std::function<int(const Permutation&, int)> act_vertex;
};

/* A finite simplicial complex whose simplices are stored as tuples in chain
 * order (each tuple lists its vertices in the underlying poset order).  Group
 * actions preserve that order, so they act on tuples elementwise and no
 * orientation signs ever arise. */
class GComplex {
  public:
    GComplex() = default;

    /* nerve of a poset: q-simplices are the strict (q+1)-chains */
    static GComplex order_complex(const Poset& p) {
        GComplex x;
        // chains by depth-first extension; tuples come out in index-lex order
        std::vector<std::vector<int>> stack;
        for (int v = 0; v < p.size(); ++v) stack.push_back({v});
        long total = 0;
        while (!stack.empty()) {
            std::vector<int> chain = std::move(stack.back());
            stack.pop_back();
            int q = static_cast<int>(chain.size()) - 1;
            if (static_cast<int>(x.simp_.size()) <= q) x.simp_.resize(static_cast<size_t>(q) + 1);
            x.simp_[static_cast<size_t>(q)].push_back(chain);
            require_capacity(++total, kMaxSimplices, "simplex count");
            int last = chain.back();
            for (int v = p.size() - 1; v >= 0; --v)
                if (p.lt(last, v)) {
                    std::vector<int> longer = chain;
                    longer.push_back(v);
                    stack.push_back(std::move(longer));
                }
        }
        for (auto& level : x.simp_) std::sort(level.begin(), level.end());
        x.build_index();
        if (p.has_action()) {
            x.action_ = ComplexAction{p.action().group, p.action().act};
        }
        return x;
    }

    int dimension() const { return static_cast<int>(simp_.size()) - 1; }
    int count(int q) const {
        return (q >= 0 && q <= dimension()) ? static_cast<int>(simp_[static_cast<size_t>(q)].size())
                                            : 0;
    }
    const std::vector<std::vector<int>>& simplices(int q) const {
        return simp_[static_cast<size_t>(q)];
    }
    const std::vector<int>& simplex(int q, int i) const {
        return simp_[static_cast<size_t>(q)][static_cast<size_t>(i)];
    }
    int index_of(int q, const std::vector<int>& t) const {
        if (q < 0 || q > dimension()) return -1;
        auto it = index_[static_cast<size_t>(q)].find(t);
        return it == index_[static_cast<size_t>(q)].end() ? -1 : it->second;
    }

    long total_simplices() const {
        long n = 0;
        for (const auto& level : simp_) n += static_cast<long>(level.size());
        return n;
    }

    bool has_action() const { return action_.has_value(); }
    const PermGroup& group() const { return action_->group; }
    int act_vertex(const Permutation& g, int v) const { return action_->act_vertex(g, v); }
    std::vector<int> act_simplex(const Permutation& g, const std::vector<int>& t) const {
        std::vector<int> out(t.size());
        for (size_t i = 0; i < t.size(); ++i) out[i] = act_vertex(g, t[i]);
        return out;
    }

    std::optional<int> basepoint() const { return basepoint_; }

    /* two cone points are appended as fresh minimal vertices; the first one
     * (the south pole) becomes the basepoint */
    GComplex unreduced_suspension() const {
        require(!basepoint_.has_value(), "complex is already pointed");
        int nv = 0;
        for (const auto& t : simp_.empty() ? std::vector<std::vector<int>>{} : simp_[0])
            nv = std::max(nv, t[0] + 1);
        // vertex ids may be sparse (sub complexes); use max id + 1
        int south = nv, north = nv + 1;
        GComplex x;
        x.simp_.resize(static_cast<size_t>(std::max(dimension() + 2, 1)));
        x.simp_[0].push_back({south});
        x.simp_[0].push_back({north});
        for (int q = 0; q <= dimension(); ++q)
            for (const auto& t : simp_[static_cast<size_t>(q)]) {
                x.simp_[static_cast<size_t>(q)].push_back(t);
                std::vector<int> with_s{south}, with_n{north};
                with_s.insert(with_s.end(), t.begin(), t.end());
                with_n.insert(with_n.end(), t.begin(), t.end());
                x.simp_[static_cast<size_t>(q) + 1].push_back(std::move(with_s));
                x.simp_[static_cast<size_t>(q) + 1].push_back(std::move(with_n));
            }
        for (auto& level : x.simp_) std::sort(level.begin(), level.end());
        x.build_index();
        x.basepoint_ = south;
        if (action_) {
            auto inner = action_->act_vertex;
            x.action_ = ComplexAction{
                action_->group, [inner, south, north](const Permutation& g, int v) {
                    return (v == south || v == north) ? v : inner(g, v);
                }};
        }
        return x;
    }

    /* copy of this complex carrying a different action; every generator must
     * map simplices to simplices (the orbit cache starts fresh) */
    GComplex with_action(ComplexAction a) const {
        GComplex x = *this;
        x.orbit_cache_.clear();
        x.action_ = std::move(a);
        for (const auto& g : x.action_->group.generators())
            for (int q = 0; q <= x.dimension(); ++q)
                for (int i = 0; i < x.count(q); ++i)
                    require(x.index_of(q, x.act_simplex(g, x.simplex(q, i))) >= 0,
                            "with_action: the action does not preserve the simplices");
        return x;
    }

    /* full subcomplex on an action-invariant vertex set; vertex ids, the
     * action, and the basepoint (when kept) are preserved */
    GComplex subcomplex_on(const std::set<int>& vertices) const {
        require(action_.has_value(), "subcomplex_on needs an action");
        for (int v : vertices) {
            require(index_of(0, {v}) >= 0, "subcomplex_on: not a vertex of the complex");
            for (const auto& g : action_->group.generators())
                require(vertices.count(act_vertex(g, v)) > 0,
                        "subcomplex_on: vertex set is not action-invariant");
        }
        GComplex x;
        for (int q = 0; q <= dimension(); ++q)
            for (const auto& t : simp_[static_cast<size_t>(q)]) {
                bool keep = true;
                for (int v : t)
                    if (vertices.count(v) == 0) {
                        keep = false;
                        break;
                    }
                if (!keep) continue;
                if (static_cast<int>(x.simp_.size()) <= q) x.simp_.resize(static_cast<size_t>(q) + 1);
                x.simp_[static_cast<size_t>(q)].push_back(t);
            }
        x.build_index();
        x.action_ = action_;
        if (basepoint_ && vertices.count(*basepoint_) > 0) x.basepoint_ = basepoint_;
        return x;
    }

    /* full subcomplex of simplices all of whose vertices are fixed by h;
     * vertex ids are preserved, the action is dropped */
    GComplex fixed_subcomplex(const PermGroup& h) const {
        require(action_.has_value(), "fixed_subcomplex needs an action");
        require(action_->group.contains_group(h), "fixed_subcomplex: subgroup not in acting group");
        std::vector<char> fixed;
        GComplex x;
        for (int q = 0; q <= dimension(); ++q) {
            for (const auto& t : simp_[static_cast<size_t>(q)]) {
                bool keep = true;
                for (int v : t)
                    for (const auto& g : h.generators())
                        if (act_vertex(g, v) != v) {
                            keep = false;
                            break;
                        }
                if (!keep) continue;
                if (static_cast<int>(x.simp_.size()) <= q) x.simp_.resize(static_cast<size_t>(q) + 1);
                x.simp_[static_cast<size_t>(q)].push_back(t);
            }
        }
        x.build_index();
        if (basepoint_) {
            if (x.index_of(0, {*basepoint_}) >= 0) x.basepoint_ = basepoint_;
        }
        return x;
    }

    /* boundary with alternating signs over positional faces */
    SparseZ boundary_matrix(int q) const {
        SparseZ d(count(q - 1), count(q));
        if (q < 1 || q > dimension()) return d;
        for (int i = 0; i < count(q); ++i) {
            const auto& t = simplex(q, i);
            for (size_t k = 0; k < t.size(); ++k) {
                std::vector<int> face;
                face.reserve(t.size() - 1);
                for (size_t m = 0; m < t.size(); ++m)
                    if (m != k) face.push_back(t[m]);
                int fi = index_of(q - 1, face);
                check(fi >= 0, "face of a simplex is missing");
                d.add(fi, i, (k % 2 == 0) ? 1 : -1);
            }
        }
        return d;
    }

    ChainComplexZ chain_complex(bool augmented = false) const {
        std::vector<int> dims;
        for (int q = 0; q <= dimension(); ++q) dims.push_back(count(q));
        if (dimension() < 0) dims.clear();
        ChainComplexZ c(dims);
        for (int q = 1; q <= dimension(); ++q) c.set_boundary(q, boundary_matrix(q));
        if (augmented) {
            if (dims.empty())
                c.set_augmentation(SparseZ(1, 0));
            else
                c.set_standard_augmentation();
        }
        return c;
    }

    /* mod-p chains; pinned drops the basepoint generator in degree zero */
    FpChainComplex chain_complex_mod(int p, bool pinned) const {
        require(!pinned || basepoint_.has_value(), "pinned chains need a basepoint");
        int bp_index = -1;
        if (pinned) bp_index = index_of(0, {*basepoint_});
        std::vector<int> dims;
        for (int q = 0; q <= dimension(); ++q) dims.push_back(count(q));
        if (pinned) dims[0] -= 1;
        FpChainComplex c(p, dims);
        for (int q = 1; q <= dimension(); ++q) {
            SparseZ d = boundary_matrix(q);
            FpMat m(p, dims[static_cast<size_t>(q - 1)], dims[static_cast<size_t>(q)]);
            for (int r = 0; r < d.rows(); ++r) {
                int rr = r;
                if (pinned && q == 1) {
                    if (r == bp_index) continue;
                    rr = r > bp_index ? r - 1 : r;
                }
                for (const auto& [col, v] : d.row(r)) {
                    mpz_class red = v % p;
                    if (red < 0) red += p;
                    m(rr, col) = static_cast<int32_t>(red.get_si());
                }
            }
            c.bnd[static_cast<size_t>(q)] = std::move(m);
        }
        return c;
    }

    /* index of a degree-0 generator in the pinned ordering */
    int pinned_vertex_position(int v) const {
        require(basepoint_.has_value(), "pinned ordering needs a basepoint");
        int bp_index = index_of(0, {*basepoint_});
        int vi = index_of(0, {v});
        check(vi >= 0 && vi != bp_index, "vertex not part of the pinned basis");
        return vi > bp_index ? vi - 1 : vi;
    }

    /* ----- orbit decomposition ----- */

    struct OrbitData {
        std::vector<int> reps;                // representative simplex index per orbit
        std::vector<int> orbit_of;            // simplex index -> orbit id
        std::vector<Permutation> transporter; // simplex = transporter * rep
        std::vector<PermGroup> stabilizers;   // per orbit, stabilizer of the representative
    };

    const OrbitData& orbits(int q) const {
        require(action_.has_value(), "orbit decomposition needs an action");
        auto it = orbit_cache_.find(q);
        if (it != orbit_cache_.end()) return it->second;
        OrbitData od;
        int n = count(q);
        od.orbit_of.assign(n, -1);
        od.transporter.assign(n, Permutation::identity(action_->group.degree()));
        const auto& gens = action_->group.generators();
        for (int start = 0; start < n; ++start) {
            if (od.orbit_of[static_cast<size_t>(start)] >= 0) continue;
            int oid = static_cast<int>(od.reps.size());
            od.reps.push_back(start);  // first in lex order = minimal tuple
            od.orbit_of[static_cast<size_t>(start)] = oid;
            od.transporter[static_cast<size_t>(start)] = Permutation::identity(action_->group.degree());
            std::vector<int> queue{start};
            for (size_t qi = 0; qi < queue.size(); ++qi) {
                int cur = queue[qi];
                for (const auto& g : gens) {
                    std::vector<int> img = act_simplex(g, simplex(q, cur));
                    int idx = index_of(q, img);
                    check(idx >= 0, "action left the simplex set");
                    if (od.orbit_of[static_cast<size_t>(idx)] < 0) {
                        od.orbit_of[static_cast<size_t>(idx)] = oid;
                        od.transporter[static_cast<size_t>(idx)] =
                            g * od.transporter[static_cast<size_t>(cur)];
                        queue.push_back(idx);
                    }
                }
            }
        }
        // stabilizers of representatives by direct filtering
        for (int rep : od.reps) {
            const auto& t = simplex(q, rep);
            std::vector<Permutation> stab;
            for (const auto& g : action_->group.elements()) {
                bool fixes = true;
                for (int v : t)
                    if (act_vertex(g, v) != v) {
                        fixes = false;
                        break;
                    }
                if (fixes) stab.push_back(g);
            }
            od.stabilizers.push_back(
                PermGroup::from_elements(action_->group.degree(), std::move(stab)));
        }
        return orbit_cache_.emplace(q, std::move(od)).first->second;
    }

    /* chain complex of the quotient complex: one generator per orbit.  Valid
     * because the action comes from a poset, where no simplex can be related
     * to a proper translate of itself. */
    ChainComplexZ quotient_chain_complex() const {
        std::vector<int> dims;
        for (int q = 0; q <= dimension(); ++q)
            dims.push_back(static_cast<int>(orbits(q).reps.size()));
        ChainComplexZ c(dims);
        for (int q = 1; q <= dimension(); ++q) {
            const auto& oq = orbits(q);
            const auto& oprev = orbits(q - 1);
            SparseZ d(dims[static_cast<size_t>(q - 1)], dims[static_cast<size_t>(q)]);
            for (size_t o = 0; o < oq.reps.size(); ++o) {
                const auto& t = simplex(q, oq.reps[o]);
                for (size_t k = 0; k < t.size(); ++k) {
                    std::vector<int> face;
                    for (size_t m = 0; m < t.size(); ++m)
                        if (m != k) face.push_back(t[m]);
                    int fi = index_of(q - 1, face);
                    check(fi >= 0, "face of a simplex is missing");
                    d.add(oprev.orbit_of[static_cast<size_t>(fi)], static_cast<int>(o),
                          (k % 2 == 0) ? 1 : -1);
                }
            }
            c.set_boundary(q, d);
        }
        return c;
    }

  private:
    void build_index() {
        index_.assign(simp_.size(), {});
        for (size_t q = 0; q < simp_.size(); ++q)
            for (size_t i = 0; i < simp_[q].size(); ++i)
                index_[q][simp_[q][i]] = static_cast<int>(i);
    }

    std::vector<std::vector<std::vector<int>>> simp_;
    std::vector<std::map<std::vector<int>, int>> index_;
    std::optional<ComplexAction> action_;
    std::optional<int> basepoint_;
    mutable std::map<int, OrbitData> orbit_cache_;
};

/* The equivariant sphere: unreduced suspension of the nerve of the face
 * poset of the cross-polytope boundary on n*j axes (the barycentric
 * subdivision of that boundary), with the symmetric group permuting axis
 * blocks and the south pole as basepoint.  For every subgroup H, the fixed
 * subcomplex has the reduced homology of a sphere of dimension j*(orbits
 * of H). */
inline GComplex sphere_model(int n, int j) {
    CrossPolytopeFaces cp = cross_polytope_faces(n, j);
    return GComplex::order_complex(cp.poset).unreduced_suspension();
}

/* one-point complex carrying a (necessarily trivial) action of the given
 * group; useful as the fiber of homotopy-quotient models */
inline GComplex point_complex(const PermGroup& w) {
    Poset p(1);
    p.set_labels({"pt"});
    p.set_action({w, [](const Permutation&, int) { return 0; }});
    return GComplex::order_complex(p);
}

/* order-preserving injection sending a subspace to the partition of the
 * translation points into its cosets */
inline std::vector<int> tits_map(const SubspacePoset& b, const PartitionPoset& pn) {
    int n = b.space.n;
    require(!pn.elements.empty() || b.elements.empty(), "partition poset too small");
    require(pn.elements.empty() || pn.elements[0].degree() == n, "tits map: degree mismatch");
    std::vector<int> out;
    for (uint64_t mask : b.elements) {
        std::vector<char> seen(static_cast<size_t>(n), 0);
        std::vector<std::vector<int>> blocks;
        for (int x = 0; x < n; ++x) {
            if (seen[static_cast<size_t>(x)]) continue;
            std::vector<int> blk;
            for (int c = 0; c < n; ++c)
                if ((mask >> c) & 1) {
                    int y = b.space.add(x, c);
                    blk.push_back(y);
                    seen[static_cast<size_t>(y)] = 1;
                }
            blocks.push_back(std::move(blk));
        }
        int idx = pn.index_of(SetPartition::from_blocks(n, std::move(blocks)));
        check(idx >= 0, "coset partition missing from the partition poset");
        out.push_back(idx);
    }
    return out;
}

/* Poset of all simplices of a complex under face containment, carrying the
 * induced action; its order complex is the barycentric subdivision. */
inline Poset simplex_poset(const GComplex& x) {
    require(x.has_action(), "simplex_poset needs an action");
    long total = x.total_simplices();
    require_capacity(total, kMaxPosetElements, "simplex poset size");
    std::vector<std::pair<int, int>> cells;  // (degree, index)
    std::vector<long> offset(static_cast<size_t>(x.dimension()) + 2, 0);
    for (int q = 0; q <= x.dimension(); ++q) {
        offset[static_cast<size_t>(q) + 1] = offset[static_cast<size_t>(q)] + x.count(q);
        for (int i = 0; i < x.count(q); ++i) cells.emplace_back(q, i);
    }
    Poset out(static_cast<int>(total));
    auto contains = [&x](const std::pair<int, int>& small, const std::pair<int, int>& big) {
        // subchains keep the ambient vertex order, so scan for a subsequence
        const auto& s = x.simplex(small.first, small.second);
        const auto& b = x.simplex(big.first, big.second);
        size_t k = 0;
        for (int v : b)
            if (k < s.size() && s[k] == v) ++k;
        return k == s.size();
    };
    for (size_t i = 0; i < cells.size(); ++i)
        for (size_t j = 0; j < cells.size(); ++j)
            if (cells[i].first < cells[j].first && contains(cells[i], cells[j]))
                out.set_lt(static_cast<int>(i), static_cast<int>(j));
    {
        std::vector<std::string> labels;
        for (const auto& [q, i] : cells) {
            std::string s = "{";
            const auto& t = x.simplex(q, i);
            for (size_t k = 0; k < t.size(); ++k)
                s += (k ? " " : "") + std::to_string(t[k]);
            labels.push_back(s + "}");
        }
        out.set_labels(std::move(labels));
    }
    {
        PosetAction act;
        act.group = x.group();
        auto xp = std::make_shared<GComplex>(x);
        auto off = std::make_shared<std::vector<long>>(std::move(offset));
        auto cls = std::make_shared<std::vector<std::pair<int, int>>>(std::move(cells));
        act.act = [xp, off, cls](const Permutation& g, int e) {
            const auto& [q, i] = (*cls)[static_cast<size_t>(e)];
            int img = xp->index_of(q, xp->act_simplex(g, xp->simplex(q, i)));
            check(img >= 0, "simplex poset: action left the simplex set");
            return static_cast<int>((*off)[static_cast<size_t>(q)] + img);
        };
        out.set_action(std::move(act));
    }
    return out;
}

/* Zero-dimensional complex of left cosets with the translation action. */
inline GComplex coset_complex(const PermGroup& g, const PermGroup& h) {
    return GComplex::order_complex(coset_poset(g, h));
}

}  // namespace parcx
