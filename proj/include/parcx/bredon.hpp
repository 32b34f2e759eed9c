#pragma once

/* Equivariant chain and cochain complexes of a G-simplicial complex with
 * coefficients in a coefficient system.
 *
 * Chains in degree q carry one block per orbit of q-simplices, namely the
 * value of the coefficient system at the orbit's stabilizer.  Boundary
 * blocks are structure matrices of the face maps; cochains use the
 * contravariant structure maps along the same faces.  On top of the
 * complexes this header provides transfer/pushforward maps along simplicial
 * coverings, restriction of coefficients to a subgroup together with its
 * comparison against induced spaces, a one-orbit-type approximation via a
 * free resolution over the Weyl group, and report-producing verifiers for
 * the suspension gluing sequence and transfer naturality.
 */

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "parcx/chain_complex.hpp"
#include "parcx/common.hpp"
#include "parcx/fgab.hpp"
#include "parcx/gcomplex.hpp"
#include "parcx/group_ring.hpp"
#include "parcx/linear_groups.hpp"
#include "parcx/mackey.hpp"
#include "parcx/perm_group.hpp"
#include "parcx/poset.hpp"
#include "parcx/report.hpp"
#include "parcx/snf.hpp"

namespace parcx {

namespace detail {

inline void add_scaled_block(SparseZ& m, const SparseZ& blk, long r0, long c0, long scale) {
    for (int r = 0; r < blk.rows(); ++r)
        for (const auto& [c, v] : blk.row(r))
            m.add(static_cast<int>(r0) + r, static_cast<int>(c0) + c, v * scale);
}

/* presentation of a finite direct sum, generators listed block by block */
inline PresentedAb direct_sum_presented(const PresentedAb& a, const PresentedAb& b) {
    SparseZ rel(a.gens + b.gens, a.relations.cols() + b.relations.cols());
    add_scaled_block(rel, a.relations, 0, 0, 1);
    add_scaled_block(rel, b.relations, a.gens, a.relations.cols(), 1);
    return PresentedAb(a.gens + b.gens, rel);
}

}  // namespace detail

/* ------------------------------------------------------------------------
 * The equivariant (co)chain complex
 * --------------------------------------------------------------------- */

class BredonChainComplex {
  public:
    BredonChainComplex(const GComplex& x, CoefficientSystem cs, bool cohomological, bool reduced,
                       std::optional<std::uint64_t> seed)
        : x_(x), cs_(std::move(cs)), cohomological_(cohomological), reduced_(reduced) {
        require(x_.has_action(), "equivariant chains need a group action");
        require(x_.group().same_group(cs_.group()),
                "the complex and the coefficients must share one group");
        if (reduced_)
            require(x_.basepoint().has_value(), "reduced chains need a basepoint");
        build(seed);
    }

    int top() const { return top_; }
    bool cohomological() const { return cohomological_; }
    bool reduced() const { return reduced_; }
    int locality() const { return cs_.locality(); }
    const CoefficientSystem& coefficients() const { return cs_; }
    const GComplex& space() const { return x_; }

    int orbit_count(int q) const {
        return in_range(q) ? static_cast<int>(deg_[static_cast<size_t>(q)].kept.size()) : 0;
    }
    long gens(int q) const { return in_range(q) ? deg_[static_cast<size_t>(q)].total : 0; }

    /* generator offset of orbit block j inside degree q */
    long offset(int q, int j) const {
        require(in_range(q) && j >= 0 && j < orbit_count(q), "orbit block out of range");
        return deg_[static_cast<size_t>(q)].offsets[static_cast<size_t>(j)];
    }
    int orbit_class(int q, int j) const {
        require(in_range(q) && j >= 0 && j < orbit_count(q), "orbit block out of range");
        return deg_[static_cast<size_t>(q)].cls[static_cast<size_t>(j)];
    }
    const PermGroup& orbit_stabilizer(int q, int j) const {
        require(in_range(q) && j >= 0 && j < orbit_count(q), "orbit block out of range");
        return deg_[static_cast<size_t>(q)].stabs[static_cast<size_t>(j)];
    }

    /* direct sum of the coefficient values over the degree-q orbit blocks */
    FGAbGroup chain_group(int q) const {
        if (!in_range(q)) return FGAbGroup::zero();
        return detail::direct_sum_groups(deg_[static_cast<size_t>(q)].values);
    }

    /* the G-set of degree-q orbit representatives, one stabilizer per block */
    FiniteGSet gset(int q) const {
        FiniteGSet s;
        if (in_range(q)) s.stabilizers = deg_[static_cast<size_t>(q)].stabs;
        return s;
    }

    /* generator-level differential: for chains the boundary C_q -> C_{q-1},
     * for cochains the degree-raising map C^q -> C^{q+1} */
    SparseZ differential(int q) const {
        if (!cohomological_) {
            if (q >= 1 && q <= top_) return pc_.boundary(q);
            return SparseZ(static_cast<int>(gens(q - 1)), static_cast<int>(gens(q)));
        }
        if (q >= 0 && q <= top_ - 1) return pc_.boundary(top_ - q);
        return SparseZ(static_cast<int>(gens(q + 1)), static_cast<int>(gens(q)));
    }
    SparseZ boundary(int q) const { return differential(q); }

    /* presented chain group in degree q (relations from the torsion values) */
    PresentedAb group_at(int q) const {
        if (!in_range(q)) return PresentedAb::free_group(0);
        return pc_.group(internal(q));
    }

    /* consecutive differentials compose to zero modulo the relations */
    bool squares_to_zero() const {
        for (int i = 2; i <= pc_.top(); ++i) {
            SparseZ sq = pc_.boundary(i - 1) * pc_.boundary(i);
            SparseZ zero(sq.rows(), sq.cols());
            if (!detail::congruent_columns(sq, zero, pc_.group(i - 2))) return false;
        }
        return true;
    }

    /* the stored complex, in its computational orientation */
    const PresentedComplex& complex() const { return pc_; }

    PresentedHomology homology_classes(int q) const { return PresentedHomology(pc_, internal(q)); }

    FGAbGroup homology(int q) const {
        if (!in_range(q)) return FGAbGroup::zero();
        FGAbGroup h = pc_.homology(internal(q));
        return cs_.locality() > 0 ? h.p_localized(cs_.locality()) : h;
    }

    std::vector<FGAbGroup> all_homology() const {
        std::vector<FGAbGroup> out;
        for (int q = 0; q <= top_; ++q) out.push_back(homology(q));
        return out;
    }

  private:
    struct DegreeData {
        std::vector<int> kept;      // orbit ids carried by the complex, ascending
        std::vector<int> kept_pos;  // orbit id -> block index, -1 when dropped
        std::vector<PermGroup> stabs;
        std::vector<Permutation> wits;  // representative twist per block
        std::vector<int> cls;
        std::vector<long> offsets;
        std::vector<FGAbGroup> values;
        long total = 0;
    };

    bool in_range(int q) const { return q >= 0 && q <= top_; }
    int internal(int q) const { return cohomological_ ? top_ - q : q; }

    static PresentedAb presented_chain_group(const DegreeData& d) {
        int nrel = 0;
        for (const auto& v : d.values) nrel += static_cast<int>(v.torsion.size());
        SparseZ rel(static_cast<int>(d.total), nrel);
        int col = 0;
        for (size_t i = 0; i < d.values.size(); ++i) {
            const FGAbGroup& v = d.values[i];
            for (size_t k = 0; k < v.torsion.size(); ++k)
                rel.set(static_cast<int>(d.offsets[i] + v.free_rank + static_cast<long>(k)), col++,
                        v.torsion[k]);
        }
        return PresentedAb(static_cast<int>(d.total), rel);
    }

    void build(std::optional<std::uint64_t> seed) {
        top_ = x_.dimension();
        if (top_ < 0) return;
        std::mt19937_64 rng(seed ? *seed : 0);
        const auto& elems = x_.group().elements();
        const long gorder = x_.group().order();
        deg_.assign(static_cast<size_t>(top_) + 1, DegreeData{});

        for (int q = 0; q <= top_; ++q) {
            const auto& od = x_.orbits(q);
            DegreeData& d = deg_[static_cast<size_t>(q)];
            const int nor = static_cast<int>(od.reps.size());
            d.kept_pos.assign(static_cast<size_t>(nor), -1);
            int dropped = -1;
            if (reduced_ && q == 0) {
                int bidx = x_.index_of(0, std::vector<int>{*x_.basepoint()});
                require(bidx >= 0, "the basepoint is missing from the complex");
                dropped = od.orbit_of[static_cast<size_t>(bidx)];
                require(od.stabilizers[static_cast<size_t>(dropped)].order() == gorder,
                        "reduced chains need a basepoint fixed by the whole group");
            }
            for (int o = 0; o < nor; ++o) {
                if (o == dropped) continue;
                d.kept_pos[static_cast<size_t>(o)] = static_cast<int>(d.kept.size());
                d.kept.push_back(o);
                Permutation w = Permutation::identity(x_.group().degree());
                if (seed)
                    w = elems[static_cast<size_t>(rng() %
                                                  static_cast<unsigned long long>(gorder))];
                PermGroup stab =
                    seed ? detail::conjugate_subgroup(od.stabilizers[static_cast<size_t>(o)],
                                                      w.inverse())
                         : od.stabilizers[static_cast<size_t>(o)];
                int cls = cs_.table().locate(stab).cls;
                d.wits.push_back(std::move(w));
                d.stabs.push_back(std::move(stab));
                d.cls.push_back(cls);
                d.offsets.push_back(d.total);
                d.values.push_back(cs_.value(cls));
                d.total += cs_.gens(cls);
            }
        }

        std::vector<PresentedAb> groups;
        groups.reserve(static_cast<size_t>(top_) + 1);
        for (int q = 0; q <= top_; ++q)
            groups.push_back(presented_chain_group(deg_[static_cast<size_t>(q)]));

        // one block per (orbit, face) pair; the witness carries the face back
        // to the twisted representative of its own orbit
        std::vector<SparseZ> mats;
        for (int q = 1; q <= top_; ++q) {
            const DegreeData& dq = deg_[static_cast<size_t>(q)];
            const DegreeData& dp = deg_[static_cast<size_t>(q) - 1];
            const auto& od = x_.orbits(q);
            const auto& odp = x_.orbits(q - 1);
            SparseZ m = cohomological_
                            ? SparseZ(static_cast<int>(dq.total), static_cast<int>(dp.total))
                            : SparseZ(static_cast<int>(dp.total), static_cast<int>(dq.total));
            for (size_t j = 0; j < dq.kept.size(); ++j) {
                const int o = dq.kept[j];
                std::vector<int> rep =
                    x_.act_simplex(dq.wits[j], x_.simplex(q, od.reps[static_cast<size_t>(o)]));
                int sign = 1;
                for (int i = 0; i <= q; ++i, sign = -sign) {
                    std::vector<int> face = rep;
                    face.erase(face.begin() + i);
                    int fidx = x_.index_of(q - 1, face);
                    check(fidx >= 0, "face left the complex");
                    int oc = odp.orbit_of[static_cast<size_t>(fidx)];
                    int pos = dp.kept_pos[static_cast<size_t>(oc)];
                    if (pos < 0) continue;
                    Permutation t = odp.transporter[static_cast<size_t>(fidx)] *
                                    dp.wits[static_cast<size_t>(pos)].inverse();
                    OrbitMap om{dq.stabs[j], dp.stabs[static_cast<size_t>(pos)], std::move(t)};
                    if (cohomological_)
                        detail::add_scaled_block(m, cs_.contravariant(om), dq.offsets[j],
                                                 dp.offsets[static_cast<size_t>(pos)], sign);
                    else
                        detail::add_scaled_block(m, cs_.covariant(om),
                                                 dp.offsets[static_cast<size_t>(pos)],
                                                 dq.offsets[j], sign);
                }
            }
            mats.push_back(std::move(m));
        }

        if (!cohomological_) {
            pc_ = PresentedComplex(std::move(groups));
            for (int q = 1; q <= top_; ++q)
                pc_.set_boundary(q, std::move(mats[static_cast<size_t>(q) - 1]));
        } else {
            std::vector<PresentedAb> rev(groups.rbegin(), groups.rend());
            pc_ = PresentedComplex(std::move(rev));
            for (int i = 1; i <= top_; ++i)
                pc_.set_boundary(i, std::move(mats[static_cast<size_t>(top_ - i)]));
        }
    }

    GComplex x_;
    CoefficientSystem cs_;
    bool cohomological_ = false;
    bool reduced_ = false;
    int top_ = -1;
    std::vector<DegreeData> deg_;
    PresentedComplex pc_;
};

inline BredonChainComplex bredon_chains(const GComplex& x, const CoefficientSystem& cs,
                                        bool reduced = false,
                                        std::optional<std::uint64_t> seed = std::nullopt) {
    return BredonChainComplex(x, cs, false, reduced, seed);
}

inline BredonChainComplex bredon_cochains(const GComplex& x, const CoefficientSystem& cs,
                                          bool reduced = false,
                                          std::optional<std::uint64_t> seed = std::nullopt) {
    return BredonChainComplex(x, cs, true, reduced, seed);
}

inline std::vector<FGAbGroup> bredon_homology(const GComplex& x, const CoefficientSystem& cs,
                                              bool reduced = false) {
    return bredon_chains(x, cs, reduced).all_homology();
}

inline std::vector<FGAbGroup> bredon_cohomology(const GComplex& x, const CoefficientSystem& cs,
                                                bool reduced = false) {
    return bredon_cochains(x, cs, reduced).all_homology();
}

inline std::vector<FGAbGroup> reduced_bredon_homology(const GComplex& x,
                                                      const CoefficientSystem& cs) {
    return bredon_homology(x, cs, true);
}

inline std::vector<FGAbGroup> reduced_bredon_cohomology(const GComplex& x,
                                                        const CoefficientSystem& cs) {
    return bredon_cohomology(x, cs, true);
}

/* ------------------------------------------------------------------------
 * Equivariant simplicial maps, coverings, transfers
 * --------------------------------------------------------------------- */

/* vertex-level map of G-complexes; `vertex_map` is indexed by vertex id */
struct SimplicialGMap {
    GComplex src, dst;
    std::vector<int> vertex_map;
};

inline SimplicialGMap make_g_map(const GComplex& x, const GComplex& y,
                                 std::vector<int> vertex_map) {
    require(x.has_action() && y.has_action(), "equivariant maps need actions on both complexes");
    require(x.group().same_group(y.group()), "the complexes must carry the same group");
    for (int i = 0; i < x.count(0); ++i) {
        int v = x.simplex(0, i)[0];
        require(v >= 0 && v < static_cast<int>(vertex_map.size()),
                "vertex map does not cover every vertex");
        require(y.index_of(0, std::vector<int>{vertex_map[static_cast<size_t>(v)]}) >= 0,
                "vertex map leaves the target complex");
    }
    for (const auto& g : x.group().generators())
        for (int i = 0; i < x.count(0); ++i) {
            int v = x.simplex(0, i)[0];
            require(vertex_map[static_cast<size_t>(x.act_vertex(g, v))] ==
                        y.act_vertex(g, vertex_map[static_cast<size_t>(v)]),
                    "vertex map is not equivariant");
        }
    for (int q = 1; q <= x.dimension(); ++q)
        for (int i = 0; i < x.count(q); ++i) {
            std::vector<int> img = x.simplex(q, i);
            for (auto& v : img) v = vertex_map[static_cast<size_t>(v)];
            require(y.index_of(q, img) >= 0, "vertex map does not send simplices to simplices");
        }
    return SimplicialGMap{x, y, std::move(vertex_map)};
}

namespace detail {

/* image index of every degree-q simplex under the map */
inline std::vector<int> gmap_images(const SimplicialGMap& f, int q) {
    std::vector<int> img(static_cast<size_t>(f.src.count(q)), -1);
    for (int i = 0; i < f.src.count(q); ++i) {
        std::vector<int> t = f.src.simplex(q, i);
        for (auto& v : t) v = f.vertex_map[static_cast<size_t>(v)];
        int j = f.dst.index_of(q, t);
        check(j >= 0, "mapped simplex left the target complex");
        img[static_cast<size_t>(i)] = j;
    }
    return img;
}

}  // namespace detail

/* Unique-lifting test: in every degree and along every face, a simplex
 * downstairs together with a lift of its face determines exactly one lift.
 * Throws with the failing degree and face when the map is not a covering. */
inline void require_covering(const SimplicialGMap& f) {
    int qmax = std::max(f.src.dimension(), f.dst.dimension());
    std::vector<int> below = detail::gmap_images(f, 0);
    for (int q = 1; q <= qmax; ++q) {
        std::vector<int> here = detail::gmap_images(f, q);
        std::vector<long> pre(static_cast<size_t>(f.dst.count(q - 1)), 0);
        for (size_t x = 0; x < below.size(); ++x) ++pre[static_cast<size_t>(below[x])];
        for (int i = 0; i <= q; ++i) {
            std::set<std::pair<int, int>> seen;
            for (int x = 0; x < f.src.count(q); ++x) {
                std::vector<int> t = f.src.simplex(q, x);
                t.erase(t.begin() + i);
                int fx = f.src.index_of(q - 1, t);
                check(fx >= 0, "face left the source complex");
                if (!seen.emplace(here[static_cast<size_t>(x)], fx).second)
                    throw DomainError("map fails unique lifting at degree " + std::to_string(q) +
                                      ", face " + std::to_string(i));
            }
            long expected = 0;
            for (int y = 0; y < f.dst.count(q); ++y) {
                std::vector<int> t = f.dst.simplex(q, y);
                t.erase(t.begin() + i);
                int fy = f.dst.index_of(q - 1, t);
                check(fy >= 0, "face left the target complex");
                expected += pre[static_cast<size_t>(fy)];
            }
            if (static_cast<long>(seen.size()) != expected)
                throw DomainError("map fails the covering count at degree " + std::to_string(q) +
                                  ", face " + std::to_string(i) + ": " +
                                  std::to_string(seen.size()) + " lifts for " +
                                  std::to_string(expected) + " required squares");
        }
        below = std::move(here);
    }
}

/* orbit-level image of the degree-q simplices, one leg per source orbit */
inline GSetMap gmap_orbits(const SimplicialGMap& f, int q) {
    GSetMap out;
    if (q >= 0 && q <= f.dst.dimension()) out.dst.stabilizers = f.dst.orbits(q).stabilizers;
    if (q >= 0 && q <= f.src.dimension()) {
        const auto& ods = f.src.orbits(q);
        const auto& odd = f.dst.orbits(q);
        out.src.stabilizers = ods.stabilizers;
        std::vector<int> img = detail::gmap_images(f, q);
        for (size_t o = 0; o < ods.reps.size(); ++o) {
            int idx = img[static_cast<size_t>(ods.reps[o])];
            out.legs.push_back(GSetMap::Leg{odd.orbit_of[static_cast<size_t>(idx)],
                                            odd.transporter[static_cast<size_t>(idx)]});
        }
    }
    return out;
}

/* chain-level pushforward matrices of a simplicial map, one per degree */
inline std::vector<SparseZ> induced_bredon_map(const SimplicialGMap& f,
                                               const CoefficientSystem& cs) {
    require(f.src.group().same_group(cs.group()),
            "the map and the coefficients must share one group");
    std::vector<SparseZ> out;
    int qmax = std::max(f.src.dimension(), f.dst.dimension());
    for (int q = 0; q <= qmax; ++q) out.push_back(evaluate_covariant(cs, gmap_orbits(f, q)));
    return out;
}

/* fiberwise-sum transfer and pushforward along a simplicial map */
struct BredonTransfer {
    std::vector<SparseZ> tr;    // degree q: chains of the target -> chains of the source
    std::vector<SparseZ> push;  // degree q: chains of the source -> chains of the target
};

inline BredonTransfer bredon_transfer(const SimplicialGMap& f, const CoefficientSystem& cs) {
    require(f.src.group().same_group(cs.group()),
            "the map and the coefficients must share one group");
    BredonTransfer out;
    int qmax = std::max(f.src.dimension(), f.dst.dimension());
    for (int q = 0; q <= qmax; ++q) {
        GSetMap gm = gmap_orbits(f, q);
        out.push.push_back(evaluate_covariant(cs, gm));
        out.tr.push_back(evaluate_contravariant(cs, gm));
    }
    return out;
}

/* isomorphism of presented groups; p = 0 demands an integral isomorphism,
 * a prime p allows inverting everything coprime to p */
inline bool presented_isomorphism(const SparseZ& f, const PresentedAb& source,
                                  const PresentedAb& target, int p) {
    if (p > 0) return is_p_local_iso(f, source, target, p);
    if (!well_defined_map(f, source, target)) return false;
    if (!cokernel_presented(f, target).is_zero()) return false;
    return kernel_presented(f, source, target).is_zero();
}

/* After transferring up a covering and pushing back down, the composite
 * must invert p-locally on homology and cohomology whenever the fiber
 * sizes are units mod p. */
inline VerificationReport verify_transfer_retract(const SimplicialGMap& f,
                                                  const CoefficientSystem& cs, int p) {
    require(detail::is_prime_small(p), "retraction checks need a prime");
    require(f.src.group().same_group(cs.group()),
            "the map and the coefficients must share one group");
    VerificationReport r("transfer retraction");
    try {
        require_covering(f);
        r.add("projection is a covering", true);
    } catch (const DomainError& e) {
        r.add("projection is a covering", false, e.what());
        return r;
    }
    bool fibers_ok = true;
    for (int q = 0; q <= f.dst.dimension(); ++q) {
        std::vector<int> img = detail::gmap_images(f, q);
        const auto& od = f.dst.orbits(q);
        std::string sizes;
        bool ok = true;
        for (size_t o = 0; o < od.reps.size(); ++o) {
            long n = 0;
            for (size_t x = 0; x < img.size(); ++x)
                if (img[x] == od.reps[o]) ++n;
            if (!sizes.empty()) sizes += ", ";
            sizes += std::to_string(n);
            if (n % p == 0) ok = false;
        }
        r.add("degree " + std::to_string(q) + " fiber sizes are invertible mod " +
                  std::to_string(p),
              ok, "sizes over orbit representatives: " + sizes);
        if (!ok) fibers_ok = false;
    }
    if (!fibers_ok) return r;
    BredonTransfer t = bredon_transfer(f, cs);
    BredonChainComplex bc = bredon_chains(f.dst, cs);
    BredonChainComplex cc = bredon_cochains(f.dst, cs);
    for (int q = 0; q <= f.dst.dimension(); ++q) {
        SparseZ endo = t.push[static_cast<size_t>(q)] * t.tr[static_cast<size_t>(q)];
        PresentedHomology h = bc.homology_classes(q);
        SparseZ e = induced_on_presented(h, h, endo);
        r.add("degree " + std::to_string(q) + " transfer composite inverts on homology",
              is_p_local_iso(e, h.presentation(), h.presentation(), p));
        PresentedHomology hc = cc.homology_classes(q);
        SparseZ ec = induced_on_presented(hc, hc, endo);
        r.add("degree " + std::to_string(q) + " transfer composite inverts on cohomology",
              is_p_local_iso(ec, hc.presentation(), hc.presentation(), p));
    }
    return r;
}

inline VerificationReport verify_transfer_retract(const SimplicialGMap& f, const MackeyFunctor& m,
                                                  int p) {
    if (!m.graded()) return verify_transfer_retract(f, m.piece(0), p);
    VerificationReport r("transfer retraction");
    for (int b = 0; b < m.grades(); ++b) {
        VerificationReport sub = verify_transfer_retract(f, m.piece(b), p);
        for (const auto& c : sub.checks())
            r.add("grade " + std::to_string(b) + ": " + c.name, c.pass, c.details);
    }
    return r;
}

/* ------------------------------------------------------------------------
 * Restriction of coefficients to a subgroup
 * --------------------------------------------------------------------- */

/* value and structure maps of the ambient system, re-indexed over the
 * subgroup's own conjugacy classes */
inline CoefficientSystem restrict_coefficients(const CoefficientSystem& cs, const PermGroup& k) {
    require(k.degree() == cs.group().degree() && cs.group().contains_group(k),
            "restriction needs a subgroup of the coefficient group");
    auto ktab = std::make_shared<SubgroupClassTable>(k);
    ktab->locate(PermGroup::trivial(k.degree()));
    ktab->locate(k);
    CoefficientSystem base = cs;
    auto vm = [base, ktab](int cls) { return base.value_of(ktab->rep(cls)); };
    auto cov = [base, ktab](int i, int j, const Permutation& w) {
        return base.covariant(OrbitMap{ktab->rep(i), ktab->rep(j), w});
    };
    auto contra = [base, ktab](int i, int j, const Permutation& w) {
        return base.contravariant(OrbitMap{ktab->rep(i), ktab->rep(j), w});
    };
    return CoefficientSystem(k, ktab, vm, cov, contra, cs.locality());
}

struct RestrictionComparison {
    VerificationReport report;
    std::vector<FGAbGroup> restricted;  // homology over the subgroup
    std::vector<FGAbGroup> induced;     // homology of the induced space
    std::vector<SparseZ> chain_maps;    // comparison, one matrix per degree
};

/* Homology of a subgroup poset with restricted coefficients against the
 * homology of the induced poset over the full group.  The comparison map
 * sends each subgroup orbit block to the full orbit of the same simplex. */
inline RestrictionComparison verify_coefficient_restriction(const CoefficientSystem& cs,
                                                            const PermGroup& k, const Poset& y) {
    const PermGroup& g = cs.group();
    require(g.contains_group(k), "the subgroup must lie in the coefficient group");
    require(y.has_action(), "the poset needs an action");
    require(y.action().group.contains_group(k), "the poset action must cover the subgroup");

    RestrictionComparison out;
    out.report = VerificationReport("restriction against induction");

    Poset yk = y;
    yk.set_action({k, y.action().act});
    GComplex xk = GComplex::order_complex(yk);
    CoefficientSystem csk = restrict_coefficients(cs, k);
    BredonChainComplex lhs = bredon_chains(xk, csk);

    CosetTable tab = left_cosets(g, k);
    Poset yi = induced_poset(tab, y);
    GComplex xi = GComplex::order_complex(yi);
    BredonChainComplex rhs = bredon_chains(xi, cs);

    out.restricted = lhs.all_homology();
    out.induced = rhs.all_homology();

    int top = xk.dimension();
    out.report.add("complex dimensions agree", xi.dimension() == top);
    if (xi.dimension() != top) return out;

    bool structure_ok = true;
    for (int q = 0; q <= top; ++q) {
        const auto& odk = xk.orbits(q);
        const auto& odi = xi.orbits(q);
        bool bij = odk.reps.size() == odi.reps.size();
        std::vector<char> hit(odi.reps.size(), 0);
        SparseZ phi(static_cast<int>(rhs.gens(q)), static_cast<int>(lhs.gens(q)));
        for (size_t j = 0; bij && j < odk.reps.size(); ++j) {
            const std::vector<int>& t = xk.simplex(q, odk.reps[j]);
            int idx = xi.index_of(q, t);
            if (idx < 0) {
                bij = false;
                break;
            }
            int o = odi.orbit_of[static_cast<size_t>(idx)];
            if (hit[static_cast<size_t>(o)]) {
                bij = false;
                break;
            }
            hit[static_cast<size_t>(o)] = 1;
            const Permutation& w = odi.transporter[static_cast<size_t>(idx)];
            // the subgroup stabilizer must already be the full stabilizer
            if (!detail::conjugate_subgroup(odk.stabilizers[j], w)
                     .same_group(odi.stabilizers[static_cast<size_t>(o)])) {
                bij = false;
                break;
            }
            detail::add_scaled_block(
                phi,
                cs.covariant(OrbitMap{odk.stabilizers[j],
                                      odi.stabilizers[static_cast<size_t>(o)], w}),
                rhs.offset(q, o), lhs.offset(q, static_cast<int>(j)), 1);
        }
        out.report.add("degree " + std::to_string(q) + " orbits correspond bijectively", bij);
        if (!bij) structure_ok = false;
        out.chain_maps.push_back(std::move(phi));
    }
    if (!structure_ok) return out;

    for (int q = 1; q <= top; ++q) {
        SparseZ a = rhs.boundary(q) * out.chain_maps[static_cast<size_t>(q)];
        SparseZ b = out.chain_maps[static_cast<size_t>(q) - 1] * lhs.boundary(q);
        out.report.add("degree " + std::to_string(q) + " comparison commutes with the boundary",
                       detail::congruent_columns(a, b, rhs.group_at(q - 1)));
    }
    for (int q = 0; q <= top; ++q) {
        PresentedHomology hl = lhs.homology_classes(q);
        PresentedHomology hr = rhs.homology_classes(q);
        SparseZ im = induced_on_presented(hl, hr, out.chain_maps[static_cast<size_t>(q)]);
        out.report.add("degree " + std::to_string(q) + " homology carries over isomorphically",
                       presented_isomorphism(im, hl.presentation(), hr.presentation(),
                                             cs.locality()));
        out.report.add("degree " + std::to_string(q) + " invariant factors agree",
                       lhs.homology(q) == rhs.homology(q));
    }
    return out;
}

/* ------------------------------------------------------------------------
 * One-orbit-type approximation
 * --------------------------------------------------------------------- */

/* Homology through degree qmax of the coefficient block supported on one
 * subgroup class: chains of the fixed subcomplex twisted over the Weyl
 * group by the value at the class, resolved by a free model.  When the
 * complex is pointed, the cylinder over the basepoint is cut out first. */
inline std::vector<FGAbGroup> one_class_approximation_homology(const GComplex& x,
                                                               const PermGroup& d,
                                                               const CoefficientSystem& cs,
                                                               int qmax) {
    require(qmax >= 0, "the degree window must be nonnegative");
    require(x.has_action() && x.group().same_group(cs.group()),
            "the complex and the coefficients must share one group");
    const PermGroup& g = cs.group();
    require(g.contains_group(d), "the class must lie in the acting group");

    FGAbGroup val = cs.value_of(d);
    int ch = 0;
    if (!val.torsion.empty()) {
        require(val.free_rank == 0,
                "a one-class module needs a free or elementary torsion value");
        const mpz_class& p0 = val.torsion.front();
        for (const auto& t : val.torsion)
            require(t == p0, "a one-class module needs a free or elementary torsion value");
        require(p0.fits_sint_p(), "torsion order out of range");
        ch = static_cast<int>(p0.get_si());
        require(detail::is_prime_small(ch), "torsion values must be elementary at a prime");
    }

    std::vector<FGAbGroup> out(static_cast<size_t>(qmax) + 1, FGAbGroup::zero());
    GComplex fx = x.fixed_subcomplex(d);
    if (fx.total_simplices() == 0) return out;

    WeylData wd = normalizer_weyl(g, d);
    auto xs = std::make_shared<GComplex>(x);
    PermGroup wg = wd.w;
    auto lifts = std::make_shared<std::vector<Permutation>>(wd.section);
    GComplex f2 = fx.with_action(
        {wd.w, [xs, wg, lifts](const Permutation& wp, int v) {
             long i = wg.element_index(wp);
             check(i >= 0, "action element left the Weyl group");
             return xs->act_vertex((*lifts)[static_cast<size_t>(i)], v);
         }});

    // left action of the Weyl group on the class's value block
    std::vector<SparseZ> mats;
    mats.reserve(static_cast<size_t>(wd.w.order()));
    for (long i = 0; i < wd.w.order(); ++i)
        mats.push_back(
            cs.covariant(OrbitMap{d, d, wd.section[static_cast<size_t>(i)].inverse()}));
    int rp = ch > 0 ? ch : std::max(cs.locality(), 2);
    GroupRingModule m(wd.w, ch, rp, std::move(mats));

    FreeWComplex model = borel_model(wd.w, f2, qmax + 1);
    ChainComplexZ cc = twisted_chain_complex(model, m, qmax);

    if (x.basepoint().has_value()) {
        // generators living over the basepoint column of the free model
        int sbp = f2.index_of(0, std::vector<int>{*x.basepoint()});
        require(sbp >= 0, "the basepoint must be fixed by the chosen class");
        const int nw = static_cast<int>(wd.w.order());
        const int count0 = f2.count(0);
        const long rm = m.rank();
        const int n_trunc = qmax + 1;
        std::vector<std::vector<char>> killed(static_cast<size_t>(cc.top()) + 1);
        for (int q = 0; q <= cc.top(); ++q) {
            killed[static_cast<size_t>(q)].assign(static_cast<size_t>(cc.dim(q)), 0);
            long off = 0, start = -1, pw = 1;
            for (int a = 0; a <= std::min(q, n_trunc); ++a) {
                int b = q - a;
                if (b <= f2.dimension()) {
                    if (a == q && b == 0) start = off;
                    off += pw * f2.count(b);
                }
                pw *= nw;
            }
            check(start >= 0, "pole block missing from the free model");
            long tuples = 1;
            for (int i = 0; i < q; ++i) tuples *= nw;
            for (long t = 0; t < tuples; ++t) {
                long o = start + t * count0 + sbp;
                for (long j = 0; j < rm; ++j)
                    killed[static_cast<size_t>(q)][static_cast<size_t>(o * rm + j)] = 1;
            }
        }
        for (int q = 1; q <= cc.top(); ++q) {
            SparseZ dq = cc.boundary(q);
            for (int r = 0; r < dq.rows(); ++r)
                for (const auto& [c, v] : dq.row(r))
                    if (v != 0 && killed[static_cast<size_t>(q)][static_cast<size_t>(c)])
                        check(killed[static_cast<size_t>(q) - 1][static_cast<size_t>(r)],
                              "basepoint block is not closed under the boundary");
        }
        std::vector<int> dims;
        std::vector<std::vector<int>> remap(static_cast<size_t>(cc.top()) + 1);
        for (int q = 0; q <= cc.top(); ++q) {
            remap[static_cast<size_t>(q)].assign(static_cast<size_t>(cc.dim(q)), -1);
            int idx = 0;
            for (int i = 0; i < cc.dim(q); ++i)
                if (!killed[static_cast<size_t>(q)][static_cast<size_t>(i)])
                    remap[static_cast<size_t>(q)][static_cast<size_t>(i)] = idx++;
            dims.push_back(idx);
        }
        ChainComplexZ cut(dims);
        for (int q = 1; q <= cc.top(); ++q) {
            SparseZ old = cc.boundary(q);
            SparseZ nd(dims[static_cast<size_t>(q) - 1], dims[static_cast<size_t>(q)]);
            for (int r = 0; r < old.rows(); ++r) {
                int nr = remap[static_cast<size_t>(q) - 1][static_cast<size_t>(r)];
                if (nr < 0) continue;
                for (const auto& [c, v] : old.row(r)) {
                    int nc = remap[static_cast<size_t>(q)][static_cast<size_t>(c)];
                    if (nc >= 0) nd.set(nr, nc, v);
                }
            }
            cut.set_boundary(q, std::move(nd));
        }
        cc = std::move(cut);
    }

    if (ch == 0) {
        for (int q = 0; q <= qmax; ++q) {
            FGAbGroup h = cc.homology(q);
            out[static_cast<size_t>(q)] = cs.locality() > 0 ? h.p_localized(cs.locality()) : h;
        }
    } else {
        std::vector<int> dims;
        for (int q = 0; q <= cc.top(); ++q) dims.push_back(cc.dim(q));
        FpChainComplex fc(ch, std::move(dims));
        for (int q = 1; q <= cc.top(); ++q)
            fc.bnd[static_cast<size_t>(q)] = FpMat::from_sparse(cc.boundary(q), ch);
        for (int q = 0; q <= qmax; ++q)
            out[static_cast<size_t>(q)] = fp_vector_group(ch, fc.betti(q));
    }
    return out;
}

/* ------------------------------------------------------------------------
 * Gluing sequence of the suspension
 * --------------------------------------------------------------------- */

/* The two cones over a poset's complex intersect in the complex itself;
 * the induced inclusion/difference sequence of equivariant chain groups
 * must be short exact in every degree, and the resulting long sequence in
 * homology exact at every node, integrally. */
inline VerificationReport verify_mayer_vietoris(const Poset& p, const CoefficientSystem& cs) {
    require(p.has_action(), "the poset needs a group action");
    require(p.action().group.same_group(cs.group()), "coefficient group mismatch");
    VerificationReport r("suspension gluing");

    Poset sp = suspended_poset(p);
    GComplex sigma = GComplex::order_complex(sp);
    const int n = p.size();
    std::set<int> va, vb, vx;
    for (int v = 0; v < n; ++v) {
        va.insert(v);
        vb.insert(v);
        vx.insert(v);
    }
    va.insert(n);      // the first pole
    vb.insert(n + 1);  // the second pole
    GComplex A = sigma.subcomplex_on(va);
    GComplex B = sigma.subcomplex_on(vb);
    GComplex X = sigma.subcomplex_on(vx);

    std::vector<int> id(static_cast<size_t>(n) + 2);
    for (int v = 0; v < n + 2; ++v) id[static_cast<size_t>(v)] = v;
    std::vector<SparseZ> ia = induced_bredon_map(make_g_map(X, A, id), cs);
    std::vector<SparseZ> ib = induced_bredon_map(make_g_map(X, B, id), cs);
    std::vector<SparseZ> ja = induced_bredon_map(make_g_map(A, sigma, id), cs);
    std::vector<SparseZ> jb = induced_bredon_map(make_g_map(B, sigma, id), cs);

    BredonChainComplex bX = bredon_chains(X, cs);
    BredonChainComplex bA = bredon_chains(A, cs);
    BredonChainComplex bB = bredon_chains(B, cs);
    BredonChainComplex bS = bredon_chains(sigma, cs);

    const int top = sigma.dimension();
    auto mat_at = [](const std::vector<SparseZ>& v, int q, long rows, long cols) {
        if (q >= 0 && q < static_cast<int>(v.size())) return v[static_cast<size_t>(q)];
        return SparseZ(static_cast<int>(rows), static_cast<int>(cols));
    };

    std::vector<PresentedAb> abg;
    std::vector<SparseZ> alpha, beta;
    for (int q = 0; q <= top; ++q) {
        abg.push_back(detail::direct_sum_presented(bA.group_at(q), bB.group_at(q)));
        const long gX = bX.gens(q), gA = bA.gens(q), gB = bB.gens(q), gS = bS.gens(q);
        SparseZ al(static_cast<int>(gA + gB), static_cast<int>(gX));
        detail::add_scaled_block(al, mat_at(ia, q, gA, gX), 0, 0, 1);
        detail::add_scaled_block(al, mat_at(ib, q, gB, gX), gA, 0, 1);
        SparseZ be(static_cast<int>(gS), static_cast<int>(gA + gB));
        detail::add_scaled_block(be, mat_at(ja, q, gS, gA), 0, 0, 1);
        detail::add_scaled_block(be, mat_at(jb, q, gS, gB), 0, gA, -1);
        alpha.push_back(std::move(al));
        beta.push_back(std::move(be));
    }
    PresentedComplex pcab(abg);
    for (int q = 1; q <= top; ++q) {
        SparseZ d(abg[static_cast<size_t>(q) - 1].gens, abg[static_cast<size_t>(q)].gens);
        detail::add_scaled_block(d, bA.boundary(q), 0, 0, 1);
        detail::add_scaled_block(d, bB.boundary(q), bA.gens(q - 1), bA.gens(q), 1);
        pcab.set_boundary(q, std::move(d));
    }

    for (int q = 0; q <= top; ++q) {
        bool inj = kernel_presented(alpha[static_cast<size_t>(q)], bX.group_at(q),
                                    abg[static_cast<size_t>(q)])
                       .is_zero();
        PresentedComplex seq(std::vector<PresentedAb>{bS.group_at(q), abg[static_cast<size_t>(q)],
                                                      bX.group_at(q)});
        seq.set_boundary(1, beta[static_cast<size_t>(q)]);
        seq.set_boundary(2, alpha[static_cast<size_t>(q)]);
        bool mid = seq.homology(1).is_zero();
        bool surj = cokernel_presented(beta[static_cast<size_t>(q)], bS.group_at(q)).is_zero();
        r.add("degree " + std::to_string(q) + " pieces include injectively", inj);
        r.add("degree " + std::to_string(q) + " gluing kernel matches the intersection", mid);
        r.add("degree " + std::to_string(q) + " differences fill the glued complex", surj);
    }

    std::vector<PresentedHomology> HX, HAB, HS;
    for (int q = 0; q <= top; ++q) {
        HX.push_back(bX.homology_classes(q));
        HAB.push_back(PresentedHomology(pcab, q));
        HS.push_back(bS.homology_classes(q));
    }
    std::vector<SparseZ> astar, bstar, conn;
    for (int q = 0; q <= top; ++q) {
        astar.push_back(induced_on_presented(HX[static_cast<size_t>(q)],
                                             HAB[static_cast<size_t>(q)],
                                             alpha[static_cast<size_t>(q)]));
        bstar.push_back(induced_on_presented(HAB[static_cast<size_t>(q)],
                                             HS[static_cast<size_t>(q)],
                                             beta[static_cast<size_t>(q)]));
        const int rows = q >= 1 ? HX[static_cast<size_t>(q) - 1].ngens() : 0;
        SparseZ dmat(rows, HS[static_cast<size_t>(q)].ngens());
        if (q >= 1 && HS[static_cast<size_t>(q)].ngens() > 0) {
            // connecting map: lift a glued cycle, take its boundary, pull it
            // back through the inclusions
            ZSolver lift(SparseZ::hconcat(beta[static_cast<size_t>(q)],
                                          bS.group_at(q).relations));
            ZSolver back(SparseZ::hconcat(alpha[static_cast<size_t>(q) - 1],
                                          abg[static_cast<size_t>(q) - 1].relations));
            for (int j = 0; j < HS[static_cast<size_t>(q)].ngens(); ++j) {
                auto u = lift.solve(HS[static_cast<size_t>(q)].generator(j));
                check(u.has_value(), "glued cycle must lift to the pieces");
                std::vector<mpz_class> y(
                    u->begin(), u->begin() + beta[static_cast<size_t>(q)].cols());
                std::vector<mpz_class> w = pcab.boundary(q).apply(y);
                auto v = back.solve(w);
                check(v.has_value(), "boundary of a lift must come from the intersection");
                std::vector<mpz_class> xv(
                    v->begin(), v->begin() + alpha[static_cast<size_t>(q) - 1].cols());
                auto coords = HX[static_cast<size_t>(q) - 1].express(xv);
                for (int rr = 0; rr < rows; ++rr)
                    if (coords[static_cast<size_t>(rr)] != 0)
                        dmat.set(rr, j, coords[static_cast<size_t>(rr)]);
            }
        }
        conn.push_back(std::move(dmat));
    }

    auto exact3 = [](const PresentedAb& g0, const SparseZ& b1, const PresentedAb& g1,
                     const SparseZ& b2, const PresentedAb& g2) {
        PresentedComplex seq(std::vector<PresentedAb>{g0, g1, g2});
        seq.set_boundary(1, b1);
        seq.set_boundary(2, b2);
        return seq.homology(1).is_zero();
    };
    for (int q = 0; q <= top; ++q) {
        PresentedAb hx = HX[static_cast<size_t>(q)].presentation();
        PresentedAb hab = HAB[static_cast<size_t>(q)].presentation();
        PresentedAb hs = HS[static_cast<size_t>(q)].presentation();
        SparseZ din = (q + 1 <= top) ? conn[static_cast<size_t>(q) + 1] : SparseZ(hx.gens, 0);
        PresentedAb hin = (q + 1 <= top) ? HS[static_cast<size_t>(q) + 1].presentation()
                                         : PresentedAb::free_group(0);
        r.add("long sequence is exact at the intersection, degree " + std::to_string(q),
              exact3(hab, astar[static_cast<size_t>(q)], hx, din, hin));
        r.add("long sequence is exact at the pieces, degree " + std::to_string(q),
              exact3(hs, bstar[static_cast<size_t>(q)], hab, astar[static_cast<size_t>(q)], hx));
        PresentedAb hout =
            (q >= 1) ? HX[static_cast<size_t>(q) - 1].presentation() : PresentedAb::free_group(0);
        r.add("long sequence is exact at the glued complex, degree " + std::to_string(q),
              exact3(hout, conn[static_cast<size_t>(q)], hs, bstar[static_cast<size_t>(q)], hab));
    }
    return r;
}

/* ------------------------------------------------------------------------
 * Naturality of the transfer under pullback
 * --------------------------------------------------------------------- */

/* Given a covering of posets and an arbitrary second map to the same base,
 * the transfer along the covering composed with the second map's
 * pushforward must agree with going up through the pullback first. */
inline VerificationReport verify_transfer_naturality(const Poset& base, const Poset& cover,
                                                     const std::vector<int>& cover_map,
                                                     const Poset& other,
                                                     const std::vector<int>& other_map,
                                                     const CoefficientSystem& cs) {
    VerificationReport r("transfer naturality");
    GComplex xb = GComplex::order_complex(base);
    GComplex xc = GComplex::order_complex(cover);
    GComplex xo = GComplex::order_complex(other);
    SimplicialGMap f = make_g_map(xc, xb, cover_map);
    SimplicialGMap gm = make_g_map(xo, xb, other_map);
    try {
        require_covering(f);
        r.add("cover projection is a covering", true);
    } catch (const DomainError& e) {
        r.add("cover projection is a covering", false, e.what());
        return r;
    }

    PosetPullback pb = pullback_poset(cover, cover_map, other, other_map, base);
    GComplex xw = GComplex::order_complex(pb.poset);
    SimplicialGMap pcov = make_g_map(xw, xc, pb.to_left);
    SimplicialGMap poth = make_g_map(xw, xo, pb.to_right);
    try {
        require_covering(poth);
        r.add("pulled-back projection is a covering", true);
    } catch (const DomainError& e) {
        r.add("pulled-back projection is a covering", false, e.what());
        return r;
    }

    BredonTransfer tf = bredon_transfer(f, cs);
    BredonTransfer tpo = bredon_transfer(poth, cs);
    std::vector<SparseZ> gstar = induced_bredon_map(gm, cs);
    std::vector<SparseZ> pcstar = induced_bredon_map(pcov, cs);
    BredonChainComplex bcc = bredon_chains(xc, cs);

    for (int q = 0; q <= xo.dimension(); ++q) {
        SparseZ lhs = tf.tr[static_cast<size_t>(q)] * gstar[static_cast<size_t>(q)];
        SparseZ rhs = pcstar[static_cast<size_t>(q)] * tpo.tr[static_cast<size_t>(q)];
        r.add("degree " + std::to_string(q) + " naturality square commutes",
              detail::congruent_columns(lhs, rhs, bcc.group_at(q)));
    }
    return r;
}

/* ------------------------------------------------------------------------
 * Serialization
 * --------------------------------------------------------------------- */

inline nlohmann::json bredon_to_json(const BredonChainComplex& bc) {
    nlohmann::json out;
    out["direction"] = bc.cohomological() ? "cohomology" : "homology";
    out["reduced"] = bc.reduced();
    out["locality"] = bc.locality();
    out["group_order"] = bc.space().group().order();
    out["top_degree"] = bc.top();
    nlohmann::json degs = nlohmann::json::array();
    for (int q = 0; q <= bc.top(); ++q) {
        nlohmann::json d;
        d["degree"] = q;
        d["generators"] = bc.gens(q);
        d["chain_group"] = bc.chain_group(q).to_string();
        nlohmann::json orbs = nlohmann::json::array();
        for (int j = 0; j < bc.orbit_count(q); ++j) {
            nlohmann::json o;
            int cls = bc.orbit_class(q, j);
            o["stabilizer"] = bc.coefficients().table().label(cls);
            o["stabilizer_order"] = bc.orbit_stabilizer(q, j).order();
            o["generators"] = bc.coefficients().gens(cls);
            o["value"] = bc.coefficients().value(cls).to_string();
            orbs.push_back(std::move(o));
        }
        d["orbits"] = std::move(orbs);
        degs.push_back(std::move(d));
    }
    out["degrees"] = std::move(degs);
    return out;
}

inline std::string homology_csv(const std::vector<FGAbGroup>& h) {
    std::string out = "degree,value\n";
    for (size_t q = 0; q < h.size(); ++q)
        out += std::to_string(q) + "," + h[q].to_string() + "\n";
    return out;
}

}  // namespace parcx
