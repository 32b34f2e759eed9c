#include <catch2/catch_amalgamated.hpp>

#include "parcx/group_ring.hpp"
#include "parcx/linear_groups.hpp"
#include "parcx/poset.hpp"

using namespace parcx;

namespace {

SparseZ mat1(long v) {
    SparseZ m(1, 1);
    if (v != 0) m.set(0, 0, v);
    return m;
}

SparseZ mat2(long a, long b, long c, long d) {
    SparseZ m(2, 2);
    if (a) m.set(0, 0, a);
    if (b) m.set(0, 1, b);
    if (c) m.set(1, 0, c);
    if (d) m.set(1, 1, d);
    return m;
}

PermGroup c2() { return PermGroup(2, {Permutation::from_cycles(2, {{0, 1}})}); }
PermGroup c3() { return PermGroup(3, {Permutation::from_cycles(3, {{0, 1, 2}})}); }

PermGroup s3() {
    return PermGroup(3, {Permutation::from_cycles(3, {{0, 1}}),
                         Permutation::from_cycles(3, {{0, 1, 2}})});
}

/* the rank-2 module of sum-zero integer vectors in Z^3 (basis e0-e1, e1-e2)
 * with the symmetric group permuting coordinates */
GroupRingModule standard_rep_s3(int characteristic, int report_prime) {
    PermGroup g = s3();
    REQUIRE(g.generators().size() == 2);
    REQUIRE(g.generators()[0] == Permutation::from_cycles(3, {{0, 1}}));
    REQUIRE(g.generators()[1] == Permutation::from_cycles(3, {{0, 1, 2}}));
    return GroupRingModule::from_generator_action(
        g, characteristic, report_prime, 2,
        {mat2(-1, 1, 0, 1), mat2(0, -1, 1, -1)});
}

std::vector<FGAbGroup> plain_homology(const ChainComplexZ& c, int qmax, int p) {
    std::vector<FGAbGroup> out;
    for (int q = 0; q <= qmax; ++q) out.push_back(c.homology(q).p_localized(p));
    return out;
}

}  // namespace

TEST_CASE("p-local lattice membership") {
    // L = span{(2,0),(0,3)}
    SparseZ cols(2, 2);
    cols.set(0, 0, 2);
    cols.set(1, 1, 3);

    PLocalLattice l2(2, 2);
    l2.add_columns(cols);
    REQUIRE(l2.contains({0, 1}));        // 3*(0,1) in L and 3 is a 2-local unit
    REQUIRE(!l2.contains({1, 0}));       // m*(1,0) in L forces 2 | m
    REQUIRE(!l2.contains({1, 1}));
    REQUIRE(l2.contains({2, 0}));
    REQUIRE(l2.contains({6, 6}));
    REQUIRE(l2.contains({0, 0}));

    PLocalLattice l3(2, 3);
    l3.add_columns(cols);
    REQUIRE(l3.contains({1, 0}));
    REQUIRE(!l3.contains({0, 1}));

    PLocalLattice empty(2, 2);
    REQUIRE(empty.contains({0, 0}));
    REQUIRE(!empty.contains({0, 1}));

    // growing the lattice flips an earlier verdict
    SparseZ extra(2, 1);
    extra.set(0, 0, 1);
    l2.add_columns(extra);
    REQUIRE(l2.contains({1, 0}));
}

TEST_CASE("group ring module constructors and validation") {
    PermGroup g = s3();

    GroupRingModule triv = GroupRingModule::trivial(g, 0, 2);
    REQUIRE(triv.rank() == 1);
    REQUIRE(triv.coherent());
    REQUIRE(triv.underlying_group() == FGAbGroup::free(1));

    GroupRingModule sgn = GroupRingModule::sign(g, 0, 2);
    REQUIRE(sgn.act(Permutation::from_cycles(3, {{0, 1}})).get(0, 0) == -1);
    REQUIRE(sgn.act(Permutation::from_cycles(3, {{0, 1, 2}})).get(0, 0) == 1);

    GroupRingModule reg = GroupRingModule::regular(g, 0, 2);
    REQUIRE(reg.rank() == 6);
    // left translation by a fixed element permutes the element basis freely
    for (const auto& h : g.elements()) {
        const SparseZ& m = reg.act(h);
        int diag_hits = 0;
        for (int j = 0; j < 6; ++j) {
            mpz_class colsum = 0;
            for (int r = 0; r < 6; ++r) colsum += m.get(r, j);
            REQUIRE(colsum == 1);
            if (m.get(j, j) != 0) ++diag_hits;
        }
        REQUIRE(diag_hits == (h.is_identity() ? 6 : 0));
    }

    GroupRingModule st = standard_rep_s3(0, 2);
    REQUIRE(st.rank() == 2);
    REQUIRE(st.coherent());
    // the 3-cycle acts with order 3, trace -1, determinant 1
    const SparseZ& rot = st.act(Permutation::from_cycles(3, {{0, 1, 2}}));
    REQUIRE(rot.get(0, 0) + rot.get(1, 1) == -1);
    REQUIRE(rot.get(0, 0) * rot.get(1, 1) - rot.get(0, 1) * rot.get(1, 0) == 1);
    SparseZ cube = rot * rot * rot;
    REQUIRE((cube - SparseZ::identity(2)).is_zero());
    // a double transposition is not in a degree-3 group; unknown elements fail
    REQUIRE_THROWS_AS(st.act(Permutation::identity(4)), DomainError);

    // the sign of a 3-cycle is +1, so sending both generators to -1 breaks
    // the relation (01)*(012) having order 2
    REQUIRE_THROWS_AS(
        GroupRingModule::from_generator_action(g, 0, 2, 1, {mat1(-1), mat1(-1)}),
        IntegrityError);

    // hand-corrupted full family: identity everywhere except one element
    {
        std::vector<SparseZ> mats(6, SparseZ::identity(1));
        mats[5] = mat1(-1);
        REQUIRE_THROWS_AS(GroupRingModule(g, 0, 2, std::move(mats)), IntegrityError);
    }

    // characteristic 2 renders sign and trivial identical
    GroupRingModule sgn2 = GroupRingModule::sign(g, 2, 2);
    GroupRingModule triv2 = GroupRingModule::trivial(g, 2, 2);
    for (const auto& h : g.elements())
        REQUIRE((sgn2.act(h) - triv2.act(h)).is_zero());
    REQUIRE(sgn2.underlying_group() == fp_vector_group(2, 1));

    // convention guards
    REQUIRE_THROWS_AS(GroupRingModule::trivial(g, 3, 2), DomainError);
    REQUIRE_THROWS_AS(
        tensor_over_group_ring(GroupRingModule::trivial(g, 0, 2),
                               GroupRingModule::trivial(g, 0, 3)),
        DomainError);
    REQUIRE_THROWS_AS(
        tensor_over_group_ring(GroupRingModule::trivial(c2(), 0, 2),
                               GroupRingModule::trivial(g, 0, 2)),
        DomainError);
}

TEST_CASE("tensor over the group ring: pinned values") {
    PermGroup triv_group = PermGroup::trivial(1);
    REQUIRE(tensor_over_group_ring(GroupRingModule::trivial(triv_group, 0, 2),
                                   GroupRingModule::trivial(triv_group, 0, 2)) ==
            FGAbGroup::free(1));

    GroupRingModule st = standard_rep_s3(0, 2);
    GroupRingModule reg = GroupRingModule::regular(s3(), 0, 2);
    GroupRingModule triv = GroupRingModule::trivial(s3(), 0, 2);

    REQUIRE(tensor_over_group_ring(st, reg) == FGAbGroup::free(2));
    REQUIRE(tensor_over_group_ring(st, triv).is_zero());
    // coinvariants of the standard representation vanish integrally, so the
    // 3-local report is zero as well
    REQUIRE(tensor_over_group_ring(standard_rep_s3(0, 3),
                                   GroupRingModule::trivial(s3(), 0, 3))
                .is_zero());

    GroupRingModule sgn_c2_p2 = GroupRingModule::sign(c2(), 0, 2);
    GroupRingModule triv_c2_p2 = GroupRingModule::trivial(c2(), 0, 2);
    REQUIRE(tensor_over_group_ring(triv_c2_p2, sgn_c2_p2) == FGAbGroup::from_diag(1, {2}));
    REQUIRE(tensor_over_group_ring(GroupRingModule::trivial(c2(), 0, 3),
                                   GroupRingModule::sign(c2(), 0, 3))
                .is_zero());
    REQUIRE(tensor_over_group_ring(sgn_c2_p2, sgn_c2_p2) == FGAbGroup::free(1));

    // mod-p coinvariants of the group algebra are one copy of F_p
    REQUIRE(tensor_over_group_ring(GroupRingModule::trivial(s3(), 2, 2),
                                   GroupRingModule::regular(s3(), 2, 2)) ==
            fp_vector_group(2, 1));
    REQUIRE(tensor_over_group_ring(GroupRingModule::sign(s3(), 3, 3),
                                   GroupRingModule::regular(s3(), 3, 3)) ==
            fp_vector_group(3, 1));
}

TEST_CASE("tensoring with the free rank-1 module returns the module") {
    PermGroup g = s3();
    std::vector<GroupRingModule> corpus;
    corpus.push_back(GroupRingModule::trivial(g, 0, 2));
    corpus.push_back(GroupRingModule::sign(g, 0, 2));
    corpus.push_back(standard_rep_s3(0, 2));
    corpus.push_back(GroupRingModule::regular(g, 0, 2));
    GroupRingModule reg = GroupRingModule::regular(g, 0, 2);
    for (const auto& a : corpus)
        REQUIRE(tensor_over_group_ring(a, reg) == FGAbGroup::free(a.rank()));

    GroupRingModule reg3 = GroupRingModule::regular(c3(), 3, 3);
    REQUIRE(tensor_over_group_ring(GroupRingModule::trivial(c3(), 3, 3), reg3) ==
            fp_vector_group(3, 1));
    REQUIRE(tensor_over_group_ring(reg3, reg3) == fp_vector_group(3, 3));
}

TEST_CASE("hom over the group ring: pinned values") {
    PermGroup g = s3();
    GroupRingModule st = standard_rep_s3(0, 2);
    GroupRingModule reg = GroupRingModule::regular(g, 0, 2);
    GroupRingModule triv = GroupRingModule::trivial(g, 0, 2);
    GroupRingModule zero = GroupRingModule::trivial(g, 0, 2, 0);

    REQUIRE(hom_over_group_ring(st, reg) == FGAbGroup::free(2));
    REQUIRE(hom_over_group_ring(st, triv).is_zero());
    REQUIRE(hom_over_group_ring(zero, reg).is_zero());
    REQUIRE(hom_over_group_ring(reg, zero).is_zero());

    REQUIRE(hom_over_group_ring(triv, triv) == FGAbGroup::free(1));
    REQUIRE(hom_over_group_ring(reg, reg) == FGAbGroup::free(6));
    REQUIRE(hom_over_group_ring(reg, triv) == FGAbGroup::free(1));
    REQUIRE(hom_over_group_ring(triv, reg) == FGAbGroup::free(1));
    REQUIRE(hom_over_group_ring(st, st) == FGAbGroup::free(1));

    REQUIRE(hom_over_group_ring(GroupRingModule::sign(c2(), 0, 2),
                                GroupRingModule::trivial(c2(), 0, 2))
                .is_zero());
    REQUIRE(hom_over_group_ring(GroupRingModule::sign(c2(), 0, 2),
                                GroupRingModule::sign(c2(), 0, 2)) == FGAbGroup::free(1));

    // mod 2: the only equivariant maps out of the trivial module into the
    // group algebra are multiples of the norm element
    REQUIRE(hom_over_group_ring(GroupRingModule::trivial(g, 2, 2),
                                GroupRingModule::regular(g, 2, 2)) ==
            fp_vector_group(2, 1));
}

TEST_CASE("tor over the group ring: pinned values") {
    PermGroup g = s3();
    GroupRingModule st = standard_rep_s3(0, 2);
    GroupRingModule reg = GroupRingModule::regular(g, 0, 2);
    GroupRingModule triv = GroupRingModule::trivial(g, 0, 2);

    SECTION("projective source: Tor1 vanishes against both test modules") {
        REQUIRE(tor1_over_group_ring(st, triv).is_zero());
        REQUIRE(tor1_over_group_ring(st, reg).is_zero());
        REQUIRE(tor1_over_group_ring(st, st).is_zero());
    }

    SECTION("free source: Tor1 vanishes and the presentation stops immediately") {
        TorData t = tor_over_group_ring(reg, st);
        REQUIRE(t.tor1.is_zero());
        REQUIRE((t.presentation_ranks == std::vector<int>{1, 0, 0}));
        REQUIRE(t.tor0 == FGAbGroup::free(2));
    }

    SECTION("trivial module over a p-group is not projective") {
        TorData t2 = tor_over_group_ring(GroupRingModule::trivial(c2(), 0, 2),
                                         GroupRingModule::trivial(c2(), 0, 2));
        REQUIRE(t2.tor1 == FGAbGroup::from_diag(1, {2}));
        REQUIRE(t2.tor0 == FGAbGroup::free(1));
        REQUIRE((t2.presentation_ranks == std::vector<int>{1, 1, 1}));

        REQUIRE(tor1_over_group_ring(GroupRingModule::trivial(c3(), 0, 3),
                                     GroupRingModule::trivial(c3(), 0, 3)) ==
                FGAbGroup::from_diag(1, {3}));
        // away from the group order the same Tor is reported as zero
        REQUIRE(tor1_over_group_ring(GroupRingModule::trivial(c3(), 0, 2),
                                     GroupRingModule::trivial(c3(), 0, 2))
                    .is_zero());
    }

    SECTION("Tor1 of trivial against trivial sees the abelianization") {
        REQUIRE(tor1_over_group_ring(triv, triv) == FGAbGroup::from_diag(1, {2}));
        REQUIRE(tor1_over_group_ring(GroupRingModule::trivial(g, 0, 3),
                                     GroupRingModule::trivial(g, 0, 3))
                    .is_zero());
    }

    SECTION("mod-p route") {
        REQUIRE(tor1_over_group_ring(GroupRingModule::trivial(c2(), 2, 2),
                                     GroupRingModule::trivial(c2(), 2, 2)) ==
                fp_vector_group(2, 1));
        REQUIRE(tor1_over_group_ring(GroupRingModule::regular(c2(), 2, 2),
                                     GroupRingModule::trivial(c2(), 2, 2))
                    .is_zero());
    }

    SECTION("Tor0 agrees with the direct tensor presentation") {
        std::vector<std::pair<GroupRingModule, GroupRingModule>> pairs;
        pairs.emplace_back(st, triv);
        pairs.emplace_back(st, reg);
        pairs.emplace_back(triv, triv);
        pairs.emplace_back(GroupRingModule::sign(g, 0, 2), triv);
        pairs.emplace_back(GroupRingModule::trivial(c2(), 0, 2),
                           GroupRingModule::sign(c2(), 0, 2));
        for (const auto& [a, b] : pairs)
            REQUIRE(tor_over_group_ring(a, b).tor0 == tensor_over_group_ring(a, b));
    }
}

TEST_CASE("free resolutions over group algebras") {
    SECTION("order-2 group at p=2: the periodic rank-1 resolution") {
        FreeResolution r = free_resolution_over_group_algebra(c2(), 2, 6);
        REQUIRE((r.ranks == std::vector<int>{1, 1, 1, 1, 1, 1, 1}));
        REQUIRE(r.composites_vanish());
        REQUIRE(r.exact());
    }

    SECTION("trivial group") {
        FreeResolution r = free_resolution_over_group_algebra(PermGroup::trivial(1), 2, 3);
        REQUIRE((r.ranks == std::vector<int>{1, 0, 0, 0}));
        REQUIRE(r.exact());
    }

    SECTION("order-3 group at p=2: semisimple, but the augmentation ideal is a"
            " nonfree projective, so every exact free resolution keeps rank 1") {
        FreeResolution r = free_resolution_over_group_algebra(c3(), 2, 2);
        REQUIRE((r.ranks == std::vector<int>{1, 1, 1}));
        REQUIRE(r.composites_vanish());
        REQUIRE(r.exact());
    }

    SECTION("order-3 group at p=3: periodic rank-1 resolution") {
        FreeResolution r = free_resolution_over_group_algebra(c3(), 3, 4);
        REQUIRE((r.ranks == std::vector<int>{1, 1, 1, 1, 1}));
        REQUIRE(r.exact());
    }

    SECTION("a nonabelian case stays exact with logged rank growth") {
        FreeResolution r = free_resolution_over_group_algebra(s3(), 2, 3);
        REQUIRE(r.ranks[0] == 1);
        REQUIRE(r.composites_vanish());
        REQUIRE(r.exact());
        INFO("rank growth " << r.ranks[1] << "," << r.ranks[2] << "," << r.ranks[3]);
        for (int s : r.ranks) REQUIRE(s <= 4);
    }

    SECTION("boundaries are equivariant for the translation action") {
        FreeResolution r = free_resolution_over_group_algebra(s3(), 2, 2);
        PermGroup g = s3();
        const int n = static_cast<int>(g.order());
        for (int i = 1; i <= r.length(); ++i) {
            const FpMat& d = r.boundary[static_cast<size_t>(i)];
            for (const auto& h : g.generators()) {
                auto src = free_module_translation(g, h, r.ranks[static_cast<size_t>(i)]);
                auto dst = free_module_translation(g, h, r.ranks[static_cast<size_t>(i) - 1]);
                for (int cidx = 0; cidx < d.cols(); ++cidx)
                    for (int ridx = 0; ridx < d.rows(); ++ridx)
                        REQUIRE(d(ridx, cidx) ==
                                d(dst[static_cast<size_t>(ridx)], src[static_cast<size_t>(cidx)]));
            }
        }
        REQUIRE(n == 6);
    }

    SECTION("capacity guards") {
        REQUIRE_THROWS_AS(free_resolution_over_group_algebra(PermGroup::symmetric(5), 2, 1),
                          CapacityError);
        REQUIRE_THROWS_AS(free_resolution_over_group_algebra(c2(), 2, 11), CapacityError);
    }
}

TEST_CASE("free module structure of a free-action complex") {
    // the three-level join of an order-2 group: an antipodal 2-sphere
    GComplex oc = GComplex::order_complex(join_levels_poset(c2(), 2));
    REQUIRE(oc.count(0) == 6);
    REQUIRE(oc.count(1) == 12);
    REQUIRE(oc.count(2) == 8);

    FreeWComplex fwc = free_w_complex(oc);
    REQUIRE((fwc.orbit_counts == std::vector<int>{3, 6, 4}));
    REQUIRE(fwc.boundary_squares_to_zero());
    REQUIRE(fwc.homology_valid_through() == 2);

    SECTION("the materialized total complex is the 2-sphere") {
        ChainComplexZ total = fwc.total();
        REQUIRE(total.homology(0) == FGAbGroup::free(1));
        REQUIRE(total.homology(1).is_zero());
        REQUIRE(total.homology(2) == FGAbGroup::free(1));
    }

    SECTION("trivial coefficients give the homology of the orbit space") {
        GroupRingModule triv = GroupRingModule::trivial(c2(), 0, 2);
        auto h = twisted_homology(fwc, triv, 2);
        REQUIRE(h[0] == FGAbGroup::free(1));
        REQUIRE(h[1] == FGAbGroup::from_diag(1, {2}));
        REQUIRE(h[2].is_zero());

        // dual route: the quotient complex computed by the orbit machinery
        auto via_quotient = plain_homology(oc.quotient_chain_complex(), 2, 2);
        REQUIRE(h[0] == via_quotient[0]);
        REQUIRE(h[1] == via_quotient[1]);
        REQUIRE(h[2] == via_quotient[2]);

        // and away from 2 the orbit space is a homology point
        auto h3 = twisted_homology(fwc, GroupRingModule::trivial(c2(), 0, 3), 2);
        REQUIRE(h3[0] == FGAbGroup::free(1));
        REQUIRE(h3[1].is_zero());
        REQUIRE(h3[2].is_zero());
    }

    SECTION("orientation-twisted coefficients on the antipodal quotient") {
        GroupRingModule sgn = GroupRingModule::sign(c2(), 0, 2);
        auto h = twisted_homology(fwc, sgn, 2);
        REQUIRE(h[0] == FGAbGroup::from_diag(1, {2}));
        REQUIRE(h[1].is_zero());
        REQUIRE(h[2] == FGAbGroup::free(1));  // twisted fundamental class
    }

    SECTION("cohomology of the orbit space") {
        GroupRingModule triv = GroupRingModule::trivial(c2(), 0, 2);
        auto h = twisted_cohomology(fwc, triv, 2);
        REQUIRE(h[0] == FGAbGroup::free(1));
        REQUIRE(h[1].is_zero());
        REQUIRE(h[2] == FGAbGroup::from_diag(1, {2}));
    }

    SECTION("mod-2 coefficients") {
        GroupRingModule triv2 = GroupRingModule::trivial(c2(), 2, 2);
        auto h = twisted_homology(fwc, triv2, 2);
        auto hc = twisted_cohomology(fwc, triv2, 2);
        for (int q = 0; q <= 2; ++q) {
            REQUIRE(h[static_cast<size_t>(q)] == fp_vector_group(2, 1));
            REQUIRE(hc[static_cast<size_t>(q)] == fp_vector_group(2, 1));
        }
    }

    SECTION("non-free actions are rejected") {
        PartitionPoset p4 = partition_poset(4);
        REQUIRE_THROWS_AS(free_w_complex(GComplex::order_complex(p4.poset)), DomainError);
        Poset bare(2);
        REQUIRE_THROWS_AS(free_w_complex(GComplex::order_complex(bare)), DomainError);
    }
}

TEST_CASE("classifying-space models") {
    SECTION("trivial group over a point is a homology point") {
        PermGroup w = PermGroup::trivial(1);
        FreeWComplex m = borel_model(w, point_complex(w), 4);
        REQUIRE(m.homology_valid_through() == 3);
        auto h = twisted_homology(m, GroupRingModule::trivial(w, 0, 2), 3);
        REQUIRE(h[0] == FGAbGroup::free(1));
        for (int q = 1; q <= 3; ++q) REQUIRE(h[static_cast<size_t>(q)].is_zero());
    }

    SECTION("order-2 group over a point") {
        PermGroup w = c2();
        FreeWComplex m = borel_model(w, point_complex(w), 5);
        REQUIRE(m.boundary_squares_to_zero());
        REQUIRE((m.orbit_counts == std::vector<int>{1, 2, 4, 8, 16, 32}));

        auto hmod2 = twisted_homology(m, GroupRingModule::trivial(w, 2, 2), 4);
        for (int q = 0; q <= 4; ++q)
            REQUIRE(hmod2[static_cast<size_t>(q)] == fp_vector_group(2, 1));

        auto hsign3 = twisted_homology(m, GroupRingModule::sign(w, 0, 3), 4);
        for (int q = 0; q <= 4; ++q) REQUIRE(hsign3[static_cast<size_t>(q)].is_zero());

        auto hz = twisted_homology(m, GroupRingModule::trivial(w, 0, 2), 4);
        REQUIRE(hz[0] == FGAbGroup::free(1));
        REQUIRE(hz[1] == FGAbGroup::from_diag(1, {2}));
        REQUIRE(hz[2].is_zero());
        REQUIRE(hz[3] == FGAbGroup::from_diag(1, {2}));
        REQUIRE(hz[4].is_zero());

        auto hsign2 = twisted_homology(m, GroupRingModule::sign(w, 0, 2), 4);
        REQUIRE(hsign2[0] == FGAbGroup::from_diag(1, {2}));
        REQUIRE(hsign2[1].is_zero());
        REQUIRE(hsign2[2] == FGAbGroup::from_diag(1, {2}));
        REQUIRE(hsign2[3].is_zero());
        REQUIRE(hsign2[4] == FGAbGroup::from_diag(1, {2}));

        auto cz = twisted_cohomology(m, GroupRingModule::trivial(w, 0, 2), 4);
        REQUIRE(cz[0] == FGAbGroup::free(1));
        REQUIRE(cz[1].is_zero());
        REQUIRE(cz[2] == FGAbGroup::from_diag(1, {2}));
        REQUIRE(cz[3].is_zero());
        REQUIRE(cz[4] == FGAbGroup::from_diag(1, {2}));

        auto cmod2 = twisted_cohomology(m, GroupRingModule::trivial(w, 2, 2), 4);
        for (int q = 0; q <= 4; ++q)
            REQUIRE(cmod2[static_cast<size_t>(q)] == fp_vector_group(2, 1));

        // truncation guard: degrees >= the truncation are refused
        REQUIRE_THROWS_AS(twisted_homology(m, GroupRingModule::trivial(w, 0, 2), 5),
                          DomainError);
    }

    SECTION("order-3 group over a point") {
        PermGroup w = c3();
        FreeWComplex m = borel_model(w, point_complex(w), 4);
        auto h3 = twisted_homology(m, GroupRingModule::trivial(w, 0, 3), 3);
        REQUIRE(h3[0] == FGAbGroup::free(1));
        REQUIRE(h3[1] == FGAbGroup::from_diag(1, {3}));
        REQUIRE(h3[2].is_zero());
        REQUIRE(h3[3] == FGAbGroup::from_diag(1, {3}));

        auto hmod3 = twisted_homology(m, GroupRingModule::trivial(w, 3, 3), 3);
        for (int q = 0; q <= 3; ++q)
            REQUIRE(hmod3[static_cast<size_t>(q)] == fp_vector_group(3, 1));

        // semisimple report: away from 3 the classifying space is a point
        auto h2 = twisted_homology(m, GroupRingModule::trivial(w, 0, 2), 3);
        REQUIRE(h2[0] == FGAbGroup::free(1));
        for (int q = 1; q <= 3; ++q) REQUIRE(h2[static_cast<size_t>(q)].is_zero());
    }

    SECTION("free fiber untwists to the total space") {
        // the order-2 group swapping two points: the quotient of the model is
        // the contractible free space itself
        PermGroup w = c2();
        Poset two(2);
        two.set_action({w, [](const Permutation& g, int i) { return g(i); }});
        FreeWComplex m = borel_model(w, GComplex::order_complex(two), 4);
        REQUIRE(m.boundary_squares_to_zero());
        auto h = twisted_homology(m, GroupRingModule::trivial(w, 0, 2), 3);
        REQUIRE(h[0] == FGAbGroup::free(1));
        for (int q = 1; q <= 3; ++q) REQUIRE(h[static_cast<size_t>(q)].is_zero());
    }

    SECTION("regular coefficients untwist to the fiber") {
        PermGroup gl = general_linear_group(2, 2);
        SubspacePoset b2 = subgroup_poset_B(2, 2);
        GComplex lines = GComplex::order_complex(b2.poset);
        REQUIRE(lines.count(0) == 3);
        REQUIRE(lines.dimension() == 0);
        FreeWComplex m = borel_model(gl, lines, 4);
        REQUIRE(m.boundary_squares_to_zero());

        GroupRingModule reg = GroupRingModule::regular(gl, 0, 2);
        auto h = twisted_homology(m, reg, 2);
        REQUIRE(h[0] == FGAbGroup::free(3));
        REQUIRE(h[1].is_zero());
        REQUIRE(h[2].is_zero());

        auto hc = twisted_cohomology(m, reg, 2);
        REQUIRE(hc[0] == FGAbGroup::free(3));
        REQUIRE(hc[1].is_zero());
        REQUIRE(hc[2].is_zero());
    }

    SECTION("whole-model homology at small truncation") {
        PermGroup w = c2();
        FreeWComplex m = borel_model(w, point_complex(w), 3);
        ChainComplexZ total = m.total();
        REQUIRE(total.boundary_squares_to_zero());
        REQUIRE(total.homology(0) == FGAbGroup::free(1));
        REQUIRE(total.homology(1).is_zero());
        REQUIRE(total.homology(2).is_zero());
    }

    SECTION("input guards") {
        REQUIRE_THROWS_AS(borel_model(c2(), point_complex(c3()), 3), DomainError);
        Poset bare(1);
        REQUIRE_THROWS_AS(borel_model(c2(), GComplex::order_complex(bare), 3), DomainError);
        REQUIRE_THROWS_AS(borel_model(PermGroup::symmetric(4), point_complex(PermGroup::symmetric(4)), 5),
                          CapacityError);
    }
}
