#include <catch2/catch_amalgamated.hpp>

#include "parcx/bredon.hpp"

#include <set>

using namespace parcx;

namespace {

Permutation cyc(int n, std::initializer_list<std::initializer_list<int>> cs) {
    std::vector<std::vector<int>> v;
    for (const auto& c : cs) v.emplace_back(c);
    return Permutation::from_cycles(n, v);
}

PermGroup span_of(int n, std::initializer_list<Permutation> gs) {
    return PermGroup(n, std::vector<Permutation>(gs));
}

bool mat_eq(const SparseZ& a, const SparseZ& b) { return detail::sparse_equal(a, b, 0); }

CoefficientSystem fp_system(const GroupRingModule& m) { return fixed_point_mackey(m).piece(0); }

/* square with the antipodal action of the 2-element group: the free circle */
Poset digon_poset() {
    Poset p(4);
    p.set_lt(0, 2);
    p.set_lt(0, 3);
    p.set_lt(1, 2);
    p.set_lt(1, 3);
    p.set_action({PermGroup::symmetric(2), [](const Permutation& g, int x) {
                      return x < 2 ? g(x) : 2 + g(x - 2);
                  }});
    return p;
}

GComplex digon_complex() { return GComplex::order_complex(digon_poset()); }

/* pointed suspension of the proper-partition complex */
GComplex partition_suspension(int n) {
    return GComplex::order_complex(partition_poset(n).poset).unreduced_suspension();
}

/* two G-fixed points, one of them the basepoint */
GComplex two_fixed_points(const PermGroup& g) {
    Poset empty(0);
    empty.set_action({g, [](const Permutation&, int x) { return x; }});
    return GComplex::order_complex(empty).unreduced_suspension();
}

Poset point_poset(const PermGroup& g) {
    Poset p(1);
    p.set_action({g, [](const Permutation&, int) { return 0; }});
    return p;
}

/* integral cohomology of a chain complex, via the transposed reversed complex */
std::vector<FGAbGroup> dualized_cohomology(const ChainComplexZ& c) {
    int top = c.top();
    std::vector<int> dims;
    for (int i = 0; i <= top; ++i) dims.push_back(c.dim(top - i));
    ChainComplexZ rev(dims);
    for (int i = 1; i <= top; ++i) rev.set_boundary(i, c.boundary(top - i + 1).transposed());
    std::vector<FGAbGroup> out;
    for (int q = 0; q <= top; ++q) out.push_back(rev.homology(top - q));
    return out;
}

}  // namespace

TEST_CASE("coset complexes carry single-block chain groups") {
    PermGroup s3 = PermGroup::symmetric(3);
    PermGroup c2 = span_of(3, {cyc(3, {{0, 1}})});
    GComplex x = coset_complex(s3, c2);
    REQUIRE(x.count(0) == 3);
    REQUIRE(x.dimension() == 0);

    CoefficientSystem reg2 = fp_system(GroupRingModule::regular(s3, 0, 2));
    BredonChainComplex bc = bredon_chains(x, reg2);
    REQUIRE(bc.top() == 0);
    REQUIRE(bc.orbit_count(0) == 1);
    REQUIRE(bc.gens(0) == 3);
    REQUIRE(bc.chain_group(0) == FGAbGroup::free(3));
    // independent route: evaluate the system on the G-set of stabilizers
    REQUIRE(evaluate(reg2, bc.gset(0)) == bc.chain_group(0));
    REQUIRE(bc.boundary(1).cols() == 0);
    REQUIRE((bredon_homology(x, reg2) == std::vector<FGAbGroup>{FGAbGroup::free(3)}));

    BredonChainComplex cc = bredon_cochains(x, reg2);
    REQUIRE(cc.gens(0) == 3);
    REQUIRE((bredon_cohomology(x, reg2) == std::vector<FGAbGroup>{FGAbGroup::free(3)}));
}

TEST_CASE("partition complex chain ranks count orbits") {
    PermGroup s4 = PermGroup::symmetric(4);
    GComplex x = GComplex::order_complex(partition_poset(4).poset);
    CoefficientSystem cz = constant_system(s4, FGAbGroup::free(1), 0);

    BredonChainComplex bc = bredon_chains(x, cz);
    REQUIRE(bc.top() == 1);
    REQUIRE(bc.gens(0) == 3);  // three partition shapes appear as vertex orbits
    REQUIRE(bc.gens(1) == 2);  // two edge orbits
    REQUIRE(bc.orbit_count(0) == 3);
    REQUIRE(bc.orbit_count(1) == 2);

    std::vector<FGAbGroup> h = bredon_homology(x, cz);
    REQUIRE((h == std::vector<FGAbGroup>{FGAbGroup::free(1), FGAbGroup::zero()}));
    std::vector<FGAbGroup> hc = bredon_cohomology(x, cz);
    REQUIRE((hc == std::vector<FGAbGroup>{FGAbGroup::free(1), FGAbGroup::zero()}));
}

TEST_CASE("constant coefficients compute quotient homology") {
    PermGroup s3 = PermGroup::symmetric(3);
    PermGroup s4 = PermGroup::symmetric(4);
    PermGroup c2 = span_of(3, {cyc(3, {{0, 1}})});

    std::vector<GComplex> corpus;
    corpus.push_back(GComplex::order_complex(partition_poset(3).poset));
    corpus.push_back(GComplex::order_complex(partition_poset(4).poset));
    corpus.push_back(partition_suspension(3));
    corpus.push_back(digon_complex());
    corpus.push_back(sphere_model(2, 1));
    corpus.push_back(coset_complex(s3, c2));
    corpus.push_back(GComplex::order_complex(subgroup_poset_B(2, 2).poset));
    (void)s4;

    for (const GComplex& x : corpus) {
        CoefficientSystem cz = constant_system(x.group(), FGAbGroup::free(1), 0);
        BredonChainComplex bc = bredon_chains(x, cz);
        BredonChainComplex cc = bredon_cochains(x, cz);
        REQUIRE(bc.squares_to_zero());
        REQUIRE(cc.squares_to_zero());

        ChainComplexZ quot = x.quotient_chain_complex();
        REQUIRE(bc.all_homology() == quot.all_homology());
        REQUIRE(cc.all_homology() == dualized_cohomology(quot));
    }

    // the free circle has the homology of its quotient circle
    CoefficientSystem cz2 = constant_system(PermGroup::symmetric(2), FGAbGroup::free(1), 0);
    std::vector<FGAbGroup> h = bredon_homology(digon_complex(), cz2);
    REQUIRE((h == std::vector<FGAbGroup>{FGAbGroup::free(1), FGAbGroup::free(1)}));
}

TEST_CASE("zero-width stabilizer blocks vanish") {
    PermGroup s3 = PermGroup::symmetric(3);
    GComplex x = partition_suspension(3);
    CoefficientSystem sgn3 = fp_system(GroupRingModule::sign(s3, 0, 3));

    // every stabilizer of the reduced complex contains a transposition or is
    // the whole group, and the signed fixed points vanish there
    BredonChainComplex bc = bredon_chains(x, sgn3, true);
    REQUIRE(bc.gens(0) == 0);
    REQUIRE(bc.gens(1) == 0);
    std::vector<FGAbGroup> h = reduced_bredon_homology(x, sgn3);
    REQUIRE((h == std::vector<FGAbGroup>{FGAbGroup::zero(), FGAbGroup::zero()}));
    std::vector<FGAbGroup> hc = reduced_bredon_cohomology(x, sgn3);
    REQUIRE((hc == std::vector<FGAbGroup>{FGAbGroup::zero(), FGAbGroup::zero()}));
}

TEST_CASE("trivial fixed points make the pointed suspension acyclic") {
    PermGroup s3 = PermGroup::symmetric(3);
    GComplex x = partition_suspension(3);
    CoefficientSystem triv2 = fp_system(GroupRingModule::trivial(s3, 0, 2));

    BredonChainComplex bc = bredon_chains(x, triv2, true);
    REQUIRE(bc.gens(0) == 2);  // free pole block removed, one middle orbit + one pole left
    REQUIRE(bc.gens(1) == 2);
    std::vector<FGAbGroup> h = reduced_bredon_homology(x, triv2);
    REQUIRE((h == std::vector<FGAbGroup>{FGAbGroup::zero(), FGAbGroup::zero()}));
    std::vector<FGAbGroup> hc = reduced_bredon_cohomology(x, triv2);
    REQUIRE((hc == std::vector<FGAbGroup>{FGAbGroup::zero(), FGAbGroup::zero()}));
}

TEST_CASE("fixed sphere keeps the full-group block") {
    PermGroup s3 = PermGroup::symmetric(3);
    GComplex s0 = two_fixed_points(s3);
    REQUIRE(s0.count(0) == 2);
    REQUIRE(s0.basepoint().has_value());

    CoefficientSystem reg2 = fp_system(GroupRingModule::regular(s3, 0, 2));
    REQUIRE(reg2.value_of(s3) == FGAbGroup::free(1));

    std::vector<FGAbGroup> h = reduced_bredon_homology(s0, reg2);
    REQUIRE((h == std::vector<FGAbGroup>{FGAbGroup::free(1)}));
    std::vector<FGAbGroup> hc = reduced_bredon_cohomology(s0, reg2);
    REQUIRE((hc == std::vector<FGAbGroup>{FGAbGroup::free(1)}));
    std::vector<FGAbGroup> hu = bredon_homology(s0, reg2);
    REQUIRE((hu == std::vector<FGAbGroup>{FGAbGroup::free(2)}));
}

TEST_CASE("sign coefficients twist the free circle") {
    GComplex x = digon_complex();
    PermGroup s2 = PermGroup::symmetric(2);

    CoefficientSystem sgn2 = fp_system(GroupRingModule::sign(s2, 0, 2));
    std::vector<FGAbGroup> h2 = bredon_homology(x, sgn2);
    REQUIRE((h2 == std::vector<FGAbGroup>{FGAbGroup{0, {2}}, FGAbGroup::zero()}));
    std::vector<FGAbGroup> hc2 = bredon_cohomology(x, sgn2);
    REQUIRE((hc2 == std::vector<FGAbGroup>{FGAbGroup::zero(), FGAbGroup{0, {2}}}));

    // away from 2 the same torsion report vanishes
    CoefficientSystem sgn3 = fp_system(GroupRingModule::sign(s2, 0, 3));
    std::vector<FGAbGroup> h3 = bredon_homology(x, sgn3);
    REQUIRE((h3 == std::vector<FGAbGroup>{FGAbGroup::zero(), FGAbGroup::zero()}));
}

TEST_CASE("boundaries square to zero across the corpus") {
    PermGroup s3 = PermGroup::symmetric(3);
    PermGroup s4 = PermGroup::symmetric(4);
    PermGroup s2 = PermGroup::symmetric(2);

    struct Entry {
        GComplex x;
        CoefficientSystem cs;
        bool reduced;
    };
    std::vector<Entry> corpus;
    corpus.push_back({partition_suspension(3), fp_system(GroupRingModule::sign(s3, 0, 3)), true});
    corpus.push_back({partition_suspension(3), fp_system(GroupRingModule::trivial(s3, 0, 2)), true});
    corpus.push_back({GComplex::order_complex(partition_poset(4).poset),
                      fp_system(GroupRingModule::regular(s4, 0, 2)), false});
    corpus.push_back({digon_complex(), fp_system(GroupRingModule::sign(s2, 0, 2)), false});
    corpus.push_back({sphere_model(2, 1), borel_mackey(2, 2, 1, 4).piece(2), false});
    corpus.push_back({sphere_model(2, 1), borel_mackey(2, 2, 1, 4).piece(2), true});

    for (const Entry& e : corpus) {
        BredonChainComplex bc = bredon_chains(e.x, e.cs, e.reduced);
        BredonChainComplex cc = bredon_cochains(e.x, e.cs, e.reduced);
        REQUIRE(bc.squares_to_zero());
        REQUIRE(cc.squares_to_zero());
        REQUIRE(bc.complex().well_formed());
        REQUIRE(cc.complex().well_formed());
    }
}

TEST_CASE("homology is independent of representative choices") {
    PermGroup s3 = PermGroup::symmetric(3);
    PermGroup s4 = PermGroup::symmetric(4);
    PermGroup s2 = PermGroup::symmetric(2);

    struct Entry {
        GComplex x;
        CoefficientSystem cs;
        bool reduced;
    };
    std::vector<Entry> corpus;
    corpus.push_back({digon_complex(), fp_system(GroupRingModule::sign(s2, 0, 2)), false});
    corpus.push_back({GComplex::order_complex(partition_poset(4).poset),
                      constant_system(s4, FGAbGroup::free(1), 0), false});
    corpus.push_back({partition_suspension(3), fp_system(GroupRingModule::sign(s3, 0, 3)), true});
    corpus.push_back({partition_suspension(3), fp_system(GroupRingModule::regular(s3, 0, 2)), true});
    corpus.push_back({sphere_model(2, 1), borel_mackey(2, 2, 1, 4).piece(2), false});

    for (const Entry& e : corpus) {
        BredonChainComplex plain = bredon_chains(e.x, e.cs, e.reduced);
        std::vector<FGAbGroup> base = plain.all_homology();
        for (uint64_t seed : {17ull, 99ull}) {
            BredonChainComplex scr = bredon_chains(e.x, e.cs, e.reduced, seed);
            REQUIRE(scr.squares_to_zero());
            REQUIRE(scr.all_homology() == base);
        }
        BredonChainComplex cplain = bredon_cochains(e.x, e.cs, e.reduced);
        BredonChainComplex cscr = bredon_cochains(e.x, e.cs, e.reduced, 17ull);
        REQUIRE(cscr.all_homology() == cplain.all_homology());
    }
}

TEST_CASE("barycentric models agree") {
    PermGroup s3 = PermGroup::symmetric(3);
    PermGroup s4 = PermGroup::symmetric(4);
    PermGroup s2 = PermGroup::symmetric(2);

    struct Entry {
        GComplex x;
        CoefficientSystem cs;
    };
    std::vector<Entry> corpus;
    corpus.push_back({GComplex::order_complex(suspended_poset(partition_poset(3).poset)),
                      fp_system(GroupRingModule::sign(s3, 0, 3))});
    corpus.push_back({GComplex::order_complex(partition_poset(4).poset),
                      constant_system(s4, FGAbGroup::free(1), 0)});
    corpus.push_back({digon_complex(), fp_system(GroupRingModule::sign(s2, 0, 2))});
    corpus.push_back({sphere_model(2, 1), fp_system(GroupRingModule::trivial(s2, 0, 2))});

    for (const Entry& e : corpus) {
        GComplex sub = GComplex::order_complex(simplex_poset(e.x));
        REQUIRE(sub.dimension() == e.x.dimension());
        REQUIRE(bredon_homology(sub, e.cs) == bredon_homology(e.x, e.cs));
        REQUIRE(bredon_cohomology(sub, e.cs) == bredon_cohomology(e.x, e.cs));
    }
}

TEST_CASE("transfers compose to the covering degree") {
    PermGroup s3 = PermGroup::symmetric(3);
    PermGroup c2 = span_of(3, {cyc(3, {{0, 1}})});
    PermGroup e3 = PermGroup::trivial(3);

    SECTION("identity covering transfers identically") {
        GComplex x = partition_suspension(3);
        std::vector<int> vmap(static_cast<size_t>(x.count(0)) + 2);
        for (int i = 0; i < x.count(0); ++i) {
            int v = x.simplex(0, i)[0];
            vmap[static_cast<size_t>(v)] = v;
        }
        SimplicialGMap f = make_g_map(x, x, vmap);
        CoefficientSystem triv2 = fp_system(GroupRingModule::trivial(s3, 0, 2));
        BredonTransfer t = bredon_transfer(f, triv2);
        BredonChainComplex bc = bredon_chains(x, triv2);
        for (int q = 0; q <= x.dimension(); ++q) {
            REQUIRE(mat_eq(t.tr[static_cast<size_t>(q)],
                           SparseZ::identity(static_cast<int>(bc.gens(q)))));
            REQUIRE(mat_eq(t.push[static_cast<size_t>(q)],
                           SparseZ::identity(static_cast<int>(bc.gens(q)))));
        }
    }

    SECTION("point-orbit projection composes to its span") {
        GComplex x = coset_complex(s3, e3);
        GComplex y = coset_complex(s3, c2);
        CosetTable tx = left_cosets(s3, e3);
        CosetTable ty = left_cosets(s3, c2);
        std::vector<int> vmap(static_cast<size_t>(tx.count()));
        for (int i = 0; i < tx.count(); ++i)
            vmap[static_cast<size_t>(i)] = ty.coset_of[static_cast<size_t>(
                s3.element_index(tx.reps[static_cast<size_t>(i)]))];
        SimplicialGMap f = make_g_map(x, y, vmap);
        require_covering(f);

        CoefficientSystem reg2 = fp_system(GroupRingModule::regular(s3, 0, 2));
        BredonTransfer t = bredon_transfer(f, reg2);
        REQUIRE(t.tr[0].rows() == 6);
        REQUIRE(t.tr[0].cols() == 3);

        // independent route: the same composite as a span of orbit maps
        GSetMap proj{FiniteGSet{{e3}}, FiniteGSet{{c2}},
                     {GSetMap::Leg{0, Permutation::identity(3)}}};
        SparseZ composite = t.push[0] * t.tr[0];
        REQUIRE(mat_eq(composite, span_apply(reg2, GSpan{proj, proj})));
        // and the span is multiplication by the fiber cardinality here
        REQUIRE(mat_eq(composite, detail::scaled_identity(3, 2)));
    }

    SECTION("trivial double cover composes to two") {
        Poset yp = suspended_poset(partition_poset(3).poset);
        Poset up = disjoint_union_poset(yp, yp);
        GComplex y = GComplex::order_complex(yp);
        GComplex u = GComplex::order_complex(up);
        std::vector<int> vmap(static_cast<size_t>(up.size()));
        for (int v = 0; v < up.size(); ++v) vmap[static_cast<size_t>(v)] = v % yp.size();
        SimplicialGMap f = make_g_map(u, y, vmap);
        require_covering(f);

        CoefficientSystem sgn3 = fp_system(GroupRingModule::sign(s3, 0, 3));
        BredonTransfer t = bredon_transfer(f, sgn3);
        BredonChainComplex bcy = bredon_chains(y, sgn3);
        BredonChainComplex bcu = bredon_chains(u, sgn3);
        for (int q = 0; q <= y.dimension(); ++q) {
            // transfer then pushforward multiplies by the sheet count
            SparseZ comp = t.push[static_cast<size_t>(q)] * t.tr[static_cast<size_t>(q)];
            REQUIRE(mat_eq(comp, detail::scaled_identity(bcy.gens(q), 2)));
            // the transfer is a chain map modulo relations
            SparseZ lhs = bcu.boundary(q) * t.tr[static_cast<size_t>(q)];
            SparseZ rhs = (q >= 1) ? t.tr[static_cast<size_t>(q - 1)] * bcy.boundary(q)
                                   : SparseZ(static_cast<int>(bcu.gens(q - 1)),
                                             static_cast<int>(bcy.gens(q)));
            REQUIRE(detail::congruent_columns(lhs, rhs,
                                              q >= 1 ? bcu.group_at(q - 1)
                                                     : PresentedAb::free_group(0)));
        }
    }

    SECTION("non-coverings are rejected with the failing square") {
        GComplex y = partition_suspension(3);
        GComplex pt = point_complex(s3);
        std::vector<int> vmap{*y.basepoint()};
        SimplicialGMap f = make_g_map(pt, y, vmap);
        REQUIRE_THROWS_AS(require_covering(f), DomainError);
    }

    SECTION("non-equivariant vertex maps are rejected") {
        GComplex x = coset_complex(s3, e3);
        GComplex y = coset_complex(s3, c2);
        std::vector<int> vmap(6, 0);  // constant map is not equivariant here
        REQUIRE_THROWS_AS(make_g_map(x, y, vmap), DomainError);
    }
}

TEST_CASE("transfer retractions verify p-locally") {
    PermGroup s3 = PermGroup::symmetric(3);
    PermGroup c2 = span_of(3, {cyc(3, {{0, 1}})});
    PermGroup e3 = PermGroup::trivial(3);

    GComplex x = coset_complex(s3, e3);
    GComplex y = coset_complex(s3, c2);
    CosetTable tx = left_cosets(s3, e3);
    CosetTable ty = left_cosets(s3, c2);
    std::vector<int> vmap(static_cast<size_t>(tx.count()));
    for (int i = 0; i < tx.count(); ++i)
        vmap[static_cast<size_t>(i)] =
            ty.coset_of[static_cast<size_t>(s3.element_index(tx.reps[static_cast<size_t>(i)]))];
    SimplicialGMap f = make_g_map(x, y, vmap);

    SECTION("index-two orbit projection retracts away from two") {
        MackeyFunctor sgn3 = fixed_point_mackey(GroupRingModule::sign(s3, 0, 3));
        VerificationReport r = verify_transfer_retract(f, sgn3, 3);
        REQUIRE(r.pass());

        CoefficientSystem reg3 = fp_system(GroupRingModule::regular(s3, 0, 3));
        VerificationReport r2 = verify_transfer_retract(f, reg3, 3);
        REQUIRE(r2.pass());
    }

    SECTION("fiber size divisible by p is a reported precondition failure") {
        CoefficientSystem reg2 = fp_system(GroupRingModule::regular(s3, 0, 2));
        VerificationReport r = verify_transfer_retract(f, reg2, 2);
        REQUIRE_FALSE(r.pass());
        REQUIRE(r.first_failure() != nullptr);
        REQUIRE(r.first_failure()->name.find("fiber") != std::string::npos);
        // composites are skipped entirely once the precondition fails
        for (const auto& ch : r.checks()) REQUIRE(ch.name.find("composite") == std::string::npos);
    }

    SECTION("integral constants pass through report-level localization") {
        Poset yp = suspended_poset(partition_poset(3).poset);
        Poset up = disjoint_union_poset(yp, yp);
        GComplex yc = GComplex::order_complex(yp);
        GComplex uc = GComplex::order_complex(up);
        std::vector<int> fold(static_cast<size_t>(up.size()));
        for (int v = 0; v < up.size(); ++v) fold[static_cast<size_t>(v)] = v % yp.size();
        SimplicialGMap g = make_g_map(uc, yc, fold);

        CoefficientSystem cz = constant_system(s3, FGAbGroup::free(1), 0);
        REQUIRE(verify_transfer_retract(g, cz, 3).pass());
        REQUIRE_FALSE(verify_transfer_retract(g, cz, 2).pass());
    }
}

TEST_CASE("coefficient restriction matches induced complexes") {
    PermGroup s3 = PermGroup::symmetric(3);
    PermGroup c2 = span_of(3, {cyc(3, {{0, 1}})});
    PermGroup c3 = span_of(3, {cyc(3, {{0, 1, 2}})});
    PermGroup e3 = PermGroup::trivial(3);

    SECTION("restricting to the whole group changes nothing") {
        CoefficientSystem cz = constant_system(s3, FGAbGroup::free(1), 0);
        CoefficientSystem kz = restrict_coefficients(cz, s3);
        for (const PermGroup& d : {e3, c2, c3, s3}) {
            REQUIRE(kz.value_of(d) == FGAbGroup::free(1));
        }
        REQUIRE(mat_eq(kz.covariant(OrbitMap{c2, s3, Permutation::identity(3)}),
                       SparseZ::identity(1)));
        REQUIRE(mat_eq(kz.contravariant(OrbitMap{e3, c3, Permutation::identity(3)}),
                       SparseZ::identity(1)));
    }

    SECTION("restricted values come from induced orbits") {
        CoefficientSystem reg2 = fp_system(GroupRingModule::regular(s3, 0, 2));
        CoefficientSystem k3 = restrict_coefficients(reg2, c3);
        REQUIRE(k3.value_of(PermGroup::trivial(3)) == FGAbGroup::free(6));
        REQUIRE(k3.value_of(c3) == FGAbGroup::free(2));
        REQUIRE(k3.locality() == reg2.locality());
    }

    SECTION("point fibers compare to single-orbit complexes") {
        CoefficientSystem reg2 = fp_system(GroupRingModule::regular(s3, 0, 2));
        std::vector<std::pair<PermGroup, long>> cases = {
            {e3, 6}, {c2, 3}, {c3, 2}, {s3, 1}};
        for (const auto& [k, rank] : cases) {
            RestrictionComparison rc = verify_coefficient_restriction(reg2, k, point_poset(s3));
            REQUIRE(rc.report.pass());
            REQUIRE((rc.restricted == std::vector<FGAbGroup>{FGAbGroup::free(rank)}));
            REQUIRE(rc.restricted == rc.induced);
        }
    }

    SECTION("affine subgroup acts on the line poset through its linear part") {
        PermGroup s4 = PermGroup::symmetric(4);
        PermGroup aff = affine_group(2, 2);
        REQUIRE(aff.order() == 24);
        SubspacePoset sp = subgroup_poset_B(2, 2);
        Poset lines = sp.poset;
        VectorSpaceFp space = sp.space;
        auto inner = sp.poset.action().act;
        lines.set_action({aff, [inner, space](const Permutation& g, int v) {
                              return inner(linear_part(g, space), v);
                          }});

        CoefficientSystem cz = constant_system(s4, FGAbGroup::free(1), 0);
        RestrictionComparison rc = verify_coefficient_restriction(cz, aff, lines);
        REQUIRE(rc.report.pass());
        REQUIRE((rc.restricted == std::vector<FGAbGroup>{FGAbGroup::free(1)}));
        REQUIRE(rc.restricted == rc.induced);
    }
}

TEST_CASE("one-class approximations match fixed-point models") {
    SECTION("normal regular embedding untwists to a free module") {
        PermGroup s4 = PermGroup::symmetric(4);
        RegularEmbedding emb = regular_embedding(2, 2);
        GComplex x = partition_suspension(4);
        CoefficientSystem reg2 = fp_system(GroupRingModule::regular(s4, 0, 2));
        std::vector<FGAbGroup> out = one_class_approximation_homology(x, emb.delta, reg2, 1);
        REQUIRE((out == std::vector<FGAbGroup>{FGAbGroup::zero(), FGAbGroup::free(2)}));
    }

    SECTION("trivial class gives plain homology") {
        PermGroup e1 = PermGroup::trivial(1);
        Poset two(2);
        two.set_action({e1, [](const Permutation&, int v) { return v; }});
        GComplex x = GComplex::order_complex(two);
        CoefficientSystem cz = constant_system(e1, FGAbGroup::free(1), 0);
        std::vector<FGAbGroup> out = one_class_approximation_homology(x, e1, cz, 1);
        REQUIRE((out == std::vector<FGAbGroup>{FGAbGroup::free(2), FGAbGroup::zero()}));
    }

    SECTION("empty fixed complexes contribute nothing") {
        PermGroup s2 = PermGroup::symmetric(2);
        GComplex x = digon_complex();
        CoefficientSystem triv2 = fp_system(GroupRingModule::trivial(s2, 0, 2));
        std::vector<FGAbGroup> out = one_class_approximation_homology(x, s2, triv2, 2);
        REQUIRE((out ==
                 std::vector<FGAbGroup>{FGAbGroup::zero(), FGAbGroup::zero(), FGAbGroup::zero()}));
    }

    SECTION("self-normalizing stabilizer sees its own value") {
        PermGroup s3 = PermGroup::symmetric(3);
        PermGroup c2 = span_of(3, {cyc(3, {{0, 1}})});
        GComplex x = GComplex::order_complex(partition_poset(3).poset);
        CoefficientSystem reg2 = fp_system(GroupRingModule::regular(s3, 0, 2));
        std::vector<FGAbGroup> out = one_class_approximation_homology(x, c2, reg2, 1);
        REQUIRE((out == std::vector<FGAbGroup>{FGAbGroup::free(3), FGAbGroup::zero()}));
    }

    SECTION("mixed torsion values are rejected") {
        PermGroup s3 = PermGroup::symmetric(3);
        GComplex x = GComplex::order_complex(partition_poset(3).poset);
        CoefficientSystem mixed = constant_system(s3, FGAbGroup{1, {2}}, 0);
        REQUIRE_THROWS_AS(
            one_class_approximation_homology(x, PermGroup::trivial(3), mixed, 1), DomainError);
    }

    SECTION("oversized windows hit the capacity guard") {
        PermGroup s4 = PermGroup::symmetric(4);
        RegularEmbedding emb = regular_embedding(2, 2);
        GComplex x = partition_suspension(4);
        CoefficientSystem reg2 = fp_system(GroupRingModule::regular(s4, 0, 2));
        REQUIRE_THROWS_AS(one_class_approximation_homology(x, emb.delta, reg2, 8),
                          CapacityError);
    }
}

TEST_CASE("suspension gluing is exact") {
    PermGroup s3 = PermGroup::symmetric(3);
    PermGroup s4 = PermGroup::symmetric(4);
    PermGroup s2 = PermGroup::symmetric(2);

    REQUIRE(verify_mayer_vietoris(partition_poset(3).poset,
                                  fp_system(GroupRingModule::sign(s3, 0, 3)))
                .pass());
    REQUIRE(verify_mayer_vietoris(digon_poset(), fp_system(GroupRingModule::sign(s2, 0, 2)))
                .pass());
    REQUIRE(verify_mayer_vietoris(partition_poset(4).poset,
                                  constant_system(s4, FGAbGroup::free(1), 0))
                .pass());
}

TEST_CASE("transfer naturality squares commute") {
    PermGroup s3 = PermGroup::symmetric(3);
    PermGroup c2 = span_of(3, {cyc(3, {{0, 1}})});
    PermGroup c3 = span_of(3, {cyc(3, {{0, 1, 2}})});
    CoefficientSystem reg2 = fp_system(GroupRingModule::regular(s3, 0, 2));

    SECTION("orbit projections pull back over a point") {
        Poset base = point_poset(s3);
        Poset cover = coset_poset(s3, c2);
        Poset other = coset_poset(s3, c3);
        std::vector<int> cover_map(static_cast<size_t>(cover.size()), 0);
        std::vector<int> other_map(static_cast<size_t>(other.size()), 0);
        VerificationReport r =
            verify_transfer_naturality(base, cover, cover_map, other, other_map, reg2);
        REQUIRE(r.pass());
    }

    SECTION("fold covers pull back along a fixed point") {
        Poset base = suspended_poset(partition_poset(3).poset);
        Poset cover = disjoint_union_poset(base, base);
        std::vector<int> cover_map(static_cast<size_t>(cover.size()));
        for (int v = 0; v < cover.size(); ++v)
            cover_map[static_cast<size_t>(v)] = v % base.size();
        Poset other = point_poset(s3);
        std::vector<int> other_map{3};  // the fixed minimal element
        VerificationReport r =
            verify_transfer_naturality(base, cover, cover_map, other, other_map, reg2);
        REQUIRE(r.pass());
    }
}

TEST_CASE("coefficient tables outside the class list are rejected") {
    PermGroup s3 = PermGroup::symmetric(3);
    CoefficientSystem cz = constant_system(s3, FGAbGroup::free(1), 0);
    cz.table().freeze();
    GComplex x = GComplex::order_complex(partition_poset(3).poset);
    REQUIRE_THROWS_AS(bredon_chains(x, cz), DomainError);

    // reduced complexes need a basepoint
    CoefficientSystem cz2 = constant_system(s3, FGAbGroup::free(1), 0);
    REQUIRE_THROWS_AS(bredon_chains(x, cz2, true), DomainError);
}

TEST_CASE("serialized chain data is deterministic") {
    PermGroup s4 = PermGroup::symmetric(4);
    GComplex x = GComplex::order_complex(partition_poset(4).poset);
    CoefficientSystem cz = constant_system(s4, FGAbGroup::free(1), 0);

    BredonChainComplex bc = bredon_chains(x, cz);
    nlohmann::json j = bredon_to_json(bc);
    REQUIRE(j["degrees"].size() == 2);
    REQUIRE(j["degrees"][0]["orbits"].size() == 3);
    REQUIRE(j["degrees"][1]["orbits"].size() == 2);
    REQUIRE(j["direction"] == "homology");

    nlohmann::json again = bredon_to_json(bredon_chains(x, cz));
    REQUIRE(j.dump() == again.dump());

    std::string csv = homology_csv(bredon_homology(x, cz));
    REQUIRE(csv.find("degree,value") != std::string::npos);
    REQUIRE(csv.find("0,Z") != std::string::npos);
    REQUIRE(csv.find("1,0") != std::string::npos);
}
