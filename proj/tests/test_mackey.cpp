#include <catch2/catch_amalgamated.hpp>

#include "parcx/mackey.hpp"

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

SparseZ scalar(long v) {
    SparseZ m(1, 1);
    m.set(0, 0, v);
    return m;
}

bool mat_eq(const SparseZ& a, const SparseZ& b, int characteristic = 0) {
    return detail::sparse_equal(a, b, characteristic);
}

long dim_of(const MackeyFunctor& mf, const PermGroup& d, int b) {
    FGAbGroup v = mf.value(d, b);
    REQUIRE(v.free_rank == 0);
    return static_cast<long>(v.torsion.size());
}

}  // namespace

TEST_CASE("subgroup class tables canonicalize conjugates") {
    SubgroupClassTable table(PermGroup::symmetric(4));
    table.populate_all_subgroups();
    REQUIRE(table.count() == 11);

    // conjugate transpositions land in one class, with a verified witness
    PermGroup d1 = span_of(4, {cyc(4, {{0, 1}})});
    PermGroup d2 = span_of(4, {cyc(4, {{2, 3}})});
    auto l1 = table.locate(d1);
    auto l2 = table.locate(d2);
    REQUIRE(l1.cls == l2.cls);
    const PermGroup& rep = table.rep(l1.cls);
    REQUIRE(rep.order() == 2);
    for (const auto& x : d1.elements())
        REQUIRE(rep.contains(l1.witness.inverse() * x * l1.witness));
    for (const auto& x : d2.elements())
        REQUIRE(rep.contains(l2.witness.inverse() * x * l2.witness));

    // the two conjugacy types of Klein four-subgroups stay separate
    PermGroup vnormal = span_of(4, {cyc(4, {{0, 1}, {2, 3}}), cyc(4, {{0, 2}, {1, 3}})});
    PermGroup vother = span_of(4, {cyc(4, {{0, 1}}), cyc(4, {{2, 3}})});
    REQUIRE(table.locate(vnormal).cls != table.locate(vother).cls);

    // growable tables insert on demand; find() never inserts
    SubgroupClassTable small(PermGroup::symmetric(3));
    PermGroup c3 = span_of(3, {cyc(3, {{0, 1, 2}})});
    REQUIRE(small.find(c3) == -1);
    int cls = small.locate(c3).cls;
    REQUIRE(cls >= 0);
    PermGroup c3b = span_of(3, {cyc(3, {{0, 2, 1}})});  // same subgroup, other generator
    REQUIRE(small.find(c3b) == cls);

    // frozen tables refuse subgroups from unseen classes
    small.freeze();
    REQUIRE(small.locate(c3).cls == cls);  // known classes still resolve
    REQUIRE_THROWS_AS(small.locate(span_of(3, {cyc(3, {{0, 1}})})), DomainError);
}

TEST_CASE("constant coefficients are additive over orbits") {
    PermGroup g = PermGroup::symmetric(3);
    PermGroup c3 = span_of(3, {cyc(3, {{0, 1, 2}})});
    CoefficientSystem cs = constant_system(g, FGAbGroup::free(1));

    REQUIRE(cs.value_of(c3) == FGAbGroup::free(1));
    REQUIRE(cs.value_of(g) == FGAbGroup::free(1));

    FiniteGSet two{{c3, g}};
    REQUIRE(evaluate(cs, two) == FGAbGroup::free(2));
    FiniteGSet none{};
    REQUIRE(evaluate(cs, none).is_zero());

    OrbitMap proj{c3, g, Permutation::identity(3)};
    REQUIRE(mat_eq(cs.covariant(proj), SparseZ::identity(1)));
    REQUIRE(mat_eq(cs.contravariant(proj), SparseZ::identity(1)));

    // graded variant: the group sits in grade zero only
    auto graded = constant_system_graded(g, fp_vector_group(2, 1), 3, 2);
    REQUIRE(graded.size() == 3);
    REQUIRE(graded[0].value_of(g) == fp_vector_group(2, 1));
    REQUIRE(graded[1].value_of(g).is_zero());
    REQUIRE(graded[2].value_of(c3).is_zero());
}

TEST_CASE("fixed points of standard integral and modular modules") {
    PermGroup s4 = PermGroup::symmetric(4);
    PermGroup delta = regular_embedding(2, 2).delta;
    MackeyFunctor reg = fixed_point_mackey(GroupRingModule::regular(s4, 0, 2));
    REQUIRE(reg.value(delta) == FGAbGroup::free(6));
    REQUIRE(reg.value(PermGroup::trivial(4)) == FGAbGroup::free(24));
    REQUIRE(reg.value(s4) == FGAbGroup::free(1));

    PermGroup s3 = PermGroup::symmetric(3);
    PermGroup c3 = span_of(3, {cyc(3, {{0, 1, 2}})});
    MackeyFunctor sgn = fixed_point_mackey(GroupRingModule::sign(s3, 0, 3));
    REQUIRE(sgn.value(span_of(3, {cyc(3, {{1, 2}})})).is_zero());
    REQUIRE(sgn.value(PermGroup::trivial(3)) == FGAbGroup::free(1));
    REQUIRE(sgn.value(c3) == FGAbGroup::free(1));
    REQUIRE(sgn.value(s3).is_zero());

    // characteristic p: fixed vectors form F_p vector spaces
    MackeyFunctor modp = fixed_point_mackey(GroupRingModule::regular(s3, 3, 3));
    REQUIRE(modp.value(s3) == fp_vector_group(3, 1));
    REQUIRE(modp.value(PermGroup::trivial(3)) == fp_vector_group(3, 6));

    // the full axiom battery on a small integral example
    REQUIRE(check_mackey_axioms(fixed_point_mackey(GroupRingModule::regular(s3, 0, 2))).pass());
    REQUIRE(check_mackey_axioms(fixed_point_mackey(GroupRingModule::trivial(s4, 0, 2))).pass());
}

TEST_CASE("transfer after restriction multiplies by the index") {
    PermGroup s4 = PermGroup::symmetric(4);
    PermGroup e4 = PermGroup::trivial(4);
    PermGroup delta = regular_embedding(2, 2).delta;
    MackeyFunctor triv = fixed_point_mackey(GroupRingModule::trivial(s4, 0, 2));
    REQUIRE(mat_eq(triv.tr(e4, s4) * triv.res(e4, s4), scalar(24)));
    REQUIRE(mat_eq(triv.tr(delta, s4) * triv.res(delta, s4), scalar(6)));
    REQUIRE(mat_eq(triv.tr(e4, delta) * triv.res(e4, delta), scalar(4) * SparseZ::identity(1)));

    MackeyFunctor reg = fixed_point_mackey(GroupRingModule::regular(s4, 0, 2));
    REQUIRE(mat_eq(reg.tr(e4, s4) * reg.res(e4, s4), scalar(24)));
}

TEST_CASE("spans evaluate through both legs and compose by pullback") {
    PermGroup s3 = PermGroup::symmetric(3);
    PermGroup c3 = span_of(3, {cyc(3, {{0, 1, 2}})});
    PermGroup c2 = span_of(3, {cyc(3, {{0, 1}})});
    Permutation id3 = Permutation::identity(3);
    MackeyFunctor reg = fixed_point_mackey(GroupRingModule::regular(s3, 0, 2));
    const CoefficientSystem& cs = reg.piece();

    FiniteGSet apex{{c3}};
    FiniteGSet top{{s3}};
    GSetMap proj{apex, top, {{0, id3}}};
    GSetMap idm{apex, apex, {{0, id3}}};

    // an identity left leg recovers the covariant map, an identity right leg
    // the contravariant one
    REQUIRE(mat_eq(span_apply(cs, GSpan{idm, proj}), cs.covariant(OrbitMap{c3, s3, id3})));
    REQUIRE(mat_eq(span_apply(cs, GSpan{proj, idm}), cs.contravariant(OrbitMap{c3, s3, id3})));

    // folding two full orbits through identity legs doubles
    FiniteGSet dbl{{s3, s3}};
    GSetMap fold{dbl, top, {{0, id3}, {0, id3}}};
    REQUIRE(mat_eq(span_apply(cs, GSpan{fold, fold}), scalar(2)));

    // pullback composition agrees with matrix composition
    GSpan a{proj, proj};
    FiniteGSet apexw{{c2}};
    GSetMap projw{apexw, top, {{0, id3}}};
    GSpan b{projw, projw};
    GSpan ab = compose_spans(a, b);
    REQUIRE(ab.left.src.stabilizers.size() == 1);
    REQUIRE(ab.left.src.stabilizers[0].order() == 1);  // one free orbit
    REQUIRE(mat_eq(span_apply(cs, ab), span_apply(cs, b) * span_apply(cs, a)));
}

TEST_CASE("equivariant sphere coefficients on two letters") {
    MackeyFunctor mf = borel_mackey(2, 2, 1, 6);
    PermGroup s2 = PermGroup::symmetric(2);
    PermGroup e2 = PermGroup::trivial(2);
    REQUIRE(mf.graded());
    REQUIRE(mf.grades() == 7);
    for (int b = 0; b <= 6; ++b) {
        REQUIRE(mf.value(e2, b) == (b == 2 ? fp_vector_group(2, 1) : FGAbGroup::zero()));
        REQUIRE(mf.value(s2, b) == (b >= 2 ? fp_vector_group(2, 1) : FGAbGroup::zero()));
    }
    // at the bottom grade the transfer is an isomorphism and the restriction
    // vanishes (their composite must be the index, which is zero mod 2)
    REQUIRE(mat_eq(mf.tr(e2, s2, 2), scalar(1), 2));
    REQUIRE(mat_eq(mf.res(e2, s2, 2), SparseZ(1, 1), 2));
    REQUIRE(mf.tr(e2, s2, 3).rows() == 1);
    REQUIRE(mf.tr(e2, s2, 3).cols() == 0);

    REQUIRE(check_mackey_axioms(mf).pass());
    REQUIRE(check_p_constrained(mf, 2).pass());
}

TEST_CASE("equivariant sphere coefficients on three letters at the odd prime") {
    MackeyFunctor mf = borel_mackey(3, 3, 1, 8);
    PermGroup s3 = PermGroup::symmetric(3);
    PermGroup e3 = PermGroup::trivial(3);
    PermGroup c2 = span_of(3, {cyc(3, {{0, 1}})});
    PermGroup c3 = span_of(3, {cyc(3, {{0, 1, 2}})});

    for (int b = 0; b <= 8; ++b) {
        REQUIRE(dim_of(mf, e3, b) == (b == 3 ? 1 : 0));
        REQUIRE(dim_of(mf, c2, b) == 0);
        REQUIRE(dim_of(mf, c3, b) == (b >= 3 ? 1 : 0));
        bool nonzero = (b == 4 || b == 5 || b == 8);
        REQUIRE(dim_of(mf, s3, b) == (nonzero ? 1 : 0));
    }

    REQUIRE(check_mackey_axioms(mf).pass());
    REQUIRE(check_involution_condition(mf, 3, 3).pass());
    REQUIRE(check_p_constrained(mf, 3).pass());

    // value automorphisms transported through inversion agree both ways
    WeylData wd = normalizer_weyl(s3, c3);
    for (const auto& ggen : wd.n.generators()) {
        for (int b = 3; b <= 8; ++b) {
            OrbitMap f{c3, c3, ggen};
            OrbitMap finv{c3, c3, ggen.inverse()};
            REQUIRE(mat_eq(mf.piece(b).contravariant(f), mf.piece(b).covariant(finv), 3));
        }
    }
}

TEST_CASE("equivariant sphere coefficients on four letters") {
    MackeyFunctor mf = borel_mackey(4, 2, 1, 6);
    PermGroup s4 = PermGroup::symmetric(4);
    PermGroup e4 = PermGroup::trivial(4);
    PermGroup t2 = span_of(4, {cyc(4, {{0, 1}})});
    PermGroup f2 = span_of(4, {cyc(4, {{0, 1}, {2, 3}})});
    PermGroup vnormal = span_of(4, {cyc(4, {{0, 1}, {2, 3}}), cyc(4, {{0, 2}, {1, 3}})});
    PermGroup vother = span_of(4, {cyc(4, {{0, 1}}), cyc(4, {{2, 3}})});
    PermGroup c4 = span_of(4, {cyc(4, {{0, 1, 2, 3}})});
    PermGroup c3 = span_of(4, {cyc(4, {{0, 1, 2}})});

    for (int b = 0; b <= 6; ++b) {
        REQUIRE(dim_of(mf, e4, b) == (b == 4 ? 1 : 0));
        REQUIRE(dim_of(mf, t2, b) == (b >= 4 ? 1 : 0));
        REQUIRE(dim_of(mf, f2, b) == (b >= 4 ? 1 : 0));
        REQUIRE(dim_of(mf, vnormal, b) == (b >= 4 ? b - 3 : 0));
        REQUIRE(dim_of(mf, vother, b) == (b >= 4 ? b - 3 : 0));
        REQUIRE(dim_of(mf, c4, b) == (b >= 4 ? 1 : 0));
        REQUIRE(dim_of(mf, c3, b) == (b == 4 ? 1 : 0));
    }
    REQUIRE(dim_of(mf, s4, 4) == 1);
    REQUIRE(dim_of(mf, s4, 5) == 1);
    REQUIRE(dim_of(mf, s4, 6) == 2);

    REQUIRE(check_mackey_axioms(mf).pass());
    REQUIRE(check_centralizer_condition(mf, 4, 2).pass());

    // the two module structures on the diagonal value intertwine via inversion
    WeylData wd = normalizer_weyl(s4, vnormal);
    REQUIRE(wd.w.order() == 6);
    for (const auto& ggen : wd.n.generators()) {
        for (int b = 4; b <= 6; ++b) {
            OrbitMap f{vnormal, vnormal, ggen};
            OrbitMap finv{vnormal, vnormal, ggen.inverse()};
            REQUIRE(mat_eq(mf.piece(b).contravariant(f), mf.piece(b).covariant(finv), 2));
        }
    }
}

TEST_CASE("local constraint checks separate localized from integral values") {
    PermGroup s3 = PermGroup::symmetric(3);
    MackeyFunctor sgn = fixed_point_mackey(GroupRingModule::sign(s3, 0, 3));
    REQUIRE(check_p_constrained(sgn, 3).pass());

    // the same lattice seen with plain integer coefficients fails: some span
    // acts by an integer that is not a unit
    MackeyFunctor plain = fixed_point_mackey(GroupRingModule::trivial(s3, 0, 3), 0);
    VerificationReport rep = check_p_constrained(plain, 3);
    REQUIRE_FALSE(rep.pass());
    REQUIRE(rep.first_failure() != nullptr);

    // doubling span: invertible at an odd prime, not over the plain integers
    PermGroup s2 = PermGroup::symmetric(2);
    Permutation id2 = Permutation::identity(2);
    CoefficientSystem cz = constant_system(s2, FGAbGroup::free(1), 3);
    FiniteGSet topd{{s2}};
    FiniteGSet dbl{{s2, s2}};
    GSetMap fold{dbl, topd, {{0, id2}, {0, id2}}};
    SparseZ x = span_apply(cz, GSpan{fold, fold});
    REQUIRE(mat_eq(x, scalar(2)));
    REQUIRE(is_invertible_endomorphism(x, cz.value_of(s2), 3));
    REQUIRE_FALSE(is_invertible_endomorphism(x, cz.value_of(s2), 0));
}

TEST_CASE("component-group kernels must act trivially on values") {
    PermGroup s4 = PermGroup::symmetric(4);
    MackeyFunctor triv = fixed_point_mackey(GroupRingModule::trivial(s4, 0, 2));
    REQUIRE(check_centralizer_condition(triv, 4, 2).pass());

    MackeyFunctor reg = fixed_point_mackey(GroupRingModule::regular(s4, 0, 2));
    VerificationReport rep = check_centralizer_condition(reg, 4, 2);
    REQUIRE_FALSE(rep.pass());
    const CheckEntry* bad = rep.first_failure();
    REQUIRE(bad != nullptr);
    REQUIRE(bad->details.find("(") != std::string::npos);  // names a witness element
}

TEST_CASE("odd involutions must negate the values") {
    PermGroup s3 = PermGroup::symmetric(3);
    MackeyFunctor sgn = fixed_point_mackey(GroupRingModule::sign(s3, 0, 3));
    REQUIRE(check_involution_condition(sgn, 3, 3).pass());

    MackeyFunctor triv = fixed_point_mackey(GroupRingModule::trivial(s3, 0, 3));
    REQUIRE_FALSE(check_involution_condition(triv, 3, 3).pass());

    REQUIRE_THROWS_AS(check_involution_condition(borel_mackey(2, 2, 1, 2), 2, 2), DomainError);
}

TEST_CASE("a corrupted transfer fails exactly the double coset relation") {
    PermGroup s2 = PermGroup::symmetric(2);
    CoefficientSystem base = fixed_point_mackey(GroupRingModule::trivial(s2, 0, 2)).piece();
    auto table = base.table_ptr();
    int cls_e = table->locate(PermGroup::trivial(2)).cls;
    int cls_g = table->locate(s2).cls;

    CoefficientSystem bad(
        s2, table, [base](int cls) { return base.value(cls); },
        [base, table, cls_e, cls_g](int i, int j, const Permutation& w) {
            SparseZ m = base.covariant(OrbitMap{table->rep(i), table->rep(j), w});
            if (i == cls_e && j == cls_g) m.add(0, 0, 1);  // deliberate corruption
            return m;
        },
        [base, table](int i, int j, const Permutation& w) {
            return base.contravariant(OrbitMap{table->rep(i), table->rep(j), w});
        },
        0);

    VerificationReport rep = check_mackey_axioms(MackeyFunctor(bad));
    REQUIRE_FALSE(rep.pass());
    bool found = false;
    for (const auto& c : rep.checks()) {
        if (c.pass) continue;
        REQUIRE(c.name.find("double coset") != std::string::npos);
        REQUIRE(c.details.find("H=") != std::string::npos);
        REQUIRE(c.details.find("J=") != std::string::npos);
        found = true;
    }
    REQUIRE(found);
}

TEST_CASE("coefficient bundles serialize deterministically") {
    nlohmann::json j1 = mackey_to_json(borel_mackey(2, 2, 1, 4));
    nlohmann::json j2 = mackey_to_json(borel_mackey(2, 2, 1, 4));
    REQUIRE(j1.dump() == j2.dump());
    REQUIRE(j1["classes"].size() == 2);
    REQUIRE(j1["grades"].size() == 5);
    REQUIRE(j1["graded"] == true);

    MackeyFunctor sgn = fixed_point_mackey(GroupRingModule::sign(PermGroup::symmetric(3), 0, 3));
    nlohmann::json k1 = mackey_to_json(sgn);
    REQUIRE(k1["graded"] == false);
    REQUIRE(k1.dump() == mackey_to_json(sgn).dump());
}

TEST_CASE("frozen class tables reject unknown stabilizers in evaluation") {
    PermGroup s3 = PermGroup::symmetric(3);
    MackeyFunctor mf = fixed_point_mackey(GroupRingModule::trivial(s3, 0, 2));
    CoefficientSystem cs = mf.piece();
    cs.table().freeze();
    PermGroup c3 = span_of(3, {cyc(3, {{0, 1, 2}})});
    FiniteGSet s{{c3}};
    REQUIRE_THROWS_AS(evaluate(cs, s), DomainError);
}

TEST_CASE("coefficient windows respect parity and capacity") {
    REQUIRE_THROWS_AS(borel_mackey(3, 3, 2, 4), DomainError);    // even twist, odd prime
    REQUIRE_THROWS_AS(borel_mackey(2, 2, 3, 4), CapacityError);  // larger twists unsupported
    REQUIRE_THROWS_AS(borel_mackey(5, 2, 1, 4), CapacityError);  // degree cap
    REQUIRE_THROWS_AS(borel_mackey(2, 2, 1, 9), CapacityError);  // window cap

    // one-letter edge case: the circle with no symmetry
    MackeyFunctor mf = borel_mackey(1, 2, 1, 3);
    REQUIRE(mf.value(PermGroup::trivial(1), 1) == fp_vector_group(2, 1));
    REQUIRE(mf.value(PermGroup::trivial(1), 0).is_zero());
    REQUIRE(mf.value(PermGroup::trivial(1), 2).is_zero());
}
