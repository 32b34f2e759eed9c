#pragma once

#include <gmpxx.h>

#include <sstream>
#include <string>
#include <vector>

#include "parcx/common.hpp"
#include "parcx/snf.hpp"

namespace parcx {

/* Finitely generated abelian group in invariant-factor form. */
struct FGAbGroup {
    long free_rank = 0;
    std::vector<mpz_class> torsion;  // divisibility chain, each entry >= 2

    bool operator==(const FGAbGroup& o) const {
        return free_rank == o.free_rank && torsion == o.torsion;
    }
    bool operator!=(const FGAbGroup& o) const { return !(*this == o); }

    bool is_zero() const { return free_rank == 0 && torsion.empty(); }

    static FGAbGroup zero() { return {}; }
    static FGAbGroup free(long rank) { return {rank, {}}; }

    /* quotient Z^gens / column span given the invariant factors of the
     * relation matrix */
    static FGAbGroup from_diag(long gens, const std::vector<mpz_class>& diag) {
        FGAbGroup g;
        long rank_r = 0;
        for (const auto& d : diag) {
            check(d > 0, "invariant factors must be positive");
            ++rank_r;
            if (d > 1) g.torsion.push_back(d);
        }
        g.free_rank = gens - rank_r;
        check(g.free_rank >= 0, "relation rank exceeds generator count");
        return g;
    }

    FGAbGroup p_localized(int p) const {
        FGAbGroup g;
        g.free_rank = free_rank;
        for (const auto& d : torsion) {
            mpz_class q = 1, rest = d;
            while (rest % p == 0) {
                q *= p;
                rest /= p;
            }
            if (q > 1) g.torsion.push_back(q);
        }
        return g;
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        if (free_rank == 1) {
            os << "Z";
            first = false;
        } else if (free_rank > 1) {
            os << "Z^" << free_rank;
            first = false;
        }
        for (const auto& d : torsion) {
            if (!first) os << " + ";
            os << "Z/" << d;
            first = false;
        }
        return os.str();
    }
};

/* Abelian group presented as Z^gens modulo the column span of `relations`. */
struct PresentedAb {
    int gens = 0;
    SparseZ relations;  // gens x nrel

    PresentedAb() : relations(0, 0) {}
    PresentedAb(int g, SparseZ rel) : gens(g), relations(std::move(rel)) {
        check(relations.rows() == gens, "relation matrix row count must equal generator count");
    }

    static PresentedAb free_group(int g) { return PresentedAb(g, SparseZ(g, 0)); }

    FGAbGroup normal_form() const {
        return FGAbGroup::from_diag(gens, smith_normal_form(relations).diag);
    }
};

/* cokernel of a map of presented groups given by an integer matrix on
 * generators (target.gens x source.gens) */
inline FGAbGroup cokernel_presented(const SparseZ& f, const PresentedAb& target) {
    check(f.rows() == target.gens, "cokernel: matrix/target mismatch");
    SparseZ combined = SparseZ::hconcat(f, target.relations);
    return FGAbGroup::from_diag(target.gens, smith_normal_form(combined).diag);
}

/* lattice of source-generator vectors x with f(x) = 0 in the target, i.e.
 * the preimage of the relation span, returned as columns of a basis */
inline SparseZ preimage_of_relations(const SparseZ& f, const PresentedAb& target) {
    check(f.rows() == target.gens, "preimage: matrix/target mismatch");
    SparseZ m = SparseZ::hconcat(f, target.relations);
    SparseZ k = kernel_lattice(m);
    // keep the first block of coordinates
    SparseZ proj(f.cols(), k.cols());
    for (int r = 0; r < f.cols(); ++r)
        for (const auto& [c, v] : k.row(r)) proj.set(r, c, v);
    return proj;
}

/* Checks that f carries the source relations into the target relation span,
 * i.e. that it is a well-defined map of presented groups. */
inline bool well_defined_map(const SparseZ& f, const PresentedAb& source,
                             const PresentedAb& target) {
    check(f.cols() == source.gens && f.rows() == target.gens, "map shape mismatch");
    SparseZ image = f * source.relations;
    ZSolver solver(target.relations);
    for (int j = 0; j < image.cols(); ++j) {
        std::vector<mpz_class> col(image.rows());
        for (int r = 0; r < image.rows(); ++r) col[r] = image.get(r, j);
        if (!solver.solve(col)) return false;
    }
    return true;
}

/* kernel of the induced map on presented groups, as an abstract group */
inline FGAbGroup kernel_presented(const SparseZ& f, const PresentedAb& source,
                                  const PresentedAb& target) {
    check(f.cols() == source.gens && f.rows() == target.gens, "kernel: shape mismatch");
    SparseZ lat = preimage_of_relations(f, target);  // source.gens x l
    // kernel = lat / (source relations); express relations in lat coordinates
    ZSolver solver(lat);
    SparseZ expr(lat.cols(), source.relations.cols());
    for (int j = 0; j < source.relations.cols(); ++j) {
        std::vector<mpz_class> col(source.gens);
        for (int r = 0; r < source.gens; ++r) col[r] = source.relations.get(r, j);
        auto sol = solver.solve(col);
        check(sol.has_value(), "source relations must lie in the preimage lattice");
        for (int r = 0; r < lat.cols(); ++r) expr.set(r, j, (*sol)[r]);
    }
    return FGAbGroup::from_diag(lat.cols(), smith_normal_form(expr).diag);
}

/* is the induced map an isomorphism after inverting everything prime to p? */
inline bool is_p_local_iso(const SparseZ& f, const PresentedAb& source, const PresentedAb& target,
                           int p) {
    if (!well_defined_map(f, source, target)) return false;
    if (!cokernel_presented(f, target).p_localized(p).is_zero()) return false;
    return kernel_presented(f, source, target).p_localized(p).is_zero();
}

}  // namespace parcx
