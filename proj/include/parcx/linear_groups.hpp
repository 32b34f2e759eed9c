#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "parcx/common.hpp"
#include "parcx/perm_group.hpp"

namespace parcx {

/* Points of F_p^k encoded as integers 0..p^k-1, little-endian base-p digits
 * (matching the digit convention of the regular translation embedding). */
struct VectorSpaceFp {
    int p = 2, k = 1, n = 2;  // n = p^k

    VectorSpaceFp(int prime, int dim) : p(prime), k(dim) {
        require(prime >= 2 && dim >= 1, "vector space needs p >= 2, k >= 1");
        long m = 1;
        for (int i = 0; i < k; ++i) m *= p;
        require_capacity(m, 27, "vector space size p^k");
        n = static_cast<int>(m);
    }

    std::vector<int> digits(int code) const {
        std::vector<int> v(k);
        for (int i = 0; i < k; ++i) {
            v[static_cast<size_t>(i)] = code % p;
            code /= p;
        }
        return v;
    }
    int code(const std::vector<int>& d) const {
        int x = 0;
        for (int i = k - 1; i >= 0; --i) x = x * p + (d[static_cast<size_t>(i)] % p + p) % p;
        return x;
    }
    int add(int a, int b) const {
        auto da = digits(a), db = digits(b);
        for (int i = 0; i < k; ++i) da[static_cast<size_t>(i)] = (da[static_cast<size_t>(i)] + db[static_cast<size_t>(i)]) % p;
        return code(da);
    }
    int scale(int s, int a) const {
        auto da = digits(a);
        for (int i = 0; i < k; ++i) da[static_cast<size_t>(i)] = (da[static_cast<size_t>(i)] * s) % p;
        return code(da);
    }
    /* matrix given row-major (k x k) acting on column vectors */
    int apply_matrix(const std::vector<int>& m, int a) const {
        auto da = digits(a);
        std::vector<int> out(k, 0);
        for (int r = 0; r < k; ++r)
            for (int c = 0; c < k; ++c)
                out[static_cast<size_t>(r)] =
                    (out[static_cast<size_t>(r)] + m[static_cast<size_t>(r * k + c)] * da[static_cast<size_t>(c)]) % p;
        return code(out);
    }
};

inline int smallest_primitive_root(int p) {
    for (int g = 2; g < p; ++g) {
        int x = g % p, order = 1;
        while (x != 1) {
            x = (x * g) % p;
            ++order;
        }
        if (order == p - 1) return g;
    }
    return 1;  // p == 2
}

/* The general linear group GL_k(F_p) as permutations of all p^k points
 * (every element fixes the origin).  Order is checked on construction. */
inline PermGroup general_linear_group(int k, int p) {
    VectorSpaceFp v(p, k);
    std::vector<std::vector<int>> mats;
    // coordinate cycle
    if (k >= 2) {
        std::vector<int> cyc(static_cast<size_t>(k * k), 0);
        for (int i = 0; i < k; ++i) cyc[static_cast<size_t>(i * k + (i + 1) % k)] = 1;
        mats.push_back(cyc);
        // elementary transvection: x_0 += x_1
        std::vector<int> tr(static_cast<size_t>(k * k), 0);
        for (int i = 0; i < k; ++i) tr[static_cast<size_t>(i * k + i)] = 1;
        tr[static_cast<size_t>(0 * k + 1)] = 1;
        mats.push_back(tr);
    }
    if (p > 2) {
        std::vector<int> dg(static_cast<size_t>(k * k), 0);
        for (int i = 0; i < k; ++i) dg[static_cast<size_t>(i * k + i)] = 1;
        dg[0] = smallest_primitive_root(p);
        mats.push_back(dg);
    }
    std::vector<Permutation> gens;
    for (const auto& m : mats) {
        std::vector<int> img(static_cast<size_t>(v.n));
        for (int x = 0; x < v.n; ++x) img[static_cast<size_t>(x)] = v.apply_matrix(m, x);
        gens.emplace_back(std::move(img));
    }
    PermGroup g(v.n, gens);
    long pkk = 1;
    for (int i = 0; i < k; ++i) pkk *= p;
    long expected = 1, pi = 1;
    for (int i = 0; i < k; ++i) {
        expected *= (pkk - pi);
        pi *= p;
    }
    check(g.order() == expected, "general linear group has unexpected order");
    return g;
}

/* The affine group Aff_k(F_p) = translations + the linear group, acting on
 * the p^k points. */
inline PermGroup affine_group(int k, int p) {
    VectorSpaceFp v(p, k);
    PermGroup gl = general_linear_group(k, p);
    std::vector<Permutation> gens = gl.generators();
    for (int i = 0; i < k; ++i) {
        std::vector<int> d(static_cast<size_t>(k), 0);
        d[static_cast<size_t>(i)] = 1;
        int e = v.code(d);
        std::vector<int> img(static_cast<size_t>(v.n));
        for (int x = 0; x < v.n; ++x) img[static_cast<size_t>(x)] = v.add(x, e);
        gens.emplace_back(std::move(img));
    }
    PermGroup aff(v.n, gens);
    long pkk = 1;
    for (int i = 0; i < k; ++i) pkk *= p;
    check(aff.order() == pkk * gl.order(), "affine group has unexpected order");
    return aff;
}

/* image of an affine permutation under the projection to the linear group:
 * x -> g(x) - g(0) */
inline Permutation linear_part(const Permutation& g, const VectorSpaceFp& v) {
    int shift = g(0);
    std::vector<int> img(static_cast<size_t>(v.n));
    for (int x = 0; x < v.n; ++x) img[static_cast<size_t>(x)] = v.add(g(x), v.scale(v.p - 1, shift));
    return Permutation(std::move(img));
}

/* All linear subspaces of F_p^k as sorted point-bitmasks (bit c = code c). */
inline std::vector<uint64_t> all_subspaces(const VectorSpaceFp& v) {
    std::set<uint64_t> found;
    uint64_t zero = 1;  // the subspace {0}
    found.insert(zero);
    std::vector<uint64_t> queue{zero};
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        uint64_t s = queue[qi];
        for (int x = 1; x < v.n; ++x) {
            if ((s >> x) & 1) continue;
            // span of s and x
            uint64_t bigger = s;
            std::vector<int> members;
            for (int c = 0; c < v.n; ++c)
                if ((s >> c) & 1) members.push_back(c);
            for (int c : members)
                for (int t = 0; t < v.p; ++t) bigger |= uint64_t{1} << v.add(c, v.scale(t, x));
            // close under addition
            for (;;) {
                uint64_t grown = bigger;
                for (int a = 0; a < v.n; ++a) {
                    if (!((bigger >> a) & 1)) continue;
                    for (int b = a; b < v.n; ++b)
                        if ((bigger >> b) & 1) grown |= uint64_t{1} << v.add(a, b);
                }
                if (grown == bigger) break;
                bigger = grown;
            }
            if (found.insert(bigger).second) queue.push_back(bigger);
        }
    }
    return {found.begin(), found.end()};
}

inline int subspace_dim(uint64_t mask, const VectorSpaceFp& v) {
    int count = 0;
    for (int c = 0; c < v.n; ++c) count += (mask >> c) & 1;
    int d = 0, q = 1;
    while (q < count) {
        q *= v.p;
        ++d;
    }
    check(q == count, "subspace size is not a power of p");
    return d;
}

inline uint64_t apply_to_subspace(const Permutation& g, uint64_t mask, const VectorSpaceFp& v) {
    uint64_t out = 0;
    for (int c = 0; c < v.n; ++c)
        if ((mask >> c) & 1) out |= uint64_t{1} << g(c);
    return out;
}

}  // namespace parcx
