#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "parcx/common.hpp"
#include "parcx/perm_group.hpp"
#include "parcx/permutation.hpp"

namespace parcx {

/* A partition of {0, .., n-1} into disjoint nonempty blocks.  Canonical form:
 * each block sorted ascending, blocks ordered by their minimum element. */
class SetPartition {
  public:
    SetPartition() = default;

    static SetPartition from_blocks(int n, std::vector<std::vector<int>> blocks) {
        SetPartition p;
        p.n_ = n;
        p.blocks_ = std::move(blocks);
        p.canonicalize();
        return p;
    }

    static SetPartition discrete(int n) {
        std::vector<std::vector<int>> blocks(n);
        for (int i = 0; i < n; ++i) blocks[static_cast<size_t>(i)] = {i};
        return from_blocks(n, std::move(blocks));
    }

    static SetPartition indiscrete(int n) {
        std::vector<int> all(n);
        std::iota(all.begin(), all.end(), 0);
        return from_blocks(n, {all});
    }

    /* partition whose blocks are the orbits of a group */
    static SetPartition orbit_partition(const PermGroup& g) {
        return from_blocks(g.degree(), g.orbits());
    }

    int degree() const { return n_; }
    int num_blocks() const { return static_cast<int>(blocks_.size()); }
    const std::vector<std::vector<int>>& blocks() const { return blocks_; }
    int block_of(int x) const { return block_of_[static_cast<size_t>(x)]; }
    bool same_block(int x, int y) const { return block_of(x) == block_of(y); }

    /* more than one block */
    bool is_proper() const { return num_blocks() > 1; }
    /* some block has more than one element */
    bool is_nontrivial() const { return num_blocks() < n_; }

    /* every block of this partition is contained in a block of c */
    bool refines(const SetPartition& c) const {
        check(n_ == c.n_, "refines: degree mismatch");
        for (const auto& b : blocks_) {
            int target = c.block_of(b[0]);
            for (int x : b)
                if (c.block_of(x) != target) return false;
        }
        return true;
    }

    SetPartition apply(const Permutation& g) const {
        check(g.degree() == n_, "apply: degree mismatch");
        std::vector<std::vector<int>> nb;
        nb.reserve(blocks_.size());
        for (const auto& b : blocks_) {
            std::vector<int> img;
            img.reserve(b.size());
            for (int x : b) img.push_back(g(x));
            nb.push_back(std::move(img));
        }
        return from_blocks(n_, std::move(nb));
    }

    bool operator==(const SetPartition& o) const { return n_ == o.n_ && blocks_ == o.blocks_; }
    bool operator<(const SetPartition& o) const { return blocks_ < o.blocks_; }

    std::string to_string() const {
        std::ostringstream os;
        for (size_t i = 0; i < blocks_.size(); ++i) {
            if (i) os << '|';
            for (size_t j = 0; j < blocks_[i].size(); ++j) {
                if (j) os << ' ';
                os << blocks_[i][j] + 1;
            }
        }
        return os.str();
    }

  private:
    void canonicalize() {
        std::vector<char> seen(n_, 0);
        for (auto& b : blocks_) {
            require(!b.empty(), "empty block");
            std::sort(b.begin(), b.end());
            for (int x : b) {
                require(x >= 0 && x < n_ && !seen[static_cast<size_t>(x)],
                        "blocks must partition the ground set");
                seen[static_cast<size_t>(x)] = 1;
            }
        }
        for (char s : seen) require(s, "blocks must cover the ground set");
        std::sort(blocks_.begin(), blocks_.end());
        block_of_.assign(n_, -1);
        for (size_t i = 0; i < blocks_.size(); ++i)
            for (int x : blocks_[i]) block_of_[static_cast<size_t>(x)] = static_cast<int>(i);
    }

    int n_ = 0;
    std::vector<std::vector<int>> blocks_;
    std::vector<int> block_of_;
};

/* join in the partition lattice: finest common coarsening */
inline SetPartition partition_join(const SetPartition& a, const SetPartition& b) {
    check(a.degree() == b.degree(), "join: degree mismatch");
    int n = a.degree();
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[static_cast<size_t>(x)] != x) {
            parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
            x = parent[static_cast<size_t>(x)];
        }
        return x;
    };
    auto unite = [&](int x, int y) { parent[static_cast<size_t>(find(x))] = find(y); };
    for (const auto& blk : a.blocks())
        for (size_t i = 1; i < blk.size(); ++i) unite(blk[0], blk[i]);
    for (const auto& blk : b.blocks())
        for (size_t i = 1; i < blk.size(); ++i) unite(blk[0], blk[i]);
    std::vector<std::vector<int>> groups(n);
    for (int x = 0; x < n; ++x) groups[static_cast<size_t>(find(x))].push_back(x);
    std::vector<std::vector<int>> blocks;
    for (auto& g : groups)
        if (!g.empty()) blocks.push_back(std::move(g));
    return SetPartition::from_blocks(n, std::move(blocks));
}

/* Minimal coarsening whose blocks are unions of orbits of V: the partition
 * generated by the relations of the input together with x ~ vx for v in V. */
inline SetPartition strongly_fixed_coarsening(const SetPartition& lambda, const PermGroup& v) {
    require(v.degree() == lambda.degree(), "coarsening: degree mismatch");
    return partition_join(lambda, SetPartition::orbit_partition(v));
}

/* is every orbit of V inside one block? */
inline bool is_strongly_fixed(const SetPartition& lambda, const PermGroup& v) {
    for (const auto& g : v.generators())
        for (int x = 0; x < lambda.degree(); ++x)
            if (!lambda.same_block(x, g(x))) return false;
    return true;
}

/* is the partition mapped to itself (blocks permuted)? */
inline bool is_fixed_by(const SetPartition& lambda, const PermGroup& h) {
    for (const auto& g : h.generators())
        if (!(lambda.apply(g) == lambda)) return false;
    return true;
}

/* all partitions of {0..n-1}, canonical order */
inline std::vector<SetPartition> all_partitions(int n) {
    require(n >= 1, "all_partitions needs n >= 1");
    // restricted growth strings
    std::vector<SetPartition> out;
    std::vector<int> rgs(n, 0);
    for (;;) {
        int nblocks = *std::max_element(rgs.begin(), rgs.end()) + 1;
        std::vector<std::vector<int>> blocks(nblocks);
        for (int i = 0; i < n; ++i) blocks[static_cast<size_t>(rgs[static_cast<size_t>(i)])].push_back(i);
        out.push_back(SetPartition::from_blocks(n, std::move(blocks)));
        // next restricted growth string
        int i = n - 1;
        for (; i >= 1; --i) {
            int cap = 0;
            for (int j = 0; j < i; ++j) cap = std::max(cap, rgs[static_cast<size_t>(j)]);
            if (rgs[static_cast<size_t>(i)] <= cap) {
                ++rgs[static_cast<size_t>(i)];
                for (int j = i + 1; j < n; ++j) rgs[static_cast<size_t>(j)] = 0;
                break;
            }
        }
        if (i < 1) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace parcx
