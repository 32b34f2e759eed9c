#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "parcx/common.hpp"

namespace parcx {

/* A permutation of {0,...,n-1}, stored as its image list.
 * Composition is right-to-left: (f*g)(x) = f(g(x)).
 * External (JSON/CLI) representations are 1-based image lists. */
class Permutation {
  public:
    Permutation() = default;
    explicit Permutation(std::vector<int> images) : img_(std::move(images)) {
        std::vector<char> seen(img_.size(), 0);
        for (int v : img_) {
            require(v >= 0 && v < static_cast<int>(img_.size()) && !seen[v],
                    "permutation image list is not a bijection");
            seen[v] = 1;
        }
    }

    static Permutation identity(int degree) {
        std::vector<int> img(degree);
        std::iota(img.begin(), img.end(), 0);
        return Permutation(std::move(img));
    }

    /* Build from disjoint-cycle data on {0,...,degree-1}. */
    static Permutation from_cycles(int degree, const std::vector<std::vector<int>>& cycles) {
        std::vector<int> img(degree);
        std::iota(img.begin(), img.end(), 0);
        for (const auto& cyc : cycles) {
            for (size_t i = 0; i < cyc.size(); ++i) {
                int a = cyc[i], b = cyc[(i + 1) % cyc.size()];
                require(a >= 0 && a < degree, "cycle entry out of range");
                img[a] = b;
            }
        }
        return Permutation(std::move(img));
    }

    int degree() const { return static_cast<int>(img_.size()); }
    int operator()(int x) const { return img_[x]; }
    const std::vector<int>& images() const { return img_; }

    Permutation operator*(const Permutation& rhs) const {
        std::vector<int> img(img_.size());
        for (size_t x = 0; x < img_.size(); ++x) img[x] = img_[rhs.img_[x]];
        Permutation out;
        out.img_ = std::move(img);
        return out;
    }

    Permutation inverse() const {
        std::vector<int> img(img_.size());
        for (size_t x = 0; x < img_.size(); ++x) img[img_[x]] = static_cast<int>(x);
        Permutation out;
        out.img_ = std::move(img);
        return out;
    }

    bool is_identity() const {
        for (size_t x = 0; x < img_.size(); ++x)
            if (img_[x] != static_cast<int>(x)) return false;
        return true;
    }

    int order() const {
        int n = 1;
        Permutation p = *this;
        while (!p.is_identity()) {
            p = p * (*this);
            ++n;
        }
        return n;
    }

    int sign() const {
        std::vector<char> seen(img_.size(), 0);
        int parity = 0;
        for (size_t s = 0; s < img_.size(); ++s) {
            if (seen[s]) continue;
            int len = 0;
            for (int x = static_cast<int>(s); !seen[x]; x = img_[x]) {
                seen[x] = 1;
                ++len;
            }
            parity ^= (len - 1) & 1;
        }
        return parity ? -1 : 1;
    }

    std::vector<std::vector<int>> cycles(bool include_fixed = false) const {
        std::vector<std::vector<int>> out;
        std::vector<char> seen(img_.size(), 0);
        for (size_t s = 0; s < img_.size(); ++s) {
            if (seen[s]) continue;
            std::vector<int> cyc;
            for (int x = static_cast<int>(s); !seen[x]; x = img_[x]) {
                seen[x] = 1;
                cyc.push_back(x);
            }
            if (cyc.size() > 1 || include_fixed) out.push_back(std::move(cyc));
        }
        return out;
    }

    /* Sorted cycle lengths, fixed points included: a conjugacy invariant. */
    std::vector<int> cycle_type() const {
        std::vector<int> lens;
        for (const auto& c : cycles(true)) lens.push_back(static_cast<int>(c.size()));
        std::sort(lens.begin(), lens.end());
        return lens;
    }

    bool fixes_nothing() const {
        for (size_t x = 0; x < img_.size(); ++x)
            if (img_[x] == static_cast<int>(x)) return false;
        return true;
    }

    std::string to_cycle_string() const {
        auto cs = cycles();
        if (cs.empty()) return "()";
        std::string out;
        for (const auto& c : cs) {
            out += '(';
            for (size_t i = 0; i < c.size(); ++i) {
                if (i) out += ' ';
                out += std::to_string(c[i] + 1);
            }
            out += ')';
        }
        return out;
    }

    bool operator==(const Permutation& rhs) const { return img_ == rhs.img_; }
    bool operator<(const Permutation& rhs) const { return img_ < rhs.img_; }

  private:
    std::vector<int> img_;
};

inline Permutation conjugate(const Permutation& g, const Permutation& s) {
    // g s g^{-1}
    return g * s * g.inverse();
}

}  // namespace parcx
