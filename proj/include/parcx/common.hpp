#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace parcx {

/* Error taxonomy: domain errors for violated preconditions, capacity errors
 * when a request exceeds desk scale, integrity errors when an internal
 * cross-check fails (these indicate a bug, not bad input). */

struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

struct CapacityError : std::runtime_error {
    explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

struct IntegrityError : std::logic_error {
    explicit IntegrityError(const std::string& what) : std::logic_error(what) {}
};

/* Desk-scale caps.  PARCX_CAPACITY=<k> scales the element-count caps by k
 * for users who accept longer runtimes; it never changes results. */
inline long capacity_scale() {
    static long scale = [] {
        const char* env = std::getenv("PARCX_CAPACITY");
        if (!env) return 1L;
        long v = std::strtol(env, nullptr, 10);
        return v >= 1 ? v : 1L;
    }();
    return scale;
}

inline constexpr long kMaxGroupOrder = 40320;   // |Sigma_8|
inline constexpr int kMaxSymmetricDegree = 8;
inline constexpr long kMaxPosetElements = 50000;
inline constexpr long kMaxSimplices = 2000000;

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw DomainError(msg);
}

inline void require_capacity(long value, long cap, const std::string& what) {
    if (value > cap * capacity_scale())
        throw CapacityError(what + " exceeds desk-scale capacity (" + std::to_string(value) +
                            " > " + std::to_string(cap * capacity_scale()) +
                            "); set PARCX_CAPACITY to raise");
}

inline void check(bool cond, const std::string& msg) {
    if (!cond) throw IntegrityError(msg);
}

}  // namespace parcx
