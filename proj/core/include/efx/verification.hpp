#pragma once

#include "efx/model.hpp"

#include <compare>
#include <functional>
#include <optional>
#include <vector>

namespace efx::verification {

// Largest alpha for which the allocation is alpha-EFX: the minimum over
// ordered pairs (i,j), i != j, whose best-after-one-removal value
// max_{g in X_j} v_i(X_j \ {g}) is positive, of v_i(X_i) / that value.
// Unbounded when no pair qualifies (e.g. all bundles are singletons).
struct AlphaReport {
    struct Witness {
        int envier = 0, envied = 0, removedGood = 0;
        bool operator==(const Witness&) const = default;
        auto operator<=>(const Witness&) const = default;
    };
    bool unbounded = true;
    Value alpha;                       // meaningful only when !unbounded
    std::optional<Witness> witness;    // lexicographically least argmin
    std::vector<Witness> argmin;       // every pair attaining the minimum

    // true iff the allocation is (p/q)-EFX.
    bool atLeast(const Value& threshold) const { return unbounded || alpha >= threshold; }
};

AlphaReport maxAlphaEfx(const Instance& inst, const PartialAllocation& alloc);

// criticalGoods(...)[i] = pool goods g with 2*v_i(g) > v_i(X_i), ascending.
std::vector<std::vector<int>> criticalGoods(const Instance& inst, const PartialAllocation& alloc);

struct PropertyReport {
    // a: singleton-bundle agents are exactly EFX toward everyone
    // b: every agent is 2/3-EFX toward everyone
    // c: nobody prefers a single pool good to her bundle
    // d: multi-good-bundle agents have no critical goods
    // e: singleton agents have at most one critical good, worth <= 2/3 of the bundle
    bool a = true, b = true, c = true, d = true, e = true;
    std::optional<bool> f1, f2; // three-value-only properties; set by checkPropertiesF
    std::string firstViolation; // empty when everything requested passed

    bool allAtoE() const { return a && b && c && d && e; }
};

PropertyReport checkProperties(const Instance& inst, const PartialAllocation& alloc);

// F1: agents in the value-1-or-below-2/3 band see no pool good worth >= 1.
// F2: such agents see no good worth >= 1 inside anyone's multi-good bundle.
PropertyReport checkPropertiesF(const ThreeValueInstance& inst, const PartialAllocation& alloc);

// Levels 1..5; smaller is better. 1: v>=2; 2: v in [1+b,2); 3: v in (1,1+b);
// 4: v in [2/3,1); 5: v == 1 or v < 2/3.
int hierarchyLevel(const Value& v, const Value& b);

struct PotentialValue {
    std::int64_t n2 = 0;      // |{i : v_i >= 2}|
    std::int64_t n1b = 0;     // |{i : v_i in [1+b,2)}|
    std::int64_t n11b = 0;    // |{i : v_i in (1,1+b)}|
    std::int64_t n23 = 0;     // |{i : v_i in [2/3,1)}|
    Value sw;                 // sum of v_i(X_i) over agents with v_i(X_i) < 1+b

    auto operator<=>(const PotentialValue& o) const {
        if (auto c = n2 <=> o.n2; c != 0) return c;
        if (auto c = n1b <=> o.n1b; c != 0) return c;
        if (auto c = n11b <=> o.n11b; c != 0) return c;
        if (auto c = n23 <=> o.n23; c != 0) return c;
        if (sw < o.sw) return std::strong_ordering::less;
        if (sw > o.sw) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }
    bool operator==(const PotentialValue& o) const { return (*this <=> o) == 0; }
};

PotentialValue potential(const ThreeValueInstance& inst, const PartialAllocation& alloc);

// Exhaustive oracle over every assignment of goods to agents (or, unless
// requireComplete, the pool). Guarded to (n+1)^m <= 2^24 states.
struct OracleResult {
    bool feasible = false;  // some allocation passed the filters
    bool unbounded = false; // best allocation's alpha is Unbounded
    Value bestAlpha;        // meaningful when feasible && !unbounded
    PartialAllocation witness;
};

OracleResult bruteForceBestAlpha(
    const Instance& inst, std::optional<int> maxBundleSize, bool requireComplete,
    const std::function<bool(const Instance&, const PartialAllocation&)>& filter = {});

// Full verifier certificate for an allocation, serialized by json_io.
struct VerifierReport {
    AlphaReport alpha;
    PropertyReport properties;
    std::vector<std::vector<int>> critical;
    bool complete = false;
};

VerifierReport fullReport(const Instance& inst, const PartialAllocation& alloc);
VerifierReport fullReport(const ThreeValueInstance& inst, const PartialAllocation& alloc);

} // namespace efx::verification
