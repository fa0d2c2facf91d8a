#pragma once

#include "efx/errors.hpp"
#include "efx/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace efx {

// Agents and goods are dense 0-based ids. All tie-breaking anywhere in the
// system is "lexicographically least id(s)".

// Additive valuations: values[i][g] = agent i's value for good g.
struct Instance {
    int n = 0;
    int m = 0;
    std::vector<std::vector<Value>> values;

    const Value& value(int agent, int good) const { return values[agent][good]; }
    void validate() const;
};

// Goods are the edges of a multigraph over the agents; only an edge's two
// endpoints may value it nonzero. Good ids are edge indices.
struct MultigraphInstance {
    struct Edge {
        int a = 0, b = 0; // endpoints, a != b
        Value va, vb;     // value for endpoint a resp. b
    };
    int n = 0;
    int m = 0;
    std::vector<Edge> edges;

    Instance toInstance() const;
    void validate() const;
};

// Every value is one of a=1 > b > c >= 0; labels[i][g] in {'a','b','c'}.
struct ThreeValueInstance {
    int n = 0;
    int m = 0;
    Value b, c;
    std::vector<std::string> labels;

    Value labelValue(char label) const;
    Instance toInstance() const;
    void validate() const;
};

// Sorted vector of good ids.
using Bundle = std::vector<int>;

struct PartialAllocation {
    std::vector<Bundle> bundles; // one per agent, each sorted ascending

    bool operator==(const PartialAllocation&) const = default;
    // Checks ids in range, bundles sorted, pairwise disjoint.
    void validate(const Instance& inst) const;
    int allocatedCount() const;
    bool completeFor(const Instance& inst) const { return allocatedCount() == inst.m; }
};

Value bundleValue(const Instance& inst, int agent, const Bundle& goods);

// The pool is never stored; it is always this complement.
std::vector<int> poolOf(const Instance& inst, const PartialAllocation& alloc);

// Agent j receives good j. Requires m > n (callers handle m <= n separately
// with a trivial exact-EFX allocation).
PartialAllocation seedAllocation(const Instance& inst);

} // namespace efx
