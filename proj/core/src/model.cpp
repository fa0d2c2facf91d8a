#include "efx/model.hpp"

#include <algorithm>

namespace efx {

void Instance::validate() const {
    require(n >= 1, "instance needs at least one agent");
    require(m >= 1, "instance needs at least one good");
    require(static_cast<int>(values.size()) == n, "values matrix must have n rows");
    for (const auto& row : values) {
        require(static_cast<int>(row.size()) == m, "values matrix must have m columns");
        for (const auto& v : row) require(v >= 0, "values must be nonnegative");
    }
}

Instance MultigraphInstance::toInstance() const {
    Instance inst;
    inst.n = n;
    inst.m = m;
    inst.values.assign(n, std::vector<Value>(m, Value(0)));
    for (int g = 0; g < m; ++g) {
        inst.values[edges[g].a][g] = edges[g].va;
        inst.values[edges[g].b][g] = edges[g].vb;
    }
    return inst;
}

void MultigraphInstance::validate() const {
    require(n >= 2, "multigraph needs at least two agents");
    require(m >= 1, "multigraph needs at least one edge");
    require(static_cast<int>(edges.size()) == m, "edge list must have m entries");
    for (const auto& e : edges) {
        require(0 <= e.a && e.a < n && 0 <= e.b && e.b < n, "edge endpoint out of range");
        require(e.a != e.b, "self-loop edges are not allowed");
        require(e.va >= 0 && e.vb >= 0, "negative edge value");
    }
}

Value ThreeValueInstance::labelValue(char label) const {
    switch (label) {
        case 'a': return Value(1);
        case 'b': return b;
        case 'c': return c;
        default: throw InputError(std::string("bad value label '") + label + "'");
    }
}

Instance ThreeValueInstance::toInstance() const {
    Instance inst;
    inst.n = n;
    inst.m = m;
    inst.values.assign(n, std::vector<Value>(m));
    for (int i = 0; i < n; ++i)
        for (int g = 0; g < m; ++g) inst.values[i][g] = labelValue(labels[i][g]);
    return inst;
}

void ThreeValueInstance::validate() const {
    require(n >= 1 && m >= 1, "three-value instance needs agents and goods");
    require(b < 1 && b > c && c >= 0, "three-value parameters must satisfy 1 > b > c >= 0");
    require(static_cast<int>(labels.size()) == n, "labels must have n rows");
    for (const auto& row : labels) {
        require(static_cast<int>(row.size()) == m, "labels row must have length m");
        for (char ch : row)
            require(ch == 'a' || ch == 'b' || ch == 'c', "labels must be 'a', 'b' or 'c'");
    }
}

void PartialAllocation::validate(const Instance& inst) const {
    require(static_cast<int>(bundles.size()) == inst.n, "allocation must have one bundle per agent");
    std::vector<char> seen(inst.m, 0);
    for (const auto& bundle : bundles) {
        require(std::is_sorted(bundle.begin(), bundle.end()), "bundle not sorted");
        for (int g : bundle) {
            require(0 <= g && g < inst.m, "good id out of range");
            require(!seen[g], "good allocated twice");
            seen[g] = 1;
        }
    }
}

int PartialAllocation::allocatedCount() const {
    int k = 0;
    for (const auto& bundle : bundles) k += static_cast<int>(bundle.size());
    return k;
}

Value bundleValue(const Instance& inst, int agent, const Bundle& goods) {
    Value total(0);
    for (int g : goods) total += inst.values[agent][g];
    return total;
}

std::vector<int> poolOf(const Instance& inst, const PartialAllocation& alloc) {
    std::vector<char> allocated(inst.m, 0);
    for (const auto& bundle : alloc.bundles)
        for (int g : bundle) allocated[g] = 1;
    std::vector<int> pool;
    for (int g = 0; g < inst.m; ++g)
        if (!allocated[g]) pool.push_back(g);
    return pool;
}

PartialAllocation seedAllocation(const Instance& inst) {
    require(inst.m > inst.n, "seed allocation requires more goods than agents");
    PartialAllocation alloc;
    alloc.bundles.resize(inst.n);
    for (int i = 0; i < inst.n; ++i) alloc.bundles[i] = {i};
    return alloc;
}

} // namespace efx
