#include "efx/generators.hpp"

#include "efx/errors.hpp"

#include <utility>

namespace efx::gen {
namespace {

const std::vector<Value>& gridOf(const GenSpec& spec, std::vector<Value>& storage) {
    if (!spec.grid.empty()) return spec.grid;
    storage = defaultGrid();
    return storage;
}

bool caseMatches(const GenSpec& spec, const Value& b, const Value& c) {
    if (c >= b || b >= 1) return false; // model validity: 1 > b > c >= 0
    if (spec.forceZeroC && c != 0) return false;
    if (!spec.tvCase && !spec.forceZeroC) return true;
    const auto want = spec.forceZeroC ? allocators::ThreeValueCase::Case3 : *spec.tvCase;
    return allocators::classify(b, c) == want;
}

} // namespace

const char* familyName(Family f) {
    switch (f) {
    case Family::Additive: return "additive";
    case Family::Multigraph: return "multigraph";
    default: return "three-value";
    }
}

std::vector<Value> defaultGrid() {
    std::vector<Value> grid;
    grid.reserve(101);
    for (int k = 0; k <= 100; ++k) grid.emplace_back(k, 100);
    return grid;
}

Instance genAdditive(const GenSpec& spec) {
    require(spec.n >= 1 && spec.m >= 1, "generator needs n >= 1 and m >= 1");
    std::vector<Value> storage;
    const auto& grid = gridOf(spec, storage);
    SplitMix64 rng(spec.seed);
    Instance inst;
    inst.n = spec.n;
    inst.m = spec.m;
    inst.values.assign(static_cast<std::size_t>(spec.n), {});
    for (auto& row : inst.values) {
        row.reserve(static_cast<std::size_t>(spec.m));
        for (int g = 0; g < spec.m; ++g) row.push_back(grid[rng.below(grid.size())]);
    }
    inst.validate();
    return inst;
}

MultigraphInstance genMultigraph(const GenSpec& spec) {
    require(spec.n >= 2 && spec.m >= 1, "multigraph generator needs n >= 2 and m >= 1");
    std::vector<Value> storage;
    const auto& grid = gridOf(spec, storage);
    SplitMix64 rng(spec.seed);
    MultigraphInstance mg;
    mg.n = spec.n;
    mg.m = spec.m;
    mg.edges.reserve(static_cast<std::size_t>(spec.m));
    for (int e = 0; e < spec.m; ++e) {
        MultigraphInstance::Edge edge;
        edge.a = static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.n)));
        int b = static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.n - 1)));
        if (b >= edge.a) ++b;
        edge.b = b;
        edge.va = grid[rng.below(grid.size())];
        edge.vb = grid[rng.below(grid.size())];
        mg.edges.push_back(std::move(edge));
    }
    mg.validate();
    return mg;
}

ThreeValueInstance genThreeValue(const GenSpec& spec) {
    require(spec.n >= 1 && spec.m >= 1, "generator needs n >= 1 and m >= 1");
    std::vector<Value> storage;
    const auto& grid = gridOf(spec, storage);
    // Enumerate the valid (b, c) grid pairs for the requested case up front;
    // a uniform pick from that list replaces rejection sampling.
    std::vector<std::pair<Value, Value>> pairs;
    for (const auto& b : grid)
        for (const auto& c : grid)
            if (caseMatches(spec, b, c)) pairs.emplace_back(b, c);
    require(!pairs.empty(), "value grid admits no (b, c) pair for the requested case");
    SplitMix64 rng(spec.seed);
    const auto& [b, c] = pairs[rng.below(pairs.size())];
    ThreeValueInstance tv;
    tv.n = spec.n;
    tv.m = spec.m;
    tv.b = b;
    tv.c = c;
    static const char kLabels[3] = {'a', 'b', 'c'};
    tv.labels.assign(static_cast<std::size_t>(spec.n), {});
    for (auto& row : tv.labels) {
        row.reserve(static_cast<std::size_t>(spec.m));
        for (int g = 0; g < spec.m; ++g) row.push_back(kLabels[rng.below(3)]);
    }
    tv.validate();
    return tv;
}

ThreeValueInstance exampleOne() {
    ThreeValueInstance tv;
    tv.n = 3;
    tv.m = 6;
    tv.b = Value(3, 5);
    tv.c = Value(1, 100);
    tv.labels.assign(3, std::string(6, 'c'));
    for (int i = 0; i < 3; ++i) {
        tv.labels[static_cast<std::size_t>(i)][0] = 'a';
        tv.labels[static_cast<std::size_t>(i)][1] = 'a';
        tv.labels[static_cast<std::size_t>(i)][static_cast<std::size_t>(2 + i)] = 'b';
    }
    tv.validate();
    return tv;
}

} // namespace efx::gen
