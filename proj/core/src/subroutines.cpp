#include "efx/subroutines.hpp"

#include "efx/verification.hpp"

#include <algorithm>
#include <sstream>

namespace efx::subroutines {

namespace {

void insertSorted(Bundle& bundle, int good) {
    bundle.insert(std::lower_bound(bundle.begin(), bundle.end(), good), good);
}

int countEdges(const graphs::EnvyGraph& g) {
    int e = 0;
    for (auto c : g.adj)
        if (c != graphs::EdgeColor::None) ++e;
    return e;
}

std::string joinIds(const std::vector<int>& ids) {
    std::ostringstream ss;
    for (size_t k = 0; k < ids.size(); ++k) ss << (k ? "," : "") << ids[k];
    return ss.str();
}

// Favorite pool good of `agent`: highest value, smallest id on ties.
std::optional<int> favoritePoolGood(const Instance& inst, const PartialAllocation& alloc, int agent) {
    Bundle pool = poolOf(inst, alloc);
    std::optional<int> best;
    for (int g : pool)
        if (!best || inst.value(agent, g) > inst.value(agent, *best)) best = g;
    return best;
}

} // namespace

PartialAllocation cycleResolution(const PartialAllocation& alloc, const EnvyGraph& graph,
                                  const CyclePath& cycle) {
    const auto& v = cycle.vertices;
    invariant(cycle.isCycle && !v.empty(), "cycle resolution needs a nonempty cycle");
    for (size_t k = 0; k < v.size(); ++k)
        invariant(graph.hasEdge(v[k], v[(k + 1) % v.size()]), "cycle edge missing from graph");
    PartialAllocation out = alloc;
    for (size_t k = 0; k < v.size(); ++k) out.bundles[v[k]] = alloc.bundles[v[(k + 1) % v.size()]];
    return out;
}

PartialAllocation allCyclesResolution(const Instance& inst, const PartialAllocation& alloc,
                                      GraphKind kind, const std::optional<ThreeValueParams>& params,
                                      RunTrace* trace, bool requireJaundiced) {
    PartialAllocation out = alloc;
    graphs::EnvyGraph g = graphs::buildGraph(inst, out, kind, params);
    int edges = countEdges(g);
    int rounds = 0;
    const int cap = inst.n * inst.n + inst.m + 1;
    while (auto cycle = graphs::findCycle(g, requireJaundiced)) {
        out = cycleResolution(out, g, *cycle);
        if (trace)
            trace->sub("cycle-resolution", static_cast<std::int64_t>(inst.m) - out.allocatedCount(),
                       std::string(graphs::graphKindName(kind)) + " cycle " + joinIds(cycle->vertices));
        g = graphs::buildGraph(inst, out, kind, params);
        int newEdges = countEdges(g);
        if (!requireJaundiced)
            invariant(newEdges < edges, "cycle resolution must strictly reduce the edge count");
        else
            invariant(++rounds <= cap, "jaundiced cycle elimination failed to make progress");
        edges = newEdges;
    }
    return out;
}

std::map<int, Bundle> pathResolutionShifts(const PartialAllocation& alloc, const CyclePath& path) {
    const auto& v = path.vertices;
    require(v.size() >= 2, "path resolution needs a path with at least one edge");
    std::map<int, Bundle> out;
    for (size_t k = 0; k + 1 < v.size(); ++k) out[v[k]] = alloc.bundles[v[k + 1]];
    return out;
}

PartialAllocation pathResolutionStar(const Instance& inst, const PartialAllocation& alloc,
                                     const EnvyGraph& graph, const CyclePath& path) {
    const auto& v = path.vertices;
    require(v.size() >= 2, "star path resolution needs a path with at least one edge");
    for (size_t k = 0; k + 1 < v.size(); ++k)
        invariant(graph.hasEdge(v[k], v[k + 1]), "path edge missing from graph");
    const int s = v.front(), terminal = v.back();
    require(alloc.bundles[s].size() == 2, "star path resolution needs a source holding exactly two goods");
    Bundle pool = poolOf(inst, alloc);
    require(!pool.empty(), "star path resolution needs a nonempty pool");

    const Bundle oldSource = alloc.bundles[s];
    int fromSource = oldSource[0];
    if (inst.value(terminal, oldSource[1]) > inst.value(terminal, oldSource[0])) fromSource = oldSource[1];
    int fromPool = pool[0];
    for (int g : pool)
        if (inst.value(terminal, g) > inst.value(terminal, fromPool)) fromPool = g;

    PartialAllocation out = alloc;
    for (auto& [agent, bundle] : pathResolutionShifts(alloc, path)) out.bundles[agent] = std::move(bundle);
    Bundle target{fromSource, fromPool};
    std::sort(target.begin(), target.end());
    out.bundles[terminal] = std::move(target);
    // The other good of the old source bundle is now unallocated again.
    return out;
}

PartialAllocation singletonPool(const Instance& inst, const PartialAllocation& alloc, RunTrace* trace) {
    Bundle pool = poolOf(inst, alloc);
    invariant(pool.size() == 1, "singleton-pool takeover expects exactly one unallocated good");
    const int g = pool[0];

    graphs::EnvyGraph gr = graphs::buildGraph(inst, alloc, GraphKind::Reduced);
    std::vector<int> srcs = graphs::sources(gr);
    auto isSource = [&](int i) { return std::binary_search(srcs.begin(), srcs.end(), i); };

    int taker = -1;
    for (int i = 0; i < inst.n && taker < 0; ++i)
        if (alloc.bundles[i].size() == 1 && !isSource(i) &&
            3 * inst.value(i, g) > 2 * bundleValue(inst, i, alloc.bundles[i]))
            taker = i;
    invariant(taker >= 0, "no eligible non-source singleton agent for the last pool good");

    auto path = graphs::pathFromSourceTo(gr, taker);
    invariant(path.has_value(), "no reduced-graph path from a source to the taker");
    invariant(path->vertices.size() >= 2, "taker unexpectedly is a reduced-graph source");
    invariant(alloc.bundles[path->vertices.front()].size() == 2,
              "reduced-graph source does not hold exactly two goods");

    PartialAllocation out = pathResolutionStar(inst, alloc, gr, *path);
    if (trace)
        trace->sub("singleton-pool", static_cast<std::int64_t>(inst.m) - out.allocatedCount(),
                   "agent " + std::to_string(taker) + " takes good " + std::to_string(g) + " via path " +
                       joinIds(path->vertices));
    return out;
}

PartialAllocation singleRoundRobin(const Instance& inst, const PartialAllocation& alloc,
                                   const std::vector<int>& agents) {
    std::vector<int> order = agents;
    std::sort(order.begin(), order.end());
    PartialAllocation out = alloc;
    for (int agent : order) {
        auto g = favoritePoolGood(inst, out, agent);
        if (!g) break;
        insertSorted(out.bundles[agent], *g);
    }
    return out;
}

PartialAllocation envyCycleElimination(const Instance& inst, const PartialAllocation& alloc,
                                       RunTrace* trace,
                                       const std::function<void(const PartialAllocation&)>& observer) {
    PartialAllocation out = alloc;
    Bundle goods = poolOf(inst, out); // ascending by construction
    for (int g : goods) {
        graphs::EnvyGraph graph = graphs::buildGraph(inst, out, GraphKind::Plain);
        std::vector<int> srcs = graphs::sources(graph);
        while (srcs.empty()) {
            auto cycle = graphs::findCycle(graph, false);
            invariant(cycle.has_value(), "sourceless graph must contain a cycle");
            out = cycleResolution(out, graph, *cycle);
            if (observer) observer(out);
            if (trace)
                trace->sub("cycle-resolution", static_cast<std::int64_t>(inst.m) - out.allocatedCount(),
                           "plain cycle " + joinIds(cycle->vertices));
            graph = graphs::buildGraph(inst, out, GraphKind::Plain);
            srcs = graphs::sources(graph);
        }
        insertSorted(out.bundles[srcs.front()], g);
        if (observer) observer(out);
        if (trace) {
            trace->beginIteration();
            trace->step("ece", static_cast<std::int64_t>(inst.m) - out.allocatedCount(),
                        "good " + std::to_string(g) + " -> agent " + std::to_string(srcs.front()));
        }
    }
    return out;
}

PartialAllocation uncontestedCritical(const Instance& inst, const PartialAllocation& alloc,
                                      GraphKind kind, RunTrace* trace) {
    {
        auto alpha = verification::maxAlphaEfx(inst, alloc);
        require(alpha.atLeast(Value(2, 3)), "critical-good allocation requires a 2/3-EFX input");
        auto crit = verification::criticalGoods(inst, alloc);
        std::vector<int> owners(inst.m, -1);
        for (int i = 0; i < inst.n; ++i) {
            require(crit[i].size() <= 1, "critical-good allocation requires at most one critical good per agent");
            for (int g : crit[i]) {
                require(owners[g] < 0, "critical-good allocation requires uncontested critical goods");
                owners[g] = i;
            }
        }
    }

    PartialAllocation out = allCyclesResolution(inst, alloc, kind, std::nullopt, trace);
    for (int round = 0;; ++round) {
        invariant(round <= inst.m, "critical-good allocation failed to finish within one round per good");
        auto crit = verification::criticalGoods(inst, out);
        int agent = -1;
        for (int i = 0; i < inst.n && agent < 0; ++i)
            if (!crit[i].empty()) agent = i;
        if (agent < 0) break;
        const int g = crit[agent][0];

        graphs::EnvyGraph graph = graphs::buildGraph(inst, out, kind);
        auto path = graphs::pathFromSourceTo(graph, agent);
        invariant(path.has_value(), "agent with a critical good is unreachable from every source");
        const int s = path->vertices.front();
        const Bundle oldSource = out.bundles[s];

        Value augmented = bundleValue(inst, agent, oldSource) + inst.value(agent, g);
        if (augmented > bundleValue(inst, agent, out.bundles[agent])) {
            if (path->vertices.size() >= 2)
                for (auto& [v, bundle] : pathResolutionShifts(out, *path)) out.bundles[v] = std::move(bundle);
            Bundle target = oldSource;
            insertSorted(target, g);
            out.bundles[agent] = std::move(target);
            if (trace)
                trace->sub("critical-to-agent", static_cast<std::int64_t>(inst.m) - out.allocatedCount(),
                           "agent " + std::to_string(agent) + " takes source bundle + good " + std::to_string(g) +
                               " via path " + joinIds(path->vertices));
        } else {
            insertSorted(out.bundles[s], g);
            if (trace)
                trace->sub("critical-to-source", static_cast<std::int64_t>(inst.m) - out.allocatedCount(),
                           "good " + std::to_string(g) + " (critical for agent " + std::to_string(agent) +
                               ") -> source " + std::to_string(s));
        }
        out = allCyclesResolution(inst, out, kind, std::nullopt, trace);
    }
    return out;
}

} // namespace efx::subroutines
