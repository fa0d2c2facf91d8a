#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "efx/envy_graph.hpp"
#include "efx/generators.hpp"
#include "efx/model.hpp"
#include "efx/subroutines.hpp"
#include "efx/verification.hpp"

#include <vector>

using namespace efx;
using namespace efx::graphs;
namespace sub = efx::subroutines;

namespace {

// Three agents in a plain-envy 3-cycle 0 -> 1 -> 2 -> 0.
Instance ringInstance() {
    Instance inst;
    inst.n = 3;
    inst.m = 3;
    inst.values = {{Value(0), Value(1), Value(0)},
                   {Value(0), Value(0), Value(1)},
                   {Value(1), Value(0), Value(0)}};
    return inst;
}

PartialAllocation identityAlloc(int n) {
    PartialAllocation x;
    for (int i = 0; i < n; ++i) x.bundles.push_back({i});
    return x;
}

} // namespace

TEST_CASE("cycleResolution shifts bundles along the cycle") {
    const Instance inst = ringInstance();
    const auto x = identityAlloc(3);
    const auto g = buildGraph(inst, x, GraphKind::Plain);
    const auto cyc = findCycle(g, false);
    REQUIRE(cyc.has_value());
    CHECK(cyc->vertices == std::vector<int>{0, 1, 2});
    const auto y = sub::cycleResolution(x, g, *cyc);
    CHECK(y.bundles == std::vector<Bundle>{{1}, {2}, {0}});
}

TEST_CASE("cycleResolution on a self-loop is the identity") {
    EnvyGraph g;
    g.n = 2;
    g.adj.assign(4, EdgeColor::None);
    g.adj[1 * 2 + 1] = EdgeColor::De;
    CyclePath loop;
    loop.vertices = {1};
    loop.isCycle = true;
    loop.jaundiced = true;
    PartialAllocation x;
    x.bundles = {{0}, {1, 2}};
    CHECK(sub::cycleResolution(x, g, loop) == x);
}

TEST_CASE("allCyclesResolution leaves the graph acyclic") {
    const Instance inst = ringInstance();
    const auto y = sub::allCyclesResolution(inst, identityAlloc(3), GraphKind::Plain);
    CHECK(y.bundles == std::vector<Bundle>{{1}, {2}, {0}});
    CHECK_FALSE(findCycle(buildGraph(inst, y, GraphKind::Plain), false).has_value());

    // Acyclic input comes back unchanged.
    CHECK(sub::allCyclesResolution(inst, y, GraphKind::Plain) == y);
}

TEST_CASE("allCyclesResolution with requireJaundiced ignores all-grey cycles") {
    ThreeValueInstance tv;
    tv.n = 2;
    tv.m = 3;
    tv.b = Value(11, 20);
    tv.c = Value(1, 20);
    tv.labels = {"aac", "aac"};
    const Instance inst = tv.toInstance();
    const auto x = identityAlloc(2);
    const ThreeValueParams params{tv.b, tv.c};
    // Mutual grey envy: a cycle, but not a jaundiced one.
    REQUIRE(findCycle(buildGraph(inst, x, GraphKind::ReducedPlus, params), false).has_value());
    const auto y = sub::allCyclesResolution(inst, x, GraphKind::ReducedPlus, params, nullptr, true);
    CHECK(y == x);
}

TEST_CASE("pathResolutionShifts moves bundles toward the front") {
    PartialAllocation x;
    x.bundles = {{0}, {1}, {2}};
    CyclePath path;
    path.vertices = {0, 1, 2};
    const auto shifts = sub::pathResolutionShifts(x, path);
    REQUIRE(shifts.size() == 2);
    CHECK(shifts.at(0) == Bundle{1});
    CHECK(shifts.at(1) == Bundle{2});
    CHECK(shifts.count(2) == 0);

    CyclePath single;
    single.vertices = {2};
    CHECK_THROWS_AS(sub::pathResolutionShifts(x, single), InputError);
}

TEST_CASE("pathResolutionStar hands the terminal its best pair") {
    Instance inst;
    inst.n = 2;
    inst.m = 5;
    inst.values = {{Value(1, 8), Value(1, 8), Value(1), Value(0), Value(0)},
                   {Value(0), Value(0), Value(5), Value(2), Value(2)}};
    PartialAllocation x;
    x.bundles = {{0, 1}, {2}};
    const auto gr = buildGraph(inst, x, GraphKind::Reduced);
    REQUIRE(gr.hasEdge(0, 1));
    CyclePath path;
    path.vertices = {0, 1};
    const auto y = sub::pathResolutionStar(inst, x, gr, path);
    // Terminal 1 takes {lex-argmax of old X_0, lex-argmax of pool} = {0, 3};
    // vertex 0 inherits old X_1; the unused good 1 returns to the pool.
    CHECK(y.bundles == std::vector<Bundle>{{2}, {0, 3}});
    CHECK(poolOf(inst, y) == std::vector<int>{1, 4});

    PartialAllocation badSource;
    badSource.bundles = {{0}, {2}};
    CyclePath p2;
    p2.vertices = {0, 1};
    CHECK_THROWS_AS(
        sub::pathResolutionStar(inst, badSource, buildGraph(inst, badSource, GraphKind::Reduced), p2),
        InputError);

    Instance noPool = inst;
    noPool.m = 3;
    for (auto& row : noPool.values) row.resize(3);
    PartialAllocation full;
    full.bundles = {{0, 1}, {2}};
    CHECK_THROWS_AS(
        sub::pathResolutionStar(noPool, full, buildGraph(noPool, full, GraphKind::Reduced), path),
        InputError);
}

TEST_CASE("singleRoundRobin serves ascending agents their favorites") {
    Instance inst;
    inst.n = 3;
    inst.m = 5;
    inst.values = {{Value(1), Value(1), Value(1), Value(1), Value(2)},
                   {Value(1), Value(1), Value(1), Value(1), Value(1)},
                   {Value(1), Value(1), Value(1), Value(1), Value(1)}};
    const auto x = identityAlloc(3);
    const auto y = sub::singleRoundRobin(inst, x, {0, 1, 2});
    // Agent 0 grabs good 4 (worth 2), agent 1 lex-breaks to good 3, agent 2
    // finds the pool empty.
    CHECK(y.bundles == std::vector<Bundle>{{0, 4}, {1, 3}, {2}});

    // A subset of agents works the same way.
    const auto z = sub::singleRoundRobin(inst, x, {1});
    CHECK(z.bundles == std::vector<Bundle>{{0}, {1, 3}, {2}});
}

TEST_CASE("singletonPool routes the last wanted good through a source path") {
    Instance inst;
    inst.n = 2;
    inst.m = 4;
    inst.values = {{Value(1, 4), Value(1, 4), Value(1), Value(0)},
                   {Value(0), Value(0), Value(1), Value(1)}};
    PartialAllocation x;
    x.bundles = {{0, 1}, {2}};
    // Pool = {3}: agent 1 is a singleton with 3*v_1(3) > 2*v_1(X_1) and has an
    // in-edge from the reduced-graph source 0.
    const auto y = sub::singletonPool(inst, x);
    CHECK(y.bundles == std::vector<Bundle>{{2}, {0, 3}});
    CHECK(poolOf(inst, y) == std::vector<int>{1});

    PartialAllocation bigPool;
    bigPool.bundles = {{0}, {2}};
    CHECK_THROWS_AS(sub::singletonPool(inst, bigPool), InternalInvariantError);
}

TEST_CASE("envyCycleElimination completes deterministically and monotonically") {
    Instance inst;
    inst.n = 2;
    inst.m = 3;
    inst.values = {{Value(0), Value(1), Value(1)}, {Value(1), Value(0), Value(1)}};
    PartialAllocation x;
    x.bundles = {{0}, {1}};
    std::vector<Value> prev(2, Value(-1));
    bool monotone = true;
    int observed = 0;
    const auto y = sub::envyCycleElimination(inst, x, nullptr, [&](const PartialAllocation& now) {
        ++observed;
        for (int i = 0; i < 2; ++i) {
            const Value v = bundleValue(inst, i, now.bundles[i]);
            if (v < prev[i]) monotone = false;
            prev[i] = v;
        }
    });
    // The mutual-envy 2-cycle resolves first (swap), then good 2 goes to the
    // lexicographically least source.
    CHECK(y.bundles == std::vector<Bundle>{{1, 2}, {0}});
    CHECK(monotone);
    CHECK(observed >= 2);
    CHECK(y.completeFor(inst));

    // A complete allocation is returned untouched.
    CHECK(sub::envyCycleElimination(inst, y) == y);
}

TEST_CASE("envyCycleElimination records trace steps per good") {
    Instance inst;
    inst.n = 2;
    inst.m = 4;
    inst.values.assign(2, std::vector<Value>(4, Value(1)));
    PartialAllocation x;
    x.bundles = {{0}, {1}};
    RunTrace trace;
    sub::envyCycleElimination(inst, x, &trace);
    int eceSteps = 0;
    for (const auto& e : trace.events)
        if (e.isStep && e.op == "ece") ++eceSteps;
    CHECK(eceSteps == 2); // goods 2 and 3
}

TEST_CASE("uncontestedCritical clears criticals and rejects bad inputs") {
    Instance inst;
    inst.n = 2;
    inst.m = 3;
    inst.values = {{Value(1), Value(0), Value(1)}, {Value(0), Value(1), Value(1, 4)}};
    PartialAllocation x;
    x.bundles = {{0}, {1}};
    const auto y = sub::uncontestedCritical(inst, x);
    y.validate(inst);
    for (const auto& list : verification::criticalGoods(inst, y)) CHECK(list.empty());
    CHECK(verification::maxAlphaEfx(inst, y).atLeast(Value(2, 3)));

    // Contested: good 2 critical for both agents.
    Instance contested = inst;
    contested.values[1][2] = Value(1);
    CHECK_THROWS_AS(sub::uncontestedCritical(contested, x), InputError);

    // Two criticals for one agent.
    Instance doubled;
    doubled.n = 2;
    doubled.m = 4;
    doubled.values = {{Value(1), Value(0), Value(1), Value(1)},
                      {Value(0), Value(1), Value(0), Value(0)}};
    CHECK_THROWS_AS(sub::uncontestedCritical(doubled, x), InputError);

    // Input that is not 2/3-EFX.
    Instance unfair;
    unfair.n = 2;
    unfair.m = 4;
    unfair.values = {{Value(0), Value(5), Value(5), Value(0)},
                     {Value(0), Value(1), Value(1), Value(0)}};
    PartialAllocation z;
    z.bundles = {{0}, {1, 2}};
    CHECK_THROWS_AS(sub::uncontestedCritical(unfair, z), InputError);
}
