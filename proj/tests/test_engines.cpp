#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "efx/engines.hpp"
#include "efx/envy_graph.hpp"
#include "efx/generators.hpp"
#include "efx/model.hpp"
#include "efx/verification.hpp"

using namespace efx;
using engines::EngineMode;
using engines::EngineOptions;

namespace {

Instance uniform(int n, int m, const Value& v) {
    Instance inst;
    inst.n = n;
    inst.m = m;
    inst.values.assign(static_cast<std::size_t>(n), std::vector<Value>(static_cast<std::size_t>(m), v));
    return inst;
}

EngineOptions debugOpts() {
    EngineOptions o;
    o.mode = EngineMode::Debug;
    return o;
}

} // namespace

TEST_CASE("3PA hand-traced: lone agent takes the pool good via step 6") {
    const Instance inst = uniform(1, 2, Value(1));
    const auto res = engines::run3PA(inst, seedAllocation(inst), debugOpts());
    CHECK(res.alloc.bundles == std::vector<Bundle>{{0, 1}});
    CHECK(res.trace.stepCount() == 1);
    REQUIRE_FALSE(res.trace.events.empty());
    CHECK(res.trace.events.back().op == "6");
}

TEST_CASE("3PA hand-traced: two agents, three unit goods") {
    const Instance inst = uniform(2, 3, Value(1));
    const auto res = engines::run3PA(inst, seedAllocation(inst), debugOpts());
    CHECK(res.alloc.bundles == std::vector<Bundle>{{0, 2}, {1}});
    CHECK(res.trace.stepCount() == 1);
}

TEST_CASE("staged engines validate their seeds") {
    const Instance tight = uniform(2, 2, Value(1));
    CHECK_THROWS_AS(engines::run3PA(tight, seedAllocation(uniform(2, 3, Value(1)))), InputError);

    const Instance inst = uniform(2, 5, Value(1));
    PartialAllocation bigBundle;
    bigBundle.bundles = {{0, 1, 2}, {3}};
    CHECK_THROWS_AS(engines::run3PA(inst, bigBundle), InputError);

    PartialAllocation emptyBundle;
    emptyBundle.bundles = {{}, {0}};
    CHECK_THROWS_AS(engines::run3PA(inst, emptyBundle), InputError);

    // A seed violating property (a): the singleton agent 0 envies agent 1's
    // pair even after a removal.
    Instance skew = uniform(2, 4, Value(1));
    skew.values[0][0] = Value(0);
    PartialAllocation badSeed;
    badSeed.bundles = {{0}, {1, 2}};
    CHECK_THROWS_AS(engines::run3PA(skew, badSeed), InputError);
}

TEST_CASE("fast and debug modes produce identical allocations") {
    gen::SplitMix64 rng(99);
    for (int round = 0; round < 25; ++round) {
        gen::GenSpec spec;
        spec.seed = rng.next();
        spec.family = gen::Family::Additive;
        spec.n = 2 + static_cast<int>(rng.below(4));
        spec.m = spec.n + 1 + static_cast<int>(rng.below(8));
        const auto inst = gen::genAdditive(spec);
        const auto seed = seedAllocation(inst);
        EngineOptions fast;
        const auto a = engines::run3PA(inst, seed, fast);
        const auto b = engines::run3PA(inst, seed, debugOpts());
        CHECK(a.alloc == b.alloc);
        const auto ap = engines::run3PAPlus(inst, seed, fast);
        const auto bp = engines::run3PAPlus(inst, seed, debugOpts());
        CHECK(ap.alloc == bp.alloc);
        const auto as = engines::run3PAStar(inst, seed, fast);
        const auto bs = engines::run3PAStar(inst, seed, debugOpts());
        CHECK(as.alloc == bs.alloc);
    }
}

TEST_CASE("3PA postconditions: sizes, properties, and two-good sources on a stuck pool") {
    gen::SplitMix64 rng(1234);
    int incomplete = 0;
    for (int round = 0; round < 60; ++round) {
        gen::GenSpec spec;
        spec.seed = rng.next();
        spec.family = gen::Family::Additive;
        spec.n = 2 + static_cast<int>(rng.below(5));
        spec.m = spec.n + 1 + static_cast<int>(rng.below(9));
        const auto inst = gen::genAdditive(spec);
        const auto res = engines::run3PA(inst, seedAllocation(inst));
        res.alloc.validate(inst);
        for (const auto& b : res.alloc.bundles) {
            CHECK(b.size() >= 1);
            CHECK(b.size() <= 2);
        }
        CHECK(verification::checkProperties(inst, res.alloc).allAtoE());
        CHECK(res.trace.stepCount() <=
              static_cast<std::int64_t>(inst.n) * inst.m * inst.m + 1);
        if (!res.alloc.completeFor(inst)) {
            ++incomplete;
            const auto ge = graphs::buildGraph(inst, res.alloc, graphs::GraphKind::Enhanced);
            for (int s : graphs::sources(ge))
                CHECK(res.alloc.bundles[static_cast<std::size_t>(s)].size() == 2);
        }
    }
    CHECK(incomplete > 0); // the campaign must actually exercise the stuck case
}

TEST_CASE("snapshots record the seed and every iteration") {
    const Instance inst = uniform(2, 6, Value(1));
    EngineOptions opts;
    opts.recordAllocations = true;
    const auto res = engines::run3PA(inst, seedAllocation(inst), opts);
    REQUIRE_FALSE(res.snapshots.empty());
    CHECK(res.snapshots.front() == seedAllocation(inst));
    CHECK(res.snapshots.back() == res.alloc);
    CHECK(static_cast<std::int64_t>(res.snapshots.size()) == res.trace.stepCount() + 1);
}

TEST_CASE("trace structure: one step per iteration, iterations strictly increasing") {
    ThreeValueInstance tv;
    tv.n = 3;
    tv.m = 8;
    tv.b = Value(11, 20);
    tv.c = Value(1, 20);
    tv.labels = {"abcabcab", "bcabcabc", "cabcabca"};
    const auto res = engines::run3PAPlusPlus(tv, seedAllocation(tv.toInstance()), debugOpts());
    std::int64_t lastStepIter = 0;
    std::int64_t pendingSubIter = -1;
    for (const auto& e : res.trace.events) {
        if (e.isStep) {
            CHECK(e.iter > lastStepIter);
            if (pendingSubIter != -1) CHECK(e.iter == pendingSubIter);
            lastStepIter = e.iter;
            pendingSubIter = -1;
        } else {
            pendingSubIter = e.iter;
        }
    }
    CHECK(pendingSubIter == -1); // no trailing sub-events without their step
}

TEST_CASE("3PA++ validates its preconditions") {
    ThreeValueInstance tv;
    tv.n = 2;
    tv.m = 4;
    tv.b = Value(11, 20);
    tv.c = Value(1, 20);
    tv.labels = {"abcb", "bacb"};
    const auto seed = seedAllocation(tv.toInstance());

    ThreeValueInstance lowB = tv;
    lowB.b = Value(1, 2);
    CHECK_THROWS_AS(engines::run3PAPlusPlus(lowB, seed), InputError);

    ThreeValueInstance bigSum = tv;
    bigSum.b = Value(3, 5);
    bigSum.c = Value(1, 10);
    CHECK_THROWS_AS(engines::run3PAPlusPlus(bigSum, seed), InputError);

    ThreeValueInstance zeroC = tv;
    zeroC.c = Value(0);
    CHECK_THROWS_AS(engines::run3PAPlusPlus(zeroC, seed), InputError);

    PartialAllocation pairSeed;
    pairSeed.bundles = {{0, 1}, {2}};
    CHECK_THROWS_AS(engines::run3PAPlusPlus(tv, pairSeed), InputError);

    ThreeValueInstance tight = tv;
    tight.m = 2;
    tight.labels = {"ab", "ba"};
    PartialAllocation tightSeed;
    tightSeed.bundles = {{0}, {1}};
    CHECK_THROWS_AS(engines::run3PAPlusPlus(tight, tightSeed), InputError);
}

TEST_CASE("3PA++ output contract on seeded Case3 instances") {
    gen::SplitMix64 rng(31337);
    std::vector<Value> noZeroGrid;
    for (int k = 1; k <= 100; ++k) noZeroGrid.emplace_back(k, 100);
    for (int round = 0; round < 40; ++round) {
        gen::GenSpec spec;
        spec.seed = rng.next();
        spec.family = gen::Family::ThreeValue;
        spec.tvCase = allocators::ThreeValueCase::Case3;
        spec.grid = noZeroGrid;
        spec.n = 2 + static_cast<int>(rng.below(4));
        spec.m = spec.n + 1 + static_cast<int>(rng.below(7));
        const auto tv = gen::genThreeValue(spec);
        REQUIRE(tv.c > 0);
        const Instance inst = tv.toInstance();
        const auto fast = engines::run3PAPlusPlus(tv, seedAllocation(inst));
        const auto dbg = engines::run3PAPlusPlus(tv, seedAllocation(inst), debugOpts());
        CHECK(fast.alloc == dbg.alloc);
        fast.alloc.validate(inst);
        for (const auto& list : verification::criticalGoods(inst, fast.alloc))
            CHECK(list.empty());
        CHECK(verification::maxAlphaEfx(inst, fast.alloc).atLeast(Value(2, 3)));
        CHECK(fast.trace.stepCount() <=
              56ll * inst.m * inst.n * inst.n * inst.n * inst.n);
    }
}
