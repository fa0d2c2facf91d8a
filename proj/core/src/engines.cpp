#include "efx/engines.hpp"

#include "efx/envy_graph.hpp"
#include "efx/errors.hpp"
#include "efx/rational.hpp"
#include "efx/subroutines.hpp"
#include "efx/verification.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace efx::engines {
namespace {

using graphs::CyclePath;
using graphs::EdgeColor;
using graphs::EnvyGraph;
using graphs::GraphKind;
using graphs::ThreeValueParams;

void insertSorted(Bundle& bundle, int good) {
    bundle.insert(std::lower_bound(bundle.begin(), bundle.end(), good), good);
}

std::string joinInts(const std::vector<int>& ids) {
    std::string out;
    for (std::size_t k = 0; k < ids.size(); ++k) {
        if (k) out += ',';
        out += std::to_string(ids[k]);
    }
    return out;
}

// Favorite pool good: highest value, lex-least on ties (pool is ascending).
int favoritePoolGood(const Instance& inst, int agent, const std::vector<int>& pool) {
    int best = pool.front();
    for (int g : pool)
        if (inst.value(agent, g) > inst.value(agent, best)) best = g;
    return best;
}

std::int64_t poolSizeOf(const Instance& inst, const PartialAllocation& alloc) {
    return static_cast<std::int64_t>(inst.m) - alloc.allocatedCount();
}

enum class StagedVariant { Base, Plus, Star };

const char* stagedName(StagedVariant v) {
    switch (v) {
    case StagedVariant::Base: return "staged engine";
    case StagedVariant::Plus: return "staged engine with handoff";
    default: return "staged engine with relaxed handoff";
    }
}

// The three staged engines share one loop: per iteration exactly one step
// fires, always the first applicable one, always on the lexicographically
// least witness.
EngineResult runStaged(const Instance& inst, const PartialAllocation& seed, StagedVariant variant,
                       const EngineOptions& opts) {
    inst.validate();
    seed.validate(inst);
    require(inst.m > inst.n, "staged engines need more goods than agents");
    for (const auto& b : seed.bundles)
        require(b.size() == 1 || b.size() == 2, "seed bundles must hold one or two goods");
    {
        auto pr = verification::checkProperties(inst, seed);
        require(pr.a && pr.b,
                "seed must satisfy the singleton-exactness and 2/3 envy properties"
                + (pr.firstViolation.empty() ? std::string() : " (" + pr.firstViolation + ")"));
    }

    const bool debug = opts.mode == EngineMode::Debug;
    const std::int64_t limit = EngineLimits::forStaged(inst).maxIterations;

    EngineResult res;
    res.alloc = seed;
    auto& x = res.alloc;
    auto& trace = res.trace;
    if (opts.recordAllocations) res.snapshots.push_back(x);

    // An agent's bundle never returns to a value it previously moved away
    // from; debug mode holds the engine to that.
    std::vector<std::set<Bundle>> seen;
    if (debug) {
        seen.resize(static_cast<std::size_t>(inst.n));
        for (int i = 0; i < inst.n; ++i) seen[static_cast<std::size_t>(i)].insert(x.bundles[i]);
    }

    bool halted = false;
    while (!halted) {
        const std::vector<int> pool = poolOf(inst, x);
        if (pool.empty()) break;
        trace.beginIteration();
        invariant(trace.currentIter <= limit,
                  std::string(stagedName(variant)) + " exceeded its iteration bound");

        std::vector<Bundle> prev;
        if (debug) prev = x.bundles;

        bool fired = false;
        auto finish = [&](const std::string& id, const std::string& detail) {
            trace.step(id, poolSizeOf(inst, x), detail);
            fired = true;
        };

        // Step 1: a singleton agent strictly prefers one pool good.
        for (int i = 0; i < inst.n && !fired; ++i) {
            if (x.bundles[i].size() != 1) continue;
            const Value own = bundleValue(inst, i, x.bundles[i]);
            for (int g : pool) {
                if (inst.value(i, g) > own) {
                    x.bundles[i] = {g};
                    finish("1", "agent " + std::to_string(i) + " swaps her good for pool good "
                                    + std::to_string(g));
                    break;
                }
            }
        }

        // Step 2: a pair agent prefers one pool good by more than 3/2.
        for (int i = 0; i < inst.n && !fired; ++i) {
            if (x.bundles[i].size() != 2) continue;
            const Value own = bundleValue(inst, i, x.bundles[i]);
            for (int g : pool) {
                if (2 * inst.value(i, g) > 3 * own) {
                    x.bundles[i] = {g};
                    finish("2", "agent " + std::to_string(i) + " swaps her pair for pool good "
                                    + std::to_string(g));
                    break;
                }
            }
        }

        // Step 3: a singleton agent prefers two pool goods by more than 2/3.
        for (int i = 0; i < inst.n && !fired; ++i) {
            if (x.bundles[i].size() != 1) continue;
            const Value own = bundleValue(inst, i, x.bundles[i]);
            for (std::size_t a = 0; a + 1 < pool.size() && !fired; ++a) {
                for (std::size_t b = a + 1; b < pool.size(); ++b) {
                    if (3 * (inst.value(i, pool[a]) + inst.value(i, pool[b])) > 2 * own) {
                        x.bundles[i] = {pool[a], pool[b]};
                        finish("3", "agent " + std::to_string(i) + " swaps her good for pool pair "
                                        + std::to_string(pool[a]) + "," + std::to_string(pool[b]));
                        break;
                    }
                }
            }
        }

        // Step 4: a pair agent upgrades one of her goods to a pool good.
        for (int i = 0; i < inst.n && !fired; ++i) {
            if (x.bundles[i].size() != 2) continue;
            for (int g : pool) {
                if (fired) break;
                for (int own : x.bundles[i]) {
                    if (inst.value(i, g) > inst.value(i, own)) {
                        Bundle nb = x.bundles[i];
                        nb.erase(std::find(nb.begin(), nb.end(), own));
                        insertSorted(nb, g);
                        x.bundles[i] = nb;
                        finish("4", "agent " + std::to_string(i) + " trades good "
                                        + std::to_string(own) + " for pool good " + std::to_string(g));
                        break;
                    }
                }
            }
        }

        // Step 5: resolve all reduced-graph cycles.
        if (!fired) {
            auto gr = graphs::buildGraph(inst, x, GraphKind::Reduced);
            if (graphs::findCycle(gr, false)) {
                x = subroutines::allCyclesResolution(inst, x, GraphKind::Reduced, std::nullopt, &trace);
                finish("5", "resolved all reduced-graph cycles");
            }
        }

        // Step 6: a singleton reduced-graph source takes her favorite pool good.
        if (!fired) {
            auto gr = graphs::buildGraph(inst, x, GraphKind::Reduced);
            for (int s : graphs::sources(gr)) {
                if (x.bundles[s].size() != 1) continue;
                const int g = favoritePoolGood(inst, s, pool);
                insertSorted(x.bundles[s], g);
                finish("6", "source " + std::to_string(s) + " adds her favorite pool good "
                                + std::to_string(g));
                break;
            }
        }

        // Step 7: exactly one pool good is wanted (by some singleton agent, at
        // more than 2/3 of her bundle); hand it off along a reduced-graph path.
        if (!fired) {
            int wanted = 0;
            for (int g : pool) {
                bool want = false;
                for (int i = 0; i < inst.n && !want; ++i)
                    if (x.bundles[i].size() == 1
                        && 3 * inst.value(i, g) > 2 * bundleValue(inst, i, x.bundles[i]))
                        want = true;
                if (want) ++wanted;
            }
            if (wanted == 1) {
                x = subroutines::singletonPool(inst, x, &trace);
                finish("7", "handed off the last wanted pool good");
            }
        }

        // Step 8: resolve all enhanced-graph cycles.
        if (!fired) {
            auto ge = graphs::buildGraph(inst, x, GraphKind::Enhanced);
            if (graphs::findCycle(ge, false)) {
                x = subroutines::allCyclesResolution(inst, x, GraphKind::Enhanced, std::nullopt, &trace);
                finish("8", "resolved all enhanced-graph cycles");
            }
        }

        // Step 8.5 / 8.5*: an agent prefers one pool good plus one good from a
        // reduced-graph source's pair; shift bundles along a path from that
        // source and give her those two goods. The starred variant also fires
        // at equality scaled by (4 - |X_i|)/2.
        if (!fired && variant != StagedVariant::Base) {
            auto gr = graphs::buildGraph(inst, x, GraphKind::Reduced);
            const auto srcs = graphs::sources(gr);
            for (int i = 0; i < inst.n && !fired; ++i) {
                const Value own = bundleValue(inst, i, x.bundles[i]);
                const int size = static_cast<int>(x.bundles[i].size());
                Value maxPool = inst.value(i, pool.front());
                for (int g : pool)
                    if (inst.value(i, g) > maxPool) maxPool = inst.value(i, g);
                for (int s : srcs) {
                    if (s == i) continue;
                    invariant(x.bundles[s].size() == 2, "handoff step expects pair sources");
                    const Value fromSource =
                        std::max(inst.value(i, x.bundles[s][0]), inst.value(i, x.bundles[s][1]));
                    const Value offer = fromSource + maxPool;
                    const bool applies = variant == StagedVariant::Plus
                                             ? own < offer
                                             : 2 * own <= (4 - size) * offer;
                    if (!applies) continue;
                    auto path = graphs::shortestPathAvoiding(gr, s, i);
                    if (!path) continue;
                    CyclePath walk{*path, false, false};
                    x = subroutines::pathResolutionStar(inst, x, gr, walk);
                    finish(variant == StagedVariant::Plus ? "8.5" : "8.5*",
                           "source " + std::to_string(s) + " hands two goods to agent "
                               + std::to_string(i) + " along path " + joinInts(*path));
                    break;
                }
            }
        }

        // Step 9: nothing applies; stop with a (possibly nonempty) pool.
        if (!fired) {
            halted = true;
            finish("9", "halt");
        }

        if (debug) {
            for (int i = 0; i < inst.n; ++i) {
                invariant(x.bundles[i].size() == 1 || x.bundles[i].size() == 2,
                          "staged engine left a bundle outside sizes 1..2");
                if (x.bundles[i] != prev[i]) {
                    auto& hist = seen[static_cast<std::size_t>(i)];
                    invariant(!hist.count(x.bundles[i]),
                              "agent " + std::to_string(i) + " returned to a previously held bundle");
                    hist.insert(x.bundles[i]);
                }
            }
            auto pr = verification::checkProperties(inst, x);
            invariant(pr.a && pr.b,
                      "iteration broke a maintained property: " + pr.firstViolation);
        }
        if (opts.recordAllocations) res.snapshots.push_back(x);
    }

    // Output contract, checked in both modes.
    for (const auto& b : x.bundles)
        invariant(b.size() == 1 || b.size() == 2, "output bundle outside sizes 1..2");
    {
        auto pr = verification::checkProperties(inst, x);
        invariant(pr.allAtoE(), "output violates a maintained property: " + pr.firstViolation);
    }
    if (!x.completeFor(inst)) {
        auto ge = graphs::buildGraph(inst, x, GraphKind::Enhanced);
        for (int s : graphs::sources(ge))
            invariant(x.bundles[s].size() == 2,
                      "incomplete output leaves an enhanced-graph source without two goods");
    }
    return res;
}

} // namespace

EngineLimits EngineLimits::forStaged(const Instance& inst) {
    const auto n = static_cast<std::int64_t>(inst.n);
    const auto m = static_cast<std::int64_t>(inst.m);
    return {n * m * m + 1};
}

EngineLimits EngineLimits::forThreeValue(const Instance& inst) {
    const auto n = static_cast<std::int64_t>(inst.n);
    const auto m = static_cast<std::int64_t>(inst.m);
    return {56 * m * n * n * n * n};
}

EngineResult run3PA(const Instance& inst, const PartialAllocation& seed, const EngineOptions& opts) {
    return runStaged(inst, seed, StagedVariant::Base, opts);
}

EngineResult run3PAPlus(const Instance& inst, const PartialAllocation& seed,
                        const EngineOptions& opts) {
    return runStaged(inst, seed, StagedVariant::Plus, opts);
}

EngineResult run3PAStar(const Instance& inst, const PartialAllocation& seed,
                        const EngineOptions& opts) {
    return runStaged(inst, seed, StagedVariant::Star, opts);
}

EngineResult run3PAPlusPlus(const ThreeValueInstance& tv, const PartialAllocation& seed,
                            const EngineOptions& opts) {
    tv.validate();
    require(tv.b > Value(1, 2), "three-value engine needs b > 1/2");
    require(tv.b + tv.c < Value(2, 3), "three-value engine needs b + c < 2/3");
    require(tv.c > 0, "three-value engine needs c > 0");
    require(tv.m > tv.n, "three-value engine needs more goods than agents");

    const Instance inst = tv.toInstance();
    seed.validate(inst);
    for (const auto& b : seed.bundles)
        require(b.size() == 1, "three-value engine seeds are all singletons");

    const ThreeValueParams params{tv.b, tv.c};
    const Value one(1);
    // Largest bundle any step ever builds: 1 + ceil((2/3 - b) / c).
    const BigInt kMax = 1 + ceilRational((Value(2, 3) - tv.b) / tv.c);

    const bool debug = opts.mode == EngineMode::Debug;
    const std::int64_t limit = EngineLimits::forThreeValue(inst).maxIterations;

    EngineResult res;
    res.alloc = seed;
    auto& x = res.alloc;
    auto& trace = res.trace;
    if (opts.recordAllocations) res.snapshots.push_back(x);

    std::vector<int> levels;
    verification::PotentialValue pot;
    if (debug) {
        for (int i = 0; i < tv.n; ++i)
            levels.push_back(verification::hierarchyLevel(bundleValue(inst, i, x.bundles[i]), tv.b));
        pot = verification::potential(tv, x);
    }

    bool halted = false;
    while (!halted) {
        const std::vector<int> pool = poolOf(inst, x);
        if (pool.empty()) break;
        trace.beginIteration();
        invariant(trace.currentIter <= limit, "three-value engine exceeded its iteration bound");

        bool fired = false;
        auto finish = [&](const std::string& id, const std::string& detail) {
            trace.step(id, poolSizeOf(inst, x), detail);
            fired = true;
        };

        // Step 1: resolve one jaundiced reduced-plus cycle.
        {
            auto grp = graphs::buildGraph(inst, x, GraphKind::ReducedPlus);
            if (auto cyc = graphs::findCycle(grp, true)) {
                x = subroutines::cycleResolution(x, grp, *cyc);
                finish("1", "resolved jaundiced cycle " + joinInts(cyc->vertices));
            }
        }

        // Step 2: a singleton agent strictly prefers one pool good.
        for (int i = 0; i < tv.n && !fired; ++i) {
            if (x.bundles[i].size() != 1) continue;
            const Value own = bundleValue(inst, i, x.bundles[i]);
            for (int g : pool) {
                if (inst.value(i, g) > own) {
                    x.bundles[i] = {g};
                    finish("2", "agent " + std::to_string(i) + " swaps her good for pool good "
                                    + std::to_string(g));
                    break;
                }
            }
        }

        // Step 3: a pair agent prefers one pool good by more than 3/2.
        for (int i = 0; i < tv.n && !fired; ++i) {
            if (x.bundles[i].size() != 2) continue;
            const Value own = bundleValue(inst, i, x.bundles[i]);
            for (int g : pool) {
                if (2 * inst.value(i, g) > 3 * own) {
                    x.bundles[i] = {g};
                    finish("3", "agent " + std::to_string(i) + " swaps her pair for pool good "
                                    + std::to_string(g));
                    break;
                }
            }
        }

        // Step 4: a jaundiced reduced-plus path ends at an agent valuing some
        // pool good exactly at her bundle; shift bundles forward and give her
        // that good. Any jaundiced path can be taken with its first edge
        // non-grey (drop the grey prefix), so scanning non-grey first edges
        // plus a shortest completion loses nothing.
        if (!fired) {
            auto grp = graphs::buildGraph(inst, x, GraphKind::ReducedPlus);
            for (int t = 0; t < tv.n && !fired; ++t) {
                const Value own = bundleValue(inst, t, x.bundles[t]);
                int take = -1;
                for (int g : pool) {
                    if (inst.value(t, g) == own) {
                        take = g;
                        break;
                    }
                }
                if (take < 0) continue;
                for (int u = 0; u < tv.n && !fired; ++u) {
                    if (u == t) continue;
                    for (int w : grp.successors(u)) {
                        if (grp.color(u, w) == EdgeColor::Grey) continue;
                        auto tail = graphs::shortestPathAvoiding(grp, w, t, u);
                        if (!tail) continue;
                        CyclePath walk;
                        walk.vertices.push_back(u);
                        walk.vertices.insert(walk.vertices.end(), tail->begin(), tail->end());
                        auto shifts = subroutines::pathResolutionShifts(x, walk);
                        for (auto& [v, b] : shifts) x.bundles[v] = b;
                        x.bundles[t] = {take};
                        finish("4", "shifted along path " + joinInts(walk.vertices) + "; agent "
                                        + std::to_string(t) + " takes equal-valued pool good "
                                        + std::to_string(take));
                        break;
                    }
                }
            }
        }

        // Step 5: round-robin over the secluded agents.
        if (!fired) {
            auto secluded = graphs::secludedSet(inst, x);
            if (!secluded.empty()) {
                x = subroutines::singleRoundRobin(inst, x, secluded);
                finish("5", "round robin over secluded agents " + joinInts(secluded));
            }
        }

        // Step 6: a singleton agent strictly prefers two pool goods; failing
        // that, a singleton reduced-plus source absorbs the last pool good at
        // exactly her bundle's value.
        if (!fired) {
            for (int i = 0; i < tv.n && !fired; ++i) {
                if (x.bundles[i].size() != 1) continue;
                const Value own = bundleValue(inst, i, x.bundles[i]);
                for (std::size_t a = 0; a + 1 < pool.size() && !fired; ++a) {
                    for (std::size_t b = a + 1; b < pool.size(); ++b) {
                        if (inst.value(i, pool[a]) + inst.value(i, pool[b]) > own) {
                            x.bundles[i] = {pool[a], pool[b]};
                            finish("6", "agent " + std::to_string(i) + " takes pool pair "
                                            + std::to_string(pool[a]) + ","
                                            + std::to_string(pool[b]));
                            break;
                        }
                    }
                }
            }
            if (!fired && pool.size() == 1) {
                const int g = pool.front();
                auto grp = graphs::buildGraph(inst, x, GraphKind::ReducedPlus);
                for (int s : graphs::sources(grp)) {
                    if (x.bundles[s].size() == 1
                        && inst.value(s, g) == bundleValue(inst, s, x.bundles[s])) {
                        insertSorted(x.bundles[s], g);
                        finish("6", "source " + std::to_string(s)
                                        + " absorbs the last pool good " + std::to_string(g));
                        break;
                    }
                }
            }
        }

        // Step 7: an agent keeps only her best good and one pool good worth
        // more than the rest of her bundle.
        for (int i = 0; i < tv.n && !fired; ++i) {
            if (x.bundles[i].size() < 2) continue;
            int top = x.bundles[i].front();
            for (int g : x.bundles[i])
                if (inst.value(i, g) > inst.value(i, top)) top = g;
            const Value rest = bundleValue(inst, i, x.bundles[i]) - inst.value(i, top);
            for (int g : pool) {
                if (inst.value(i, g) > rest) {
                    Bundle nb{top};
                    insertSorted(nb, g);
                    x.bundles[i] = nb;
                    finish("7", "agent " + std::to_string(i) + " keeps good " + std::to_string(top)
                                    + " and takes pool good " + std::to_string(g));
                    break;
                }
            }
        }

        // Step 8: an agent holding exactly three b-goods and otherwise
        // c-goods trades down to one b-good plus a 1-good from the pool.
        for (int i = 0; i < tv.n && !fired; ++i) {
            int bCount = 0, oneCount = 0;
            int firstB = -1;
            for (int g : x.bundles[i]) {
                const Value& v = inst.value(i, g);
                if (v == tv.b) {
                    if (firstB < 0) firstB = g;
                    ++bCount;
                } else if (v == one) {
                    ++oneCount;
                }
            }
            if (bCount != 3 || oneCount != 0) continue;
            for (int g : pool) {
                if (inst.value(i, g) == one) {
                    Bundle nb{firstB};
                    insertSorted(nb, g);
                    x.bundles[i] = nb;
                    finish("8", "agent " + std::to_string(i) + " trades three b-goods for good "
                                    + std::to_string(firstB) + " plus pool good " + std::to_string(g));
                    break;
                }
            }
        }

        // Step 9: resolve one jaundiced enhanced-plus cycle; the receiver
        // whose predecessor-in-cycle was a reduced-plus source rebuilds a
        // two-good bundle (one b-good kept, one b-good from the pool), and the
        // other such receivers round-robin.
        if (!fired) {
            auto gep = graphs::buildGraph(inst, x, GraphKind::EnhancedPlus, params);
            if (auto cyc = graphs::findCycle(gep, true)) {
                auto grp = graphs::buildGraph(inst, x, GraphKind::ReducedPlus);
                const auto grpSrcs = graphs::sources(grp);
                auto isGrpSource = [&](int v) {
                    return std::binary_search(grpSrcs.begin(), grpSrcs.end(), v);
                };
                const auto& cv = cyc->vertices;
                const int len = static_cast<int>(cv.size());
                std::vector<int> handoff;
                for (int k = 0; k < len; ++k)
                    if (isGrpSource(cv[(k + 1) % len])) handoff.push_back(cv[k]);
                std::sort(handoff.begin(), handoff.end());
                invariant(!handoff.empty(),
                          "jaundiced enhanced-plus cycle without a reduced-plus source on it");
                const int iStar = handoff.front();
                x = subroutines::cycleResolution(x, gep, *cyc);
                int keep = -1;
                for (int g : x.bundles[iStar]) {
                    if (inst.value(iStar, g) == tv.b) {
                        keep = g;
                        break;
                    }
                }
                invariant(keep >= 0, "handed-over source bundle lacks a b-good");
                int fresh = -1;
                for (int g : pool) {
                    if (inst.value(iStar, g) == tv.b) {
                        fresh = g;
                        break;
                    }
                }
                invariant(fresh >= 0, "pool lacks the b-good the enhanced-plus edge promised");
                Bundle nb{keep};
                insertSorted(nb, fresh);
                x.bundles[iStar] = nb;
                std::vector<int> rest(handoff.begin() + 1, handoff.end());
                x = subroutines::singleRoundRobin(inst, x, rest);
                finish("9", "resolved jaundiced cycle " + joinInts(cv) + "; agent "
                                + std::to_string(iStar) + " keeps b-goods " + std::to_string(keep)
                                + "," + std::to_string(fresh)
                                + (rest.empty() ? std::string()
                                                : "; round robin over " + joinInts(rest)));
            }
        }

        // Step 10: with k_max >= 4, resolve one jaundiced doubly-enhanced
        // cycle or self-loop; the receiver fed by an enhanced-plus source
        // keeps its three b-goods plus one pool b-good, and receivers fed by
        // reduced-plus sources over genuine enhanced-plus edges round-robin if
        // left with singletons.
        if (!fired && kMax >= 4) {
            auto gde = graphs::buildGraph(inst, x, GraphKind::DoublyEnhanced, params);
            if (auto cyc = graphs::findCycle(gde, true)) {
                auto gep = graphs::buildGraph(inst, x, GraphKind::EnhancedPlus, params);
                const auto gepSrcs = graphs::sources(gep);
                auto isGepSource = [&](int v) {
                    return std::binary_search(gepSrcs.begin(), gepSrcs.end(), v);
                };
                auto grp = graphs::buildGraph(inst, x, GraphKind::ReducedPlus);
                const auto grpSrcs = graphs::sources(grp);
                auto isGrpSource = [&](int v) {
                    return std::binary_search(grpSrcs.begin(), grpSrcs.end(), v);
                };
                const auto& cv = cyc->vertices;
                const int len = static_cast<int>(cv.size());
                int iStar = -1;
                std::vector<int> fed;
                for (int k = 0; k < len; ++k) {
                    const int i = cv[k], s = cv[(k + 1) % len];
                    if (isGepSource(s) && (iStar < 0 || i < iStar)) iStar = i;
                    if (gep.hasEdge(i, s) && isGrpSource(s)) fed.push_back(i);
                }
                invariant(iStar >= 0,
                          "jaundiced doubly-enhanced cycle without an enhanced-plus source on it");
                x = subroutines::cycleResolution(x, gde, *cyc);
                Bundle bGoods;
                for (int g : x.bundles[iStar])
                    if (inst.value(iStar, g) == tv.b) bGoods.push_back(g);
                invariant(bGoods.size() == 3, "handed-over source bundle must hold three b-goods");
                int fresh = -1;
                for (int g : pool) {
                    if (inst.value(iStar, g) == tv.b) {
                        fresh = g;
                        break;
                    }
                }
                invariant(fresh >= 0, "pool lacks the b-good the doubly-enhanced edge promised");
                insertSorted(bGoods, fresh);
                x.bundles[iStar] = bGoods;
                std::vector<int> rr;
                for (int i : fed)
                    if (x.bundles[i].size() == 1) rr.push_back(i);
                std::sort(rr.begin(), rr.end());
                x = subroutines::singleRoundRobin(inst, x, rr);
                finish("10", "resolved jaundiced cycle " + joinInts(cv) + "; agent "
                                 + std::to_string(iStar) + " holds four b-goods"
                                 + (rr.empty() ? std::string()
                                               : "; round robin over " + joinInts(rr)));
            }
        }

        // Steps 11 and 12: some agent still has a critical good. Park it with
        // a doubly-enhanced source that has room; if every source is full,
        // route the nearest full source's bundle down a path to the agent,
        // trading the source's lex-least good for the critical one.
        if (!fired) {
            const auto crit = verification::criticalGoods(inst, x);
            int agent = -1;
            for (int i = 0; i < tv.n; ++i) {
                if (!crit[i].empty()) {
                    agent = i;
                    break;
                }
            }
            if (agent >= 0) {
                const int g = crit[agent].front();
                auto gde = graphs::buildGraph(inst, x, GraphKind::DoublyEnhanced, params);
                for (int s : graphs::sources(gde)) {
                    if (BigInt(x.bundles[s].size()) < kMax) {
                        insertSorted(x.bundles[s], g);
                        finish("11", "critical good " + std::to_string(g) + " of agent "
                                         + std::to_string(agent) + " parked with source "
                                         + std::to_string(s));
                        break;
                    }
                }
                if (!fired) {
                    // Every doubly-enhanced source is at k_max.
                    auto path = graphs::pathFromSourceTo(gde, agent);
                    invariant(path.has_value(),
                              "no doubly-enhanced source reaches the critical agent");
                    const auto& pv = path->vertices;
                    const int src = pv.front();
                    const Bundle origSource = x.bundles[src];
                    const int dropped = origSource.front();
                    if (pv.size() >= 2) {
                        auto shifts = subroutines::pathResolutionShifts(x, *path);
                        for (auto& [v, b] : shifts) x.bundles[v] = b;
                    }
                    Bundle nb(origSource.begin() + 1, origSource.end());
                    insertSorted(nb, g);
                    x.bundles[agent] = nb;
                    finish("12", "agent " + std::to_string(agent) + " takes source "
                                     + std::to_string(src) + "'s bundle via path " + joinInts(pv)
                                     + ", swapping good " + std::to_string(dropped)
                                     + " for critical good " + std::to_string(g));
                }
            }
        }

        // Step 13: nothing applies; stop with a (possibly nonempty) pool.
        if (!fired) {
            halted = true;
            finish("13", "halt");
        }

        if (debug) {
            for (int i = 0; i < tv.n; ++i) {
                const BigInt size(x.bundles[i].size());
                invariant(size >= 1 && size <= kMax, "bundle size left the 1..k_max range");
            }
            auto pr = verification::checkProperties(inst, x);
            invariant(pr.a && pr.b, "iteration broke a maintained property: " + pr.firstViolation);
            // F1/F2 are not re-checked here: they are established by the halt
            // condition (no step can fire), not maintained along the way.
            for (int i = 0; i < tv.n; ++i) {
                const int level =
                    verification::hierarchyLevel(bundleValue(inst, i, x.bundles[i]), tv.b);
                invariant(level <= levels[static_cast<std::size_t>(i)],
                          "agent " + std::to_string(i) + " fell in the hierarchy");
                levels[static_cast<std::size_t>(i)] = level;
            }
            auto np = verification::potential(tv, x);
            invariant(!(np < pot), "potential decreased across an iteration");
            pot = np;
        }
        if (opts.recordAllocations) res.snapshots.push_back(x);
    }

    // Output contract, checked in both modes.
    for (const auto& b : x.bundles) {
        const BigInt size(b.size());
        invariant(size >= 1 && size <= kMax, "output bundle outside sizes 1..k_max");
    }
    {
        auto pr = verification::checkProperties(inst, x);
        invariant(pr.a && pr.b, "output violates a maintained property: " + pr.firstViolation);
    }
    if (!x.completeFor(inst)) {
        auto fr = verification::checkPropertiesF(tv, x);
        invariant(*fr.f1 && *fr.f2, "output violates a band property: " + fr.firstViolation);
    }
    {
        const auto crit = verification::criticalGoods(inst, x);
        for (int i = 0; i < tv.n; ++i)
            invariant(crit[i].empty(), "output leaves agent " + std::to_string(i)
                                           + " with a critical good");
        invariant(verification::maxAlphaEfx(inst, x).atLeast(Value(2, 3)),
                  "output is not 2/3 envy-free up to any good");
    }
    return res;
}

} // namespace efx::engines
