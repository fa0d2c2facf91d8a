#include "efx/allocators.hpp"

#include "efx/envy_graph.hpp"
#include "efx/errors.hpp"
#include "efx/rational.hpp"
#include "efx/subroutines.hpp"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

namespace efx::allocators {
namespace {

using engines::EngineMode;
using engines::EngineOptions;

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

std::int64_t poolSizeOf(const Instance& inst, const PartialAllocation& alloc) {
    return static_cast<std::int64_t>(inst.m) - alloc.allocatedCount();
}

// m <= n: one lex-assigned good per agent is exact EFX (every bundle holds at
// most one good, so envy up to any good is impossible).
PartialAllocation trivialComplete(const Instance& inst) {
    PartialAllocation x;
    x.bundles.assign(static_cast<std::size_t>(inst.n), {});
    for (int g = 0; g < inst.m; ++g) x.bundles[static_cast<std::size_t>(g)].push_back(g);
    return x;
}

void certify(const Instance& inst, AllocatorResult& res) {
    res.certificate = verification::fullReport(inst, res.alloc);
    invariant(res.certificate.complete, "allocator output is incomplete");
    invariant(res.certificate.alpha.atLeast(Value(2, 3)), "allocator output falls below 2/3-EFX");
}

void certify(const ThreeValueInstance& tv, AllocatorResult& res) {
    res.certificate = verification::fullReport(tv, res.alloc);
    invariant(res.certificate.complete, "allocator output is incomplete");
    invariant(res.certificate.alpha.atLeast(Value(2, 3)), "allocator output falls below 2/3-EFX");
}

// Pool goods critical for >= 2 agents, plus the per-good owner counts.
std::vector<int> contestedCriticals(const Instance& inst, const PartialAllocation& alloc,
                                    std::vector<int>& owners) {
    const auto crit = verification::criticalGoods(inst, alloc);
    owners.assign(static_cast<std::size_t>(inst.m), 0);
    for (const auto& list : crit)
        for (int g : list) ++owners[static_cast<std::size_t>(g)];
    std::vector<int> out;
    for (int g = 0; g < inst.m; ++g)
        if (owners[static_cast<std::size_t>(g)] >= 2) out.push_back(g);
    return out;
}

// The two staged pipelines finish identically: allocate remaining (now
// uncontested) critical goods, then complete the allocation. A precondition
// rejection from the critical pass means the pipeline fed it a state the
// engine contract rules out, so it is re-raised as an internal failure.
void finishStaged(const Instance& inst, AllocatorResult& res) {
    res.trace.beginIteration();
    try {
        res.alloc = subroutines::uncontestedCritical(inst, res.alloc, graphs::GraphKind::Plain,
                                                     &res.trace);
    } catch (const InputError& e) {
        throw InternalInvariantError(std::string("critical-good pass rejected pipeline state: ")
                                     + e.what());
    }
    res.trace.step("uncontested-critical", poolSizeOf(inst, res.alloc),
                   "allocated all remaining critical goods");
    res.alloc = subroutines::envyCycleElimination(inst, res.alloc, &res.trace);
}

} // namespace

ThreeValueCase classify(const Value& b, const Value& c) {
    if (b <= Value(1, 2)) return ThreeValueCase::Case1;
    if (b + c >= Value(2, 3)) return ThreeValueCase::Case2;
    return ThreeValueCase::Case3;
}

const char* caseName(ThreeValueCase c) {
    switch (c) {
    case ThreeValueCase::Case1: return "Case1";
    case ThreeValueCase::Case2: return "Case2";
    default: return "Case3";
    }
}

AllocatorResult multigraphAllocate(const MultigraphInstance& mg, engines::EngineMode mode) {
    mg.validate();
    const Instance inst = mg.toInstance();

    AllocatorResult res;
    if (inst.m <= inst.n) {
        res.alloc = trivialComplete(inst);
        res.engineName = "trivial";
        certify(inst, res);
        return res;
    }

    EngineOptions opts;
    opts.mode = mode;
    auto er = engines::run3PA(inst, seedAllocation(inst), opts);
    res.alloc = std::move(er.alloc);
    res.trace = std::move(er.trace);
    res.engineIterations = res.trace.stepCount();
    res.engineName = "3PA";

    std::vector<int> owners;
    const auto contested = contestedCriticals(inst, res.alloc, owners);
    if (mode == EngineMode::Debug) {
        // A parallel edge is worthless to non-endpoints, so a contested good
        // is critical for exactly its two endpoints.
        for (int g : contested)
            invariant(owners[static_cast<std::size_t>(g)] == 2,
                      "contested good critical for more than two agents in a multigraph");
    }
    if (!contested.empty()) {
        res.trace.beginIteration();
        auto ge = graphs::buildGraph(inst, res.alloc, graphs::GraphKind::Enhanced);
        const auto srcs = graphs::sources(ge);
        invariant(!srcs.empty(), "enhanced graph of the engine output has no source");
        for (int g : contested) insertSorted(res.alloc.bundles[srcs.front()], g);
        res.trace.step("contested-critical", poolSizeOf(inst, res.alloc),
                       "gave contested goods " + joinInts(contested) + " to source "
                           + std::to_string(srcs.front()));
    }

    finishStaged(inst, res);
    certify(inst, res);
    return res;
}

AllocatorResult fewAgentsAllocate(const Instance& input, engines::EngineMode mode) {
    input.validate();
    require(input.n <= 7, "few-agents allocator supports at most 7 agents");

    AllocatorResult res;
    if (input.m <= input.n) {
        res.alloc = trivialComplete(input);
        res.engineName = "trivial";
        certify(input, res);
        return res;
    }

    EngineOptions opts;
    opts.mode = mode;
    auto er = engines::run3PAPlus(input, seedAllocation(input), opts);
    res.alloc = std::move(er.alloc);
    res.trace = std::move(er.trace);
    res.engineIterations = res.trace.stepCount();
    res.engineName = "3PA+";

    std::vector<int> owners;
    const auto contested = contestedCriticals(input, res.alloc, owners);
    if (!contested.empty()) {
        // Contested goods only exist while the pool is nonempty, i.e. when the
        // engine halted stuck; that state has an acyclic enhanced graph.
        auto ge = graphs::buildGraph(input, res.alloc, graphs::GraphKind::Enhanced);
        const auto srcs = graphs::sources(ge);
        invariant(!srcs.empty(), "enhanced graph of the engine output has no source");
        if (srcs.size() >= 2)
            invariant(contested.size() <= 2,
                      "more than two contested goods despite two enhanced-graph sources");
        else
            invariant(contested.size() <= 3,
                      "more than three contested goods with a single enhanced-graph source");
        res.trace.beginIteration();
        if (contested.size() == 2 && srcs.size() >= 2) {
            insertSorted(res.alloc.bundles[srcs[0]], contested[0]);
            insertSorted(res.alloc.bundles[srcs[1]], contested[1]);
            res.trace.step("contested-critical", poolSizeOf(input, res.alloc),
                           "split contested goods " + joinInts(contested) + " across sources "
                               + std::to_string(srcs[0]) + "," + std::to_string(srcs[1]));
        } else {
            for (int g : contested) insertSorted(res.alloc.bundles[srcs.front()], g);
            res.trace.step("contested-critical", poolSizeOf(input, res.alloc),
                           "gave contested goods " + joinInts(contested) + " to source "
                               + std::to_string(srcs.front()));
        }
    }

    finishStaged(input, res);
    certify(input, res);
    return res;
}

int kMax(const Value& b, const Value& c) {
    require(b > Value(1, 2), "k_max needs b > 1/2");
    require(b + c < Value(2, 3), "k_max needs b + c < 2/3");
    require(c > 0, "k_max needs c > 0");
    const BigInt steps = ceilRational((Value(2, 3) - b) / c);
    require(steps <= 1000000000, "k_max too large to represent");
    const int k = 1 + steps.convert_to<int>();
    invariant(b + (k - 1) * c >= Value(2, 3) && b + (k - 2) * c < Value(2, 3),
              "k_max must satisfy its defining inequalities");
    return k;
}

ThreeValueInstance perturbZeroC(const ThreeValueInstance& inst) {
    inst.validate();
    if (inst.c != 0) return inst;
    const int m = inst.m;
    Value best;
    bool found = false;
    for (int k = -3 * m; k <= 2 * m; ++k) {
        for (int l = -3 * m; l <= 2 * m; ++l) {
            Value v = Value(k) + l * inst.b;
            if (v == 0) continue;
            if (v < 0) v = -v;
            if (!found || v < best) {
                best = v;
                found = true;
            }
        }
    }
    invariant(found, "perturbation scan found no nonzero combination");
    ThreeValueInstance out = inst;
    out.c = best / (3 * m);
    out.validate();
    return out;
}

AllocatorResult threeValuesAllocate(const ThreeValueInstance& tv, engines::EngineMode mode) {
    require(tv.b != tv.c,
            "b = c collapses to a two-value instance; exact algorithms for those exist "
            "elsewhere and this allocator does not cover them");
    tv.validate();
    const Instance original = tv.toInstance();

    AllocatorResult res;
    if (tv.m <= tv.n) {
        res.alloc = trivialComplete(original);
        res.engineName = "trivial";
        certify(tv, res);
        return res;
    }

    EngineOptions opts;
    opts.mode = mode;
    switch (classify(tv.b, tv.c)) {
    case ThreeValueCase::Case1: {
        auto er = engines::run3PA(original, seedAllocation(original), opts);
        res.alloc = std::move(er.alloc);
        res.trace = std::move(er.trace);
        res.engineIterations = res.trace.stepCount();
        res.engineName = "3PA";
        res.alloc = subroutines::envyCycleElimination(original, res.alloc, &res.trace);
        break;
    }
    case ThreeValueCase::Case2: {
        auto er = engines::run3PAStar(original, seedAllocation(original), opts);
        res.alloc = std::move(er.alloc);
        res.trace = std::move(er.trace);
        res.engineIterations = res.trace.stepCount();
        res.engineName = "3PA*";
        res.alloc = subroutines::envyCycleElimination(original, res.alloc, &res.trace);
        break;
    }
    default: {
        // c = 0 runs on a perturbed copy; a 2/3-EFX allocation of that copy
        // is 2/3-EFX for the input, so the certificate below still uses the
        // original values.
        const ThreeValueInstance runTv = perturbZeroC(tv);
        const Instance perturbed = runTv.toInstance();
        auto er = engines::run3PAPlusPlus(runTv, seedAllocation(perturbed), opts);
        res.alloc = std::move(er.alloc);
        res.trace = std::move(er.trace);
        res.engineIterations = res.trace.stepCount();
        res.engineName = "3PA++";
        res.alloc = subroutines::envyCycleElimination(perturbed, res.alloc, &res.trace);
        break;
    }
    }

    certify(tv, res);
    return res;
}

} // namespace efx::allocators
