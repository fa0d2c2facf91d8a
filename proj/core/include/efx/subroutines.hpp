#pragma once

#include "efx/envy_graph.hpp"
#include "efx/model.hpp"
#include "efx/trace.hpp"

#include <functional>
#include <map>
#include <optional>

namespace efx::subroutines {

using graphs::CyclePath;
using graphs::EnvyGraph;
using graphs::GraphKind;
using graphs::ThreeValueParams;

// Every edge (i,j) of the cycle hands j's previous bundle to i (snapshot
// semantics; a self-loop is the identity). Pool untouched.
PartialAllocation cycleResolution(const PartialAllocation& alloc, const EnvyGraph& graph,
                                  const CyclePath& cycle);

// Resolve cycles of the given graph kind until none remain. The graph's edge
// count strictly decreases with each resolution, so at most m rounds run.
// With requireJaundiced, only jaundiced cycles are resolved (grey-capable
// graphs); the result then has no jaundiced cycle.
PartialAllocation allCyclesResolution(const Instance& inst, const PartialAllocation& alloc,
                                      GraphKind kind,
                                      const std::optional<ThreeValueParams>& params = std::nullopt,
                                      RunTrace* trace = nullptr, bool requireJaundiced = false);

// Shift bundles one step forward along the path: vertex k receives vertex
// k+1's previous bundle. Returns only those updated bundles; the terminal's
// new bundle (and what becomes of the first vertex's old bundle) is the
// caller's responsibility. Single-vertex paths are rejected.
std::map<int, Bundle> pathResolutionShifts(const PartialAllocation& alloc, const CyclePath& path);

// Path must start at a source s with |X_s| = 2 and the pool must be nonempty.
// Shifts per pathResolutionShifts, then the terminal agent i receives
// {argmax of X_s under v_i, argmax of the pool under v_i} (lex tie-breaks);
// the rest of X_s returns to the pool.
PartialAllocation pathResolutionStar(const Instance& inst, const PartialAllocation& alloc,
                                     const EnvyGraph& graph, const CyclePath& path);

// Exactly one pool good g remains; the lex-least singleton agent i with
// 3*v_i(g) > 2*v_i(X_i) that is not a Reduced-graph source takes it via
// pathResolutionStar along a Reduced-graph path from a source to i.
// Violated expectations are internal-invariant errors: the engine's step
// ordering is supposed to guarantee them.
PartialAllocation singletonPool(const Instance& inst, const PartialAllocation& alloc,
                                RunTrace* trace = nullptr);

// Agents in ascending order each append their favorite pool good (lex
// tie-break) until agents or pool run out.
PartialAllocation singleRoundRobin(const Instance& inst, const PartialAllocation& alloc,
                                   const std::vector<int>& agents);

// Completes the allocation: for each remaining good in ascending order,
// resolve plain-envy cycles until a source exists, then give the good to the
// lex-least source. Per-agent values never decrease. The observer (if any)
// sees the allocation after every mutation.
PartialAllocation envyCycleElimination(
    const Instance& inst, const PartialAllocation& alloc, RunTrace* trace = nullptr,
    const std::function<void(const PartialAllocation&)>& observer = {});

// Allocates all critical goods of a 2/3-EFX allocation in which each agent
// has at most one critical good and no good is critical for two agents.
// Each round hands one critical good either to its agent (bundled with a
// source's bundle moved down a path) or to the source itself; plain cycles
// are resolved before and after. Output is 2/3-EFX with no critical goods.
PartialAllocation uncontestedCritical(const Instance& inst, const PartialAllocation& alloc,
                                      GraphKind kind = GraphKind::Plain,
                                      RunTrace* trace = nullptr);

} // namespace efx::subroutines
