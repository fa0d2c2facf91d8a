#pragma once

#include "efx/model.hpp"
#include "efx/trace.hpp"

#include <cstdint>
#include <vector>

namespace efx::engines {

// Fast: no per-iteration invariant re-checking (identical allocations).
// Debug: re-checks step exclusivity, bundle-history non-repetition,
// properties a/b at loop boundaries, hierarchy/potential monotonicity.
enum class EngineMode { Fast, Debug };

struct EngineOptions {
    EngineMode mode = EngineMode::Fast;
    bool recordAllocations = false; // keep a per-iteration allocation snapshot
};

struct EngineLimits {
    std::int64_t maxIterations = 0;
    static EngineLimits forStaged(const Instance& inst);      // n*m^2 + 1
    static EngineLimits forThreeValue(const Instance& inst);  // 56*m*n^4
};

struct EngineResult {
    PartialAllocation alloc;
    RunTrace trace;
    std::vector<PartialAllocation> snapshots; // filled when recordAllocations
};

// Staged property-preserving engines over seed allocations (bundle sizes
// 1..2, no empty bundles). Output has bundle sizes <= 2 and, when the pool
// is nonempty, every Enhanced-graph source holds exactly 2 goods.
EngineResult run3PA(const Instance& inst, const PartialAllocation& seed,
                    const EngineOptions& opts = {});
// run3PA plus the source-path two-good handoff step (strict improvement).
EngineResult run3PAPlus(const Instance& inst, const PartialAllocation& seed,
                        const EngineOptions& opts = {});
// run3PA plus the relaxed handoff step: fires at <= (3/2)x for singletons,
// <= 1x for pairs.
EngineResult run3PAStar(const Instance& inst, const PartialAllocation& seed,
                        const EngineOptions& opts = {});

// The 13-step three-value engine. Requires b > 1/2, b + c < 2/3, c > 0,
// an all-singleton seed, and m > n. Output is 2/3-EFX with no critical
// goods; bundles stay within k_max goods.
EngineResult run3PAPlusPlus(const ThreeValueInstance& inst, const PartialAllocation& seed,
                            const EngineOptions& opts = {});

} // namespace efx::engines
