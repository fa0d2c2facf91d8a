#pragma once

#include "efx/engines.hpp"
#include "efx/model.hpp"
#include "efx/trace.hpp"
#include "efx/verification.hpp"

namespace efx::allocators {

enum class ThreeValueCase { Case1, Case2, Case3 };

// Case1: b <= 1/2; Case2: b > 1/2 and b+c >= 2/3; Case3: b > 1/2 and b+c < 2/3.
ThreeValueCase classify(const Value& b, const Value& c);
const char* caseName(ThreeValueCase c);

struct AllocatorResult {
    PartialAllocation alloc; // complete
    RunTrace trace;
    verification::VerifierReport certificate; // recomputed by the verifier, never engine bookkeeping
    std::int64_t engineIterations = 0;
    std::string engineName;
};

// Complete 2/3-EFX allocation for a multigraph instance (m > n runs the full
// pipeline; m <= n short-circuits to the trivial exact-EFX allocation).
AllocatorResult multigraphAllocate(const MultigraphInstance& inst,
                                   engines::EngineMode mode = engines::EngineMode::Fast);

// Complete 2/3-EFX allocation for any additive instance with n <= 7.
AllocatorResult fewAgentsAllocate(const Instance& inst,
                                  engines::EngineMode mode = engines::EngineMode::Fast);

// The unique k with b+(k-1)c >= 2/3 > b+(k-2)c; defined for b > 1/2,
// b+c < 2/3, c > 0; always >= 3.
int kMax(const Value& b, const Value& c);

// For c = 0: replaces c by c' = (1/3m) * min{|k + l*b| : k,l in {-3m..2m},
// k + l*b != 0} (exhaustive scan); identity when c > 0. Any 2/3-EFX
// allocation of the result is 2/3-EFX for the input.
ThreeValueInstance perturbZeroC(const ThreeValueInstance& inst);

// Complete 2/3-EFX allocation for a 3-value instance; dispatches by case.
// For c = 0 the pipeline runs on the perturbed instance and the certificate
// is computed against the original values.
AllocatorResult threeValuesAllocate(const ThreeValueInstance& inst,
                                    engines::EngineMode mode = engines::EngineMode::Fast);

} // namespace efx::allocators
