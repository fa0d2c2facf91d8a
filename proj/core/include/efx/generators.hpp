#pragma once

#include "efx/allocators.hpp"
#include "efx/model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace efx::gen {

// SplitMix64; the fixed PRNG behind every generator. Identical seeds produce
// byte-identical instances on every platform.
struct SplitMix64 {
    std::uint64_t state = 0;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d649bb133111ebULL;
        return z ^ (z >> 31);
    }
    // Uniform-enough pick in [0, bound); bound > 0.
    std::uint64_t below(std::uint64_t bound) { return next() % bound; }
    int intIn(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1))); }
};

enum class Family { Additive, Multigraph, ThreeValue };

const char* familyName(Family f);

struct GenSpec {
    std::uint64_t seed = 0;
    Family family = Family::Additive;
    int n = 0;
    int m = 0;
    // Family parameters.
    std::vector<Value> grid;                          // value grid; default 0,1/100,...,1
    std::optional<allocators::ThreeValueCase> tvCase; // three-value target case
    bool forceZeroC = false;                          // three-value: force c = 0 (Case3 only)
};

std::vector<Value> defaultGrid();

Instance genAdditive(const GenSpec& spec);
MultigraphInstance genMultigraph(const GenSpec& spec);
ThreeValueInstance genThreeValue(const GenSpec& spec);

// The fixed 3-agent/6-good fixture: everyone values goods 0 and 1 at 1,
// agent i values good 2+i at 3/5, and every other entry is 1/100.
ThreeValueInstance exampleOne();

} // namespace efx::gen
