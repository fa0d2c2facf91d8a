#pragma once

#include <stdexcept>
#include <string>

namespace efx {

// Bad user-supplied data: malformed files, violated operation preconditions.
// CLI maps this to exit code 2.
struct InputError : std::runtime_error {
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A guarantee the algorithms themselves promise was observed broken: an
// iteration bound blown, a definitional witness missing, a step invariant
// failing. Always a bug in this artifact, never the caller's fault.
// CLI maps this to exit code 3 and writes a crash artifact.
struct InternalInvariantError : std::runtime_error {
    explicit InternalInvariantError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw InputError(what);
}

inline void invariant(bool cond, const std::string& what) {
    if (!cond) throw InternalInvariantError(what);
}

} // namespace efx
