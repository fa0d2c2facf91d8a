#pragma once

#include "efx/model.hpp"
#include "efx/verification.hpp"

#include <optional>
#include <string>
#include <variant>

namespace efx::io {

// {"kind":"additive"|"multigraph"|"threevalue", "n", "m", kind payload}.
// additive: "values" = n x m matrix of "p/q" strings / integers / decimals.
// multigraph: "edges" = m objects {"a","b","va","vb"}.
// threevalue: "b", "c", "labels" = n strings of length m over 'a','b','c'.
struct ParsedInstance {
    std::string kind;
    Instance base; // always materialized
    std::optional<MultigraphInstance> multigraph;
    std::optional<ThreeValueInstance> threeValue;
};

ParsedInstance parseInstanceText(const std::string& jsonText);
std::string instanceToJsonText(const Instance& inst);
std::string instanceToJsonText(const MultigraphInstance& inst);
std::string instanceToJsonText(const ThreeValueInstance& inst);

// {"bundles":[[good ids]...]}
PartialAllocation parseAllocationText(const std::string& jsonText, const Instance& inst);
std::string allocationToJsonText(const PartialAllocation& alloc);

// {"alpha":"p/q"|"unbounded","properties":{...},"critical":{agent:[goods]},
//  "witness":{...},"complete":bool}
std::string reportToJsonText(const verification::VerifierReport& report);

std::string readFile(const std::string& path);
void writeFile(const std::string& path, const std::string& content);

} // namespace efx::io
