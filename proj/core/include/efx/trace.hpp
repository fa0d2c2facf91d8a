#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace efx {

// Ordered record of what an engine (and the subroutines it calls) did.
// Exactly one step event per engine loop iteration, with strictly increasing
// iteration numbers; sub-events record subroutine work under the same
// iteration number.
struct RunTrace {
    struct Event {
        std::int64_t iter = 0;
        std::string op;      // step id ("1".."13", "8.5", "8.5*") or subroutine name
        std::int64_t poolSize = 0;
        std::string detail;  // human-readable mutation summary
        bool isStep = false;
    };

    std::vector<Event> events;
    std::int64_t currentIter = 0;

    void beginIteration() { ++currentIter; }
    void step(const std::string& id, std::int64_t poolSize, const std::string& detail) {
        events.push_back({currentIter, id, poolSize, detail, true});
    }
    void sub(const std::string& op, std::int64_t poolSize, const std::string& detail) {
        events.push_back({currentIter, op, poolSize, detail, false});
    }
    std::int64_t stepCount() const {
        std::int64_t k = 0;
        for (const auto& e : events)
            if (e.isStep) ++k;
        return k;
    }
};

// One JSON object per line: {"iter":k,"op":name,"pool":p,"detail":...}.
std::string traceToJsonLines(const RunTrace& trace);

} // namespace efx
