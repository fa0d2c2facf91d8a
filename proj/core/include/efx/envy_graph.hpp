#pragma once

#include "efx/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace efx::graphs {

enum class GraphKind {
    Plain,          // edge (i,j) iff v_i(X_i) < v_i(X_j)
    Reduced,        // Plain minus weak pair-vs-singleton envy edges
    Enhanced,       // Reduced plus red near-envy edges into Reduced sources
    ReducedPlus,    // Reduced plus grey value-1 tie edges
    EnhancedPlus,   // ReducedPlus plus red b-good edges into ReducedPlus sources
    DoublyEnhanced, // EnhancedPlus plus edges into EnhancedPlus sources; self-loops legal
};

enum class EdgeColor : unsigned char { None = 0, Plain, Red, Grey, De };

const char* graphKindName(GraphKind kind);

struct ThreeValueParams {
    Value b, c;
};

struct EnvyGraph {
    GraphKind kind = GraphKind::Plain;
    int n = 0;
    std::vector<EdgeColor> adj; // n*n matrix, adj[i*n+j]

    EdgeColor color(int i, int j) const { return adj[static_cast<size_t>(i) * n + j]; }
    bool hasEdge(int i, int j) const { return color(i, j) != EdgeColor::None; }
    std::vector<int> successors(int i) const;
    int inDegree(int j) const; // self-loops count
};

// Rebuilt from scratch against the current allocation; EnhancedPlus and
// DoublyEnhanced require the three-value parameters.
EnvyGraph buildGraph(const Instance& inst, const PartialAllocation& alloc, GraphKind kind,
                     const std::optional<ThreeValueParams>& params = std::nullopt);

// In-degree-0 vertices, ascending.
std::vector<int> sources(const EnvyGraph& graph);

struct CyclePath {
    std::vector<int> vertices; // cycle: closing edge back->front implied; path: as listed
    bool isCycle = false;
    bool jaundiced = false; // contains a non-grey edge
};

// Some cycle of the graph, or none. With requireJaundiced, only cycles
// containing a non-grey edge qualify (an all-grey graph region can hide no
// qualifying cycle from this search; enumeration is complete).
std::optional<CyclePath> findCycle(const EnvyGraph& graph, bool requireJaundiced);

// Path from some source to target: the target itself if it is a source, else
// the BFS-shortest path from the lexicographically least source that reaches
// target (lex tie-break on predecessors). none if no source reaches it.
std::optional<CyclePath> pathFromSourceTo(const EnvyGraph& graph, int target);

// BFS-shortest from->to path with deterministic (lex-least predecessor)
// reconstruction; vertices equal to `avoid` are skipped entirely (-1 = none).
// Self-loops are never traversed. none if unreachable.
std::optional<std::vector<int>> shortestPathAvoiding(const EnvyGraph& graph, int from, int to, int avoid = -1);

// R(X): agents with no ReducedPlus path from any agent j with v_j(X_j) != 1
// (including the zero-length path, so such j are themselves excluded).
std::vector<int> secludedSet(const Instance& inst, const PartialAllocation& alloc);

std::string toDot(const EnvyGraph& graph);

} // namespace efx::graphs
