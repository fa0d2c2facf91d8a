#include "efx/envy_graph.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

namespace efx::graphs {

namespace {

// Rotates a cycle's vertex list so the smallest agent id comes first.
void rotateLexLeast(std::vector<int>& cycle) {
    auto it = std::min_element(cycle.begin(), cycle.end());
    std::rotate(cycle.begin(), it, cycle.end());
}

bool cycleJaundiced(const EnvyGraph& g, const std::vector<int>& cycle) {
    for (size_t k = 0; k < cycle.size(); ++k) {
        int u = cycle[k], w = cycle[(k + 1) % cycle.size()];
        if (g.color(u, w) != EdgeColor::Grey) return true;
    }
    return false;
}

bool pathJaundiced(const EnvyGraph& g, const std::vector<int>& path) {
    for (size_t k = 0; k + 1 < path.size(); ++k)
        if (g.color(path[k], path[k + 1]) != EdgeColor::Grey) return true;
    return false;
}

} // namespace

// Shortest path from `from` to `to` (BFS over edge existence), reconstructed
// backwards with the smallest qualifying predecessor at every hop, so the
// result is unique. `avoid` < 0 disables the exclusion.
std::optional<std::vector<int>> shortestPathAvoiding(const EnvyGraph& g, int from, int to, int avoid) {
    if (from == avoid || to == avoid) return std::nullopt;
    std::vector<int> dist(g.n, -1);
    dist[from] = 0;
    std::queue<int> q;
    q.push(from);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int w = 0; w < g.n; ++w) {
            if (w == avoid || w == u) continue;
            if (g.hasEdge(u, w) && dist[w] < 0) {
                dist[w] = dist[u] + 1;
                q.push(w);
            }
        }
    }
    if (dist[to] < 0) return std::nullopt;
    std::vector<int> path(dist[to] + 1);
    path[dist[to]] = to;
    for (int d = dist[to]; d > 0; --d) {
        int v = path[d];
        for (int u = 0; u < g.n; ++u) {
            if (u != avoid && u != v && dist[u] == d - 1 && g.hasEdge(u, v)) {
                path[d - 1] = u;
                break;
            }
        }
    }
    return path;
}

const char* graphKindName(GraphKind kind) {
    switch (kind) {
        case GraphKind::Plain: return "plain";
        case GraphKind::Reduced: return "reduced";
        case GraphKind::Enhanced: return "enhanced";
        case GraphKind::ReducedPlus: return "reduced+";
        case GraphKind::EnhancedPlus: return "enhanced+";
        case GraphKind::DoublyEnhanced: return "doubly-enhanced";
    }
    return "?";
}

std::vector<int> EnvyGraph::successors(int from) const {
    std::vector<int> out;
    for (int j = 0; j < n; ++j)
        if (hasEdge(from, j)) out.push_back(j);
    return out;
}

int EnvyGraph::inDegree(int to) const {
    int d = 0;
    for (int i = 0; i < n; ++i)
        if (hasEdge(i, to)) ++d;
    return d;
}

EnvyGraph buildGraph(const Instance& inst, const PartialAllocation& alloc, GraphKind kind,
                     const std::optional<ThreeValueParams>& params) {
    const bool needsParams = kind == GraphKind::EnhancedPlus || kind == GraphKind::DoublyEnhanced;
    require(!needsParams || params.has_value(), "this graph kind needs the (b, c) value parameters");

    const int n = inst.n;
    EnvyGraph g;
    g.kind = kind;
    g.n = n;
    g.adj.assign(static_cast<size_t>(n) * n, EdgeColor::None);

    std::vector<std::vector<Value>> bv(n, std::vector<Value>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) bv[i][j] = bundleValue(inst, i, alloc.bundles[j]);

    auto setEdge = [&](int i, int j, EdgeColor c) { g.adj[static_cast<size_t>(i) * n + j] = c; };

    // Strict-envy edges, shared by every kind.
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && bv[i][i] < bv[i][j]) setEdge(i, j, EdgeColor::Plain);
    if (kind == GraphKind::Plain) return g;

    // Reduction: drop weak envy of a multi-good bundle toward a singleton.
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (g.color(i, j) == EdgeColor::Plain && alloc.bundles[i].size() > 1 &&
                alloc.bundles[j].size() == 1 && 3 * bv[i][i] >= 2 * bv[i][j])
                setEdge(i, j, EdgeColor::None);
    if (kind == GraphKind::Reduced) return g;

    if (kind == GraphKind::Enhanced) {
        std::vector<int> src = sources(g);
        for (int s : src) {
            if (alloc.bundles[s].size() <= 1) continue;
            for (int i = 0; i < n; ++i)
                if (i != s && alloc.bundles[i].size() == 1 && !g.hasEdge(i, s) && 3 * bv[i][s] >= 2 * bv[i][i])
                    setEdge(i, s, EdgeColor::Red);
        }
        return g;
    }

    // ReducedPlus and beyond: zero-envy ties between value-1 singletons.
    const Value one(1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && !g.hasEdge(i, j) && alloc.bundles[i].size() == 1 && alloc.bundles[j].size() == 1 &&
                bv[i][i] == one && bv[i][j] == one)
                setEdge(i, j, EdgeColor::Grey);
    if (kind == GraphKind::ReducedPlus) return g;

    const Value& b = params->b;
    const Value& c = params->c;
    Bundle pool = poolOf(inst, alloc);
    std::vector<char> poolHasB(n, 0);
    for (int i = 0; i < n; ++i)
        for (int p : pool)
            if (inst.value(i, p) == b) {
                poolHasB[i] = 1;
                break;
            }

    {
        std::vector<int> src = sources(g);
        for (int j : src) {
            for (int i = 0; i < n; ++i) {
                if (i == j || alloc.bundles[i].size() != 1 || g.hasEdge(i, j) || !poolHasB[i]) continue;
                bool bundleHasB = false;
                for (int good : alloc.bundles[j])
                    if (inst.value(i, good) == b) {
                        bundleHasB = true;
                        break;
                    }
                if (bundleHasB) setEdge(i, j, EdgeColor::Red);
            }
        }
    }
    if (kind == GraphKind::EnhancedPlus) return g;

    // DoublyEnhanced; the only kind where self-loops may appear.
    {
        std::vector<int> src = sources(g);
        const Value two(2);
        const Value onePlusB = Value(1) + b;
        for (int j : src) {
            for (int i = 0; i < n; ++i) {
                if (i != j && g.hasEdge(i, j)) continue;
                if (!poolHasB[i]) continue;
                if (!(onePlusB <= bv[i][i] && bv[i][i] < two)) continue;
                int countB = 0;
                bool othersAllC = true;
                for (int good : alloc.bundles[j]) {
                    const Value& v = inst.value(i, good);
                    if (v == b)
                        ++countB;
                    else if (v != c) {
                        othersAllC = false;
                        break;
                    }
                }
                if (countB == 3 && othersAllC) setEdge(i, j, EdgeColor::De);
            }
        }
    }
    return g;
}

std::vector<int> sources(const EnvyGraph& g) {
    std::vector<int> out;
    for (int j = 0; j < g.n; ++j)
        if (g.inDegree(j) == 0) out.push_back(j);
    return out;
}

std::optional<CyclePath> findCycle(const EnvyGraph& g, bool requireJaundiced) {
    const int n = g.n;
    if (!requireJaundiced) {
        // Ordered DFS; the first cycle closed is returned.
        std::vector<int> state(n, 0); // 0 white, 1 on stack, 2 done
        std::vector<int> stack, nextSucc;
        for (int start = 0; start < n; ++start) {
            if (state[start] != 0) continue;
            stack.assign(1, start);
            nextSucc.assign(1, 0);
            state[start] = 1;
            while (!stack.empty()) {
                int u = stack.back();
                int& k = nextSucc.back();
                bool advanced = false;
                while (k < n) {
                    int w = k++;
                    if (!g.hasEdge(u, w)) continue;
                    if (state[w] == 1) {
                        std::vector<int> cycle;
                        auto it = std::find(stack.begin(), stack.end(), w);
                        cycle.assign(it, stack.end());
                        rotateLexLeast(cycle);
                        return CyclePath{cycle, true, cycleJaundiced(g, cycle)};
                    }
                    if (state[w] == 0) {
                        state[w] = 1;
                        stack.push_back(w);
                        nextSucc.push_back(0);
                        advanced = true;
                        break;
                    }
                }
                if (!advanced && k >= n) {
                    state[u] = 2;
                    stack.pop_back();
                    nextSucc.pop_back();
                }
            }
        }
        return std::nullopt;
    }

    // A jaundiced cycle contains a non-grey edge (u,w); close it with a
    // shortest w -> u path. Scanning edges in order keeps the result unique.
    for (int u = 0; u < n; ++u) {
        for (int w = 0; w < n; ++w) {
            EdgeColor c = g.color(u, w);
            if (c == EdgeColor::None || c == EdgeColor::Grey) continue;
            if (u == w) return CyclePath{{u}, true, true};
            auto back = shortestPathAvoiding(g, w, u);
            if (!back) continue;
            std::vector<int> cycle(1, u);
            cycle.insert(cycle.end(), back->begin(), back->end() - 1);
            rotateLexLeast(cycle);
            return CyclePath{cycle, true, true};
        }
    }
    return std::nullopt;
}

std::optional<CyclePath> pathFromSourceTo(const EnvyGraph& g, int target) {
    require(target >= 0 && target < g.n, "path target out of range");
    std::vector<int> src = sources(g);
    for (int s : src)
        if (s == target) return CyclePath{{target}, false, false};
    for (int s : src) {
        auto path = shortestPathAvoiding(g, s, target);
        if (path) return CyclePath{*path, false, pathJaundiced(g, *path)};
    }
    return std::nullopt;
}

std::vector<int> secludedSet(const Instance& inst, const PartialAllocation& alloc) {
    EnvyGraph g = buildGraph(inst, alloc, GraphKind::ReducedPlus);
    const int n = inst.n;
    const Value one(1);
    std::vector<char> tainted(n, 0);
    std::queue<int> q;
    for (int j = 0; j < n; ++j)
        if (bundleValue(inst, j, alloc.bundles[j]) != one) {
            tainted[j] = 1; // zero-length paths count: j excludes itself
            q.push(j);
        }
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int w = 0; w < n; ++w)
            if (w != u && g.hasEdge(u, w) && !tainted[w]) {
                tainted[w] = 1;
                q.push(w);
            }
    }
    std::vector<int> out;
    for (int i = 0; i < n; ++i)
        if (!tainted[i]) out.push_back(i);
    return out;
}

std::string toDot(const EnvyGraph& g) {
    std::ostringstream out;
    out << "digraph " << '"' << graphKindName(g.kind) << '"' << " {\n";
    for (int i = 0; i < g.n; ++i) out << "  a" << i << ";\n";
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) {
            EdgeColor c = g.color(i, j);
            if (c == EdgeColor::None) continue;
            const char* label = c == EdgeColor::Plain  ? "plain"
                                : c == EdgeColor::Red  ? "red"
                                : c == EdgeColor::Grey ? "grey"
                                                       : "de";
            out << "  a" << i << " -> a" << j << " [label=\"" << label << "\"];\n";
        }
    out << "}\n";
    return out.str();
}

} // namespace efx::graphs
