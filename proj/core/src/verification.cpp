#include "efx/verification.hpp"

#include <algorithm>
#include <sstream>

namespace efx::verification {

namespace {

// max_{g in X_j} v_i(X_j \ {g}) together with the lex-least good whose removal
// attains it (= the lex-least minimum-valued good of X_j under v_i).
struct RemovalBest {
    Value value;
    int removed = -1;
};

std::optional<RemovalBest> bestAfterRemoval(const Instance& inst, int viewer, const Bundle& bundle) {
    if (bundle.empty()) return std::nullopt;
    int removed = bundle[0];
    Value minVal = inst.value(viewer, bundle[0]);
    Value total = minVal;
    for (size_t k = 1; k < bundle.size(); ++k) {
        const Value& v = inst.value(viewer, bundle[k]);
        total += v;
        if (v < minVal) {
            minVal = v;
            removed = bundle[k];
        }
    }
    return RemovalBest{total - minVal, removed};
}

std::string describe(const char* what, int i, int j, int g) {
    std::ostringstream ss;
    ss << what << ": agent " << i << " vs agent " << j << ", good " << g;
    return ss.str();
}

} // namespace

AlphaReport maxAlphaEfx(const Instance& inst, const PartialAllocation& alloc) {
    AlphaReport report;
    Value bestNum, bestDen; // alpha = bestNum / bestDen once a pair qualifies
    for (int i = 0; i < inst.n; ++i) {
        Value own = bundleValue(inst, i, alloc.bundles[i]);
        for (int j = 0; j < inst.n; ++j) {
            if (i == j) continue;
            auto rb = bestAfterRemoval(inst, i, alloc.bundles[j]);
            if (!rb || !(rb->value > 0)) continue;
            AlphaReport::Witness w{i, j, rb->removed};
            if (report.unbounded) {
                report.unbounded = false;
                bestNum = own;
                bestDen = rb->value;
                report.argmin.assign(1, w);
                continue;
            }
            // own/rb->value vs bestNum/bestDen, cross-multiplied (denominators > 0)
            Value lhs = own * bestDen, rhs = bestNum * rb->value;
            if (lhs < rhs) {
                bestNum = own;
                bestDen = rb->value;
                report.argmin.assign(1, w);
            } else if (lhs == rhs) {
                report.argmin.push_back(w);
            }
        }
    }
    if (!report.unbounded) {
        report.alpha = bestNum / bestDen;
        report.witness = report.argmin.front();
    }
    return report;
}

std::vector<std::vector<int>> criticalGoods(const Instance& inst, const PartialAllocation& alloc) {
    Bundle pool = poolOf(inst, alloc);
    std::vector<std::vector<int>> out(inst.n);
    for (int i = 0; i < inst.n; ++i) {
        Value own = bundleValue(inst, i, alloc.bundles[i]);
        for (int g : pool)
            if (2 * inst.value(i, g) > own) out[i].push_back(g);
    }
    return out;
}

PropertyReport checkProperties(const Instance& inst, const PartialAllocation& alloc) {
    PropertyReport r;
    Bundle pool = poolOf(inst, alloc);
    auto note = [&](bool& flag, const std::string& msg) {
        flag = false;
        if (r.firstViolation.empty()) r.firstViolation = msg;
    };

    for (int i = 0; i < inst.n; ++i) {
        Value own = bundleValue(inst, i, alloc.bundles[i]);
        const bool singleton = alloc.bundles[i].size() == 1;
        for (int j = 0; j < inst.n; ++j) {
            if (i == j) continue;
            auto rb = bestAfterRemoval(inst, i, alloc.bundles[j]);
            if (!rb) continue;
            if (singleton && r.a && own < rb->value) note(r.a, describe("a", i, j, rb->removed));
            if (r.b && 3 * own < 2 * rb->value) note(r.b, describe("b", i, j, rb->removed));
        }
        for (int g : pool) {
            const Value& vg = inst.value(i, g);
            if (r.c && own < vg) note(r.c, describe("c", i, i, g));
        }
        if (alloc.bundles[i].size() > 1) {
            for (int g : pool)
                if (r.d && 2 * inst.value(i, g) > own) note(r.d, describe("d", i, i, g));
        } else if (singleton) {
            int criticals = 0;
            for (int g : pool) {
                const Value& vg = inst.value(i, g);
                if (2 * vg > own) {
                    ++criticals;
                    if (r.e && (criticals > 1 || 3 * vg > 2 * own)) note(r.e, describe("e", i, i, g));
                }
            }
        }
    }
    return r;
}

PropertyReport checkPropertiesF(const ThreeValueInstance& tv, const PartialAllocation& alloc) {
    Instance inst = tv.toInstance();
    PropertyReport r;
    r.f1 = true;
    r.f2 = true;
    Bundle pool = poolOf(inst, alloc);
    const Value one(1), twoThirds(2, 3);
    auto note = [&](std::optional<bool>& flag, const std::string& msg) {
        flag = false;
        if (r.firstViolation.empty()) r.firstViolation = msg;
    };

    for (int i = 0; i < inst.n; ++i) {
        Value own = bundleValue(inst, i, alloc.bundles[i]);
        if (!(own == one || own < twoThirds)) continue; // outside the band
        for (int g : pool)
            if (*r.f1 && !(inst.value(i, g) < one)) note(r.f1, describe("F1", i, i, g));
        for (int j = 0; j < inst.n; ++j) {
            if (j == i || alloc.bundles[j].size() < 2) continue;
            for (int g : alloc.bundles[j])
                if (*r.f2 && !(inst.value(i, g) < one)) note(r.f2, describe("F2", i, j, g));
        }
    }
    return r;
}

int hierarchyLevel(const Value& v, const Value& b) {
    if (v == 1) return 5;
    if (v >= 2) return 1;
    if (v >= 1 + b) return 2;
    if (v > 1) return 3;
    if (3 * v >= 2) return 4;
    return 5;
}

PotentialValue potential(const ThreeValueInstance& tv, const PartialAllocation& alloc) {
    Instance inst = tv.toInstance();
    PotentialValue f;
    const Value onePlusB = Value(1) + tv.b;
    for (int i = 0; i < inst.n; ++i) {
        Value own = bundleValue(inst, i, alloc.bundles[i]);
        switch (hierarchyLevel(own, tv.b)) {
            case 1: ++f.n2; break;
            case 2: ++f.n1b; break;
            case 3: ++f.n11b; break;
            case 4: ++f.n23; break;
            default: break;
        }
        if (own < onePlusB) f.sw += own;
    }
    return f;
}

OracleResult bruteForceBestAlpha(const Instance& inst, std::optional<int> maxBundleSize,
                                 bool requireComplete,
                                 const std::function<bool(const Instance&, const PartialAllocation&)>& filter) {
    // State-count guard: (n+1)^m <= 2^24 regardless of mode.
    {
        unsigned long long states = 1;
        const unsigned long long cap = 1ull << 24;
        for (int g = 0; g < inst.m; ++g) {
            states *= static_cast<unsigned long long>(inst.n) + 1;
            require(states <= cap, "instance too large for the exhaustive oracle");
        }
    }

    OracleResult result;
    bool haveBest = false;
    Value bestAlpha;
    PartialAllocation alloc;
    alloc.bundles.assign(inst.n, {});

    auto consider = [&](const PartialAllocation& a) {
        if (filter && !filter(inst, a)) return;
        result.feasible = true;
        if (result.unbounded) return; // nothing can beat Unbounded
        AlphaReport r = maxAlphaEfx(inst, a);
        if (r.unbounded) {
            result.unbounded = true;
            result.witness = a;
            return;
        }
        if (!haveBest || r.alpha > bestAlpha) {
            haveBest = true;
            bestAlpha = r.alpha;
            result.witness = a;
        }
    };

    // Goods assigned in ascending order keep every bundle sorted.
    auto rec = [&](auto&& self, int good) -> void {
        if (good == inst.m) {
            consider(alloc);
            return;
        }
        for (int i = 0; i < inst.n; ++i) {
            if (maxBundleSize && static_cast<int>(alloc.bundles[i].size()) >= *maxBundleSize) continue;
            alloc.bundles[i].push_back(good);
            self(self, good + 1);
            alloc.bundles[i].pop_back();
        }
        if (!requireComplete) self(self, good + 1); // leave it in the pool
    };
    rec(rec, 0);

    if (haveBest && !result.unbounded) result.bestAlpha = bestAlpha;
    return result;
}

VerifierReport fullReport(const Instance& inst, const PartialAllocation& alloc) {
    VerifierReport report;
    report.alpha = maxAlphaEfx(inst, alloc);
    report.properties = checkProperties(inst, alloc);
    report.critical = criticalGoods(inst, alloc);
    report.complete = alloc.completeFor(inst);
    return report;
}

VerifierReport fullReport(const ThreeValueInstance& tv, const PartialAllocation& alloc) {
    VerifierReport report = fullReport(tv.toInstance(), alloc);
    PropertyReport f = checkPropertiesF(tv, alloc);
    report.properties.f1 = f.f1;
    report.properties.f2 = f.f2;
    if (report.properties.firstViolation.empty()) report.properties.firstViolation = f.firstViolation;
    return report;
}

} // namespace efx::verification
