#include <benchmark/benchmark.h>

#include "efx/allocators.hpp"
#include "efx/engines.hpp"
#include "efx/envy_graph.hpp"
#include "efx/generators.hpp"
#include "efx/verification.hpp"

using namespace efx;

namespace {

Instance additive(std::uint64_t seed, int n, int m) {
    gen::GenSpec spec;
    spec.seed = seed;
    spec.family = gen::Family::Additive;
    spec.n = n;
    spec.m = m;
    return gen::genAdditive(spec);
}

void BM_run3PA(benchmark::State& state) {
    const auto inst = additive(7, static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    const auto seed = seedAllocation(inst);
    for (auto _ : state) {
        auto res = engines::run3PA(inst, seed);
        benchmark::DoNotOptimize(res.alloc.bundles);
    }
}
BENCHMARK(BM_run3PA)->Args({4, 12})->Args({7, 16});

void BM_maxAlphaEfx(benchmark::State& state) {
    const auto inst = additive(11, static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    const auto alloc = allocators::fewAgentsAllocate(inst).alloc;
    for (auto _ : state) {
        auto rep = verification::maxAlphaEfx(inst, alloc);
        benchmark::DoNotOptimize(rep.unbounded);
    }
}
BENCHMARK(BM_maxAlphaEfx)->Args({4, 12})->Args({7, 16});

void BM_buildGraph(benchmark::State& state) {
    const auto inst = additive(13, static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    const auto alloc = allocators::fewAgentsAllocate(inst).alloc;
    for (auto _ : state) {
        auto g = graphs::buildGraph(inst, alloc, graphs::GraphKind::Reduced);
        benchmark::DoNotOptimize(g.adj);
    }
}
BENCHMARK(BM_buildGraph)->Args({4, 12})->Args({7, 16});

void BM_multigraphAllocate(benchmark::State& state) {
    gen::GenSpec spec;
    spec.seed = 17;
    spec.family = gen::Family::Multigraph;
    spec.n = static_cast<int>(state.range(0));
    spec.m = static_cast<int>(state.range(1));
    const auto mg = gen::genMultigraph(spec);
    for (auto _ : state) {
        auto res = allocators::multigraphAllocate(mg);
        benchmark::DoNotOptimize(res.alloc.bundles);
    }
}
BENCHMARK(BM_multigraphAllocate)->Args({4, 12})->Args({8, 20});

void BM_threeValuesAllocate(benchmark::State& state) {
    gen::GenSpec spec;
    spec.seed = 19;
    spec.family = gen::Family::ThreeValue;
    spec.n = static_cast<int>(state.range(0));
    spec.m = static_cast<int>(state.range(1));
    spec.tvCase = allocators::ThreeValueCase::Case3;
    const auto tv = gen::genThreeValue(spec);
    for (auto _ : state) {
        auto res = allocators::threeValuesAllocate(tv);
        benchmark::DoNotOptimize(res.alloc.bundles);
    }
}
BENCHMARK(BM_threeValuesAllocate)->Args({4, 12})->Args({6, 14});

} // namespace

BENCHMARK_MAIN();
