// Parallel kernels against their serial references.
#include "coxdim/bounds.hpp"
#include "coxdim/census.hpp"
#include "coxdim/round_tree.hpp"

#include <benchmark/benchmark.h>

using namespace coxdim;

namespace {

const RoundTree& tree() {
    static const RoundTree t = build_round_tree(DefiningGraph::uniform(11, 3), 2, 3);
    return t;
}

std::vector<PolygonKey> bases(int m) {
    std::vector<PolygonKey> out;
    for (int i = 1; i <= m; ++i)
        for (int j = i + 1; j <= m; ++j) out.push_back({GroupElement{}, i, j});
    return out;
}

void BM_Convexity(benchmark::State& s) {
    for (auto _ : s) benchmark::DoNotOptimize(audit_convexity(tree(), 3));
}
void BM_ConvexitySerial(benchmark::State& s) {
    for (auto _ : s) benchmark::DoNotOptimize(audit_convexity_serial(tree(), 3));
}

void BM_Census(benchmark::State& s) {
    const CoxeterGroup W(DefiningGraph::uniform(6, 3));
    const auto b = bases(6);
    for (auto _ : s) benchmark::DoNotOptimize(census_many(W, b, 2));
}
void BM_CensusSerial(benchmark::State& s) {
    const CoxeterGroup W(DefiningGraph::uniform(6, 3));
    const auto b = bases(6);
    for (auto _ : s) benchmark::DoNotOptimize(census_many_serial(W, b, 2));
}

void BM_BoundGrid(benchmark::State& s) {
    for (auto _ : s) benchmark::DoNotOptimize(bound_grid(4, 200, 3, 40));
}
void BM_BoundGridSerial(benchmark::State& s) {
    for (auto _ : s) benchmark::DoNotOptimize(bound_grid_serial(4, 200, 3, 40));
}

}  // namespace

BENCHMARK(BM_Convexity)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvexitySerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Census)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CensusSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BoundGrid)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BoundGridSerial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
