// Batch Newton slopes: the OpenMP kernel against its serial reference on the
// same random isocrystals over W_M(F_q).

#include <benchmark/benchmark.h>

#include "wdk/gdisplay.hpp"
#include "wdk/random.hpp"

namespace {

std::vector<wdk::Isocrystal> workload(int count, int n) {
    wdk::Rng rng(1234);
    wdk::RingPtr G = wdk::BaseRing::galois(2, 20, wdk::BaseRing::default_minpoly(2, 2));
    std::vector<wdk::Isocrystal> xs;
    for (int i = 0; i < count; ++i) xs.push_back({wdk::random_invertible(G, n, rng), 0});
    return xs;
}

void BM_slopes_parallel(benchmark::State& state) {
    const auto xs = workload(static_cast<int>(state.range(0)), 4);
    for (auto _ : state) benchmark::DoNotOptimize(wdk::newton_slopes_batch(xs));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_slopes_serial(benchmark::State& state) {
    const auto xs = workload(static_cast<int>(state.range(0)), 4);
    for (auto _ : state) benchmark::DoNotOptimize(wdk::newton_slopes_batch_serial(xs));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_slopes_parallel)->Arg(16)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_slopes_serial)->Arg(16)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
