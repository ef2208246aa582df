#include <benchmark/benchmark.h>

#include "pmivec/cooccur.hpp"
#include "pmivec/rng.hpp"

namespace {

std::vector<std::uint32_t> id_stream(std::size_t n, std::size_t len) {
    pmivec::Rng rng(3);
    std::vector<std::uint32_t> ids(len);
    for (auto& id : ids) id = static_cast<std::uint32_t>(rng.below(n));
    return ids;
}

void CountPairs(benchmark::State& state) {
    const auto ids = id_stream(2000, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto stats = pmivec::cooccur::count_pairs(2000, ids, 10);
        benchmark::DoNotOptimize(stats.total_pairs);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * 20);  // pair visits
}
BENCHMARK(CountPairs)->Arg(20000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BuildPmiMatrix(benchmark::State& state) {
    const auto ids = id_stream(2000, static_cast<std::size_t>(state.range(0)));
    const auto stats = pmivec::cooccur::count_pairs(2000, ids, 10);
    for (auto _ : state) {
        auto pmi = pmivec::cooccur::build_pmi_matrix(stats);
        benchmark::DoNotOptimize(pmi.entries.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(stats.pair_counts.size()));
}
BENCHMARK(BuildPmiMatrix)->Arg(100000)->Unit(benchmark::kMillisecond);

} // namespace
