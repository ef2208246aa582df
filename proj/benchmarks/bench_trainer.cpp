#include <benchmark/benchmark.h>

#include "pmivec/cooccur.hpp"
#include "pmivec/rng.hpp"
#include "pmivec/trainer.hpp"

namespace {

pmivec::cooccur::PmiMatrix bench_matrix(std::size_t n, std::size_t len) {
    pmivec::Rng rng(5);
    std::vector<std::uint32_t> ids(len);
    for (auto& id : ids) id = static_cast<std::uint32_t>(rng.below(n));
    const auto stats = pmivec::cooccur::count_pairs(n, ids, 5);
    return pmivec::cooccur::build_pmi_matrix(stats);
}

void TrainEpoch(benchmark::State& state) {
    // sparse enough that negative draws stay admissible
    const auto pmi = bench_matrix(2000, 50000);
    pmivec::trainer::TrainConfig config;
    config.variant = static_cast<pmivec::trainer::LossVariant>(state.range(1));
    config.dim = static_cast<std::size_t>(state.range(0));
    config.epochs = 1;
    config.negatives = 5;
    config.seed = 2;
    for (auto _ : state) {
        auto result = pmivec::trainer::train(pmi, config);
        benchmark::DoNotOptimize(result.embeddings.w.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(pmi.entries.size()) * 6);
}
BENCHMARK(TrainEpoch)
    ->Args({100, 0})  // d=100, variant D
    ->Args({100, 1})  // L
    ->Args({100, 2})  // P
    ->Args({300, 0})
    ->Unit(benchmark::kMillisecond);

} // namespace
