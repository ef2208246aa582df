#include <benchmark/benchmark.h>

#include "pmivec/eval.hpp"
#include "pmivec/rng.hpp"

namespace {

pmivec::EmbeddingTable random_table(std::size_t n, std::size_t d) {
    pmivec::Rng rng(9);
    pmivec::EmbeddingTable t;
    t.n = n;
    t.d = d;
    t.vectors.resize(n * d);
    for (auto& v : t.vectors) v = rng.uniform(-1, 1);
    for (std::uint32_t i = 0; i < n; ++i) {
        t.words.push_back("w" + std::to_string(i));
        t.index.emplace(t.words.back(), i);
    }
    return t;
}

void AnalogyArgmin(benchmark::State& state) {
    const auto table = random_table(static_cast<std::size_t>(state.range(0)), 100);
    pmivec::Rng rng(11);
    pmivec::eval::AnalogyDataset ds;
    for (int q = 0; q < 100; ++q) {
        ds.questions.push_back({table.words[rng.below(table.n)],
                                table.words[rng.below(table.n)],
                                table.words[rng.below(table.n)],
                                table.words[rng.below(table.n)],
                                ""});
    }
    for (auto _ : state) {
        auto result = pmivec::eval::evaluate_analogy(table, ds);
        benchmark::DoNotOptimize(result.accuracy);
    }
    state.SetItemsProcessed(state.iterations() * 100 * state.range(0));
}
BENCHMARK(AnalogyArgmin)->Arg(5000)->Arg(20000)->Unit(benchmark::kMillisecond);

void SpearmanRho(benchmark::State& state) {
    pmivec::Rng rng(13);
    std::vector<double> a(353), b(353);
    for (auto& v : a) v = rng.uniform(0, 10);
    for (auto& v : b) v = rng.uniform(0, 10);
    for (auto _ : state) {
        benchmark::DoNotOptimize(pmivec::eval::spearman_rho(a, b));
    }
}
BENCHMARK(SpearmanRho);

} // namespace
