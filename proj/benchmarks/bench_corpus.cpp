#include <benchmark/benchmark.h>

#include <sstream>

#include "pmivec/corpus.hpp"
#include "pmivec/rng.hpp"

namespace {

std::string synthetic_text(std::size_t tokens) {
    pmivec::Rng rng(1);
    std::ostringstream out;
    for (std::size_t k = 0; k < tokens; ++k) {
        out << 'w' << rng.below(5000) << (k % 16 == 15 ? '\n' : ' ');
    }
    return out.str();
}

void Tokenize(benchmark::State& state) {
    const auto text = synthetic_text(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto r = pmivec::corpus::tokenize(text);
        benchmark::DoNotOptimize(r.tokens.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(Tokenize)->Arg(10000)->Arg(100000);

void Subsample(benchmark::State& state) {
    const auto text = synthetic_text(static_cast<std::size_t>(state.range(0)));
    const auto tokens = pmivec::corpus::tokenize(text).tokens;
    const auto vocab = pmivec::corpus::build_vocab(tokens, 1);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        auto s = pmivec::corpus::subsample(tokens, vocab, 1e-3, ++seed);
        benchmark::DoNotOptimize(s.ids.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(Subsample)->Arg(100000);

} // namespace
