#include "pmivec/embedding.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "pmivec/error.hpp"
#include "pmivec/rng.hpp"

namespace pmivec {

EmbeddingPair init_embeddings(std::size_t n, std::size_t d, std::uint64_t seed) {
    if (n < 1 || d < 1) throw Error("init_embeddings: n and d must be >= 1");
    EmbeddingPair pair;
    pair.d = d;
    pair.n = n;
    pair.w.resize(d * n);
    pair.c.resize(d * n);
    Rng rng(seed);
    const double half = 0.5 / static_cast<double>(d);
    for (auto& v : pair.w) v = rng.uniform(-half, half);
    for (auto& v : pair.c) v = rng.uniform(-half, half);
    return pair;
}

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void save_word2vec(const std::filesystem::path& path, const std::vector<std::string>& words,
                   std::span<const double> colmajor, std::size_t d) {
    const std::size_t n = words.size();
    if (colmajor.size() != d * n) throw Error("save_word2vec: shape mismatch");
    std::ofstream out(path);
    if (!out) throw Error("cannot write vectors file: " + path.string());
    out << n << ' ' << d << "\n";
    for (std::size_t i = 0; i < n; ++i) {
        out << words[i];
        for (std::size_t k = 0; k < d; ++k) {
            out << ' ' << format_full(colmajor[i * d + k]);
        }
        out << "\n";
    }
    if (!out) throw Error("write failed: " + path.string());
}

EmbeddingTable load_word2vec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open vectors file: " + path.string());
    EmbeddingTable table;
    std::string header;
    if (!std::getline(in, header)) throw Error("empty vectors file: " + path.string());
    {
        std::istringstream hs(header);
        if (!(hs >> table.n >> table.d)) {
            throw Error("malformed vectors header: " + path.string());
        }
    }
    table.words.reserve(table.n);
    table.vectors.resize(table.n * table.d);
    std::string line;
    for (std::size_t i = 0; i < table.n; ++i) {
        if (!std::getline(in, line)) {
            throw Error("vectors file truncated at row " + std::to_string(i) + ": " +
                        path.string());
        }
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word)) throw Error("malformed vectors row " + std::to_string(i));
        for (std::size_t k = 0; k < table.d; ++k) {
            if (!(ls >> table.vectors[i * table.d + k])) {
                throw Error("malformed vector for word '" + word + "' in " + path.string());
            }
        }
        table.index.emplace(word, static_cast<std::uint32_t>(i));
        table.words.push_back(std::move(word));
    }
    return table;
}

} // namespace pmivec
